/** UI state mirrors server state and is never authoritative. */

export type Screen = 'catalog-browser' | 'selection-wizard' | 'table-editor' | 'po-inspector'

export type UiState = {
  screen: Screen
  currentDocumentId: string | null
  openTableElement: number | null
  activeSessionId: string | null
  selectionMarks: number[]
  language: 'ru' | 'en'
}

export function initialState(): UiState {
  return {
    screen: 'catalog-browser',
    currentDocumentId: null,
    openTableElement: null,
    activeSessionId: null,
    selectionMarks: [],
    language: 'ru',
  }
}

export function withScreen(state: UiState, screen: Screen): UiState {
  return { ...state, screen }
}

export function withDocument(state: UiState, id: string | null): UiState {
  return { ...state, currentDocumentId: id, openTableElement: null, selectionMarks: [] }
}

export function withTable(state: UiState, elementId: number | null): UiState {
  return { ...state, openTableElement: elementId, selectionMarks: [] }
}

export function withSession(state: UiState, id: string | null): UiState {
  return { ...state, activeSessionId: id }
}

/** Marks as reported by the last ops response. */
export function withMarks(state: UiState, marks: number[]): UiState {
  return { ...state, selectionMarks: [...marks] }
}

export function withLanguage(state: UiState, language: 'ru' | 'en'): UiState {
  return { ...state, language }
}
