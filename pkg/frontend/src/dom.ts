/** Thin DOM rendering: every displayed value comes from an API response. */

import type { InspectorReport } from './inspector'
import type {
  CatalogEntry,
  PageChunk,
  Prompt,
  TableLayoutView,
  TableView,
} from './types'
import { label } from './i18n'

type Lang = 'ru' | 'en'

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag)
  node.className = className
  if (text !== undefined) node.textContent = text
  return node
}

export function renderCatalogList(
  entries: CatalogEntry[],
  onOpen: (table: string) => void,
  lang: Lang,
): HTMLElement {
  const root = el('div', 'catalog-list')
  for (const entry of entries) {
    const row = el('div', 'catalog-entry')
    row.append(
      el('span', 'catalog-title', `${entry.title} (${entry.source})`),
      el('span', 'catalog-rows', String(entry.rows)),
    )
    const open = el('button', 'catalog-open', label('catalog.open', lang))
    open.addEventListener('click', () => onOpen(entry.table))
    row.append(open)
    root.append(row)
  }
  return root
}

export function renderPrompt(
  prompt: Prompt,
  onAnswer: (value: number | string) => void,
  lang: Lang,
): HTMLElement {
  const root = el('div', 'wizard-prompt')
  if (prompt === null) {
    root.append(el('p', 'wizard-done', label('wizard.done', lang)))
    return root
  }
  root.append(el('p', 'wizard-text', prompt.text))
  if (prompt.type === 'menu') {
    for (const [index, option] of prompt.options.entries()) {
      const button = el('button', 'wizard-option', option)
      button.addEventListener('click', () => onAnswer(index))
      root.append(button)
    }
  } else {
    const input = document.createElement('input')
    input.className = 'wizard-input'
    input.type = prompt.kind === 'number' ? 'number' : 'text'
    const submit = el('button', 'wizard-submit', label('wizard.answer', lang))
    submit.addEventListener('click', () => onAnswer(input.value))
    root.append(input, submit)
  }
  return root
}

export function renderTable(
  view: TableView,
  layout: TableLayoutView | null,
  onCellClick: (recordIndex: number) => void,
): HTMLElement {
  const root = el('table', 'table-view') as HTMLTableElement
  for (const record of view.records) {
    const tr = document.createElement('tr')
    if ('section' in record) {
      const td = document.createElement('td')
      td.colSpan = view.field_ids.length
      td.className = 'table-section'
      td.textContent = record.section
      tr.append(td)
    } else {
      tr.className = view.marks.includes(record.index) ? 'marked' : ''
      for (const field of view.field_ids) {
        const td = document.createElement('td')
        td.textContent = record.fields[field] ?? ''
        tr.append(td)
      }
      tr.addEventListener('click', () => onCellClick(record.index))
    }
    root.append(tr)
  }
  if (layout) {
    root.style.width = `${layout.width}mm`
  }
  return root
}

export function renderChunks(chunks: PageChunk[]): HTMLElement {
  const root = el('div', 'paginate-preview')
  for (const [n, chunk] of chunks.entries()) {
    root.append(
      el('div', 'chunk', `#${n} x=${chunk.x_offset_mm}: ${chunk.records.length}`),
    )
  }
  return root
}

export function renderInspector(report: InspectorReport, lang: Lang): HTMLElement {
  const root = el('div', 'inspector')
  root.append(el('h3', '', label('inspector.duplicates', lang)))
  for (const dupe of report.duplicates) {
    root.append(
      el('div', 'dup', `${dupe.designation}: ${dupe.locations.length}`),
    )
  }
  root.append(el('h3', '', label('inspector.structures', lang)))
  for (const { signature, count } of report.frequencies) {
    root.append(el('div', 'freq', `${signature} ${count}`))
  }
  root.append(el('h3', '', label('inspector.hints', lang)))
  for (const hint of report.hints) {
    root.append(el('div', 'hint', `${hint.designation}: ${hint.evidence}`))
  }
  return root
}
