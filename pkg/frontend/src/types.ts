/** Wire types mirroring the service API. The UI never recomputes these. */

export type MenuPrompt = { type: 'menu'; text: string; options: string[] }
export type InputPrompt = { type: 'input'; kind: 'number' | 'string'; text: string }
export type Prompt = MenuPrompt | InputPrompt | null

export type SessionView = {
  id: string
  status: 'awaiting_answer' | 'done'
  prompt: Prompt
  answers: unknown[]
}

export type GeneratedFields = {
  fields: Record<string, string>
  numeric: Record<string, number>
}

export type CatalogEntry = {
  table: string
  structure: string
  title: string
  source: string
  rows: number
}

export type CatalogCell = string | { variants: string[] }

export type CatalogRow = { index: number; cells: Record<string, CatalogCell> }

export type CatalogRowsPage = { columns: string[]; rows: CatalogRow[] }

export type TableRecordView =
  | { index: number; fields: Record<string, string> }
  | { index: number; section: string }

export type TableView = {
  kind: string
  field_ids: string[]
  records: TableRecordView[]
  marks: number[]
}

export type TableLayoutView = {
  width: number
  height: number
  column_xs: number[]
  record_tops: number[]
  cells: { path: number[]; x: number; y: number; w: number; h: number }[]
  boundaries: [number, number, number, number][]
}

export type DuplicateEntry = {
  designation: string
  locations: { element_id: number; position: [number, number] }[]
}

export type StructureReport = {
  frequencies: Record<string, number>
  hints: { designation: string; kind: string; evidence: string }[]
}

export type PageChunk = {
  records: number[]
  x_offset_mm: number
  head_mode: string
}

export type OpResult = {
  ok: boolean
  marks: number[]
  record?: number
  chunks?: PageChunk[]
}

export type CatalogFilters = {
  object_type?: 'pipe' | 'well'
  group?: string
  kip_flag?: 'primary' | 'secondary'
  kip_letter?: string
  interval?: string // KEY:VALUE
}

export type RowFilters = {
  equals?: string // COL:VALUE
  contains?: string // COL:VALUE
  range_?: string // COL:MIN:MAX
}
