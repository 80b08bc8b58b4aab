/** Table editor controller: row menu actions mapped 1:1 to ops payloads. */

import type { ApiClient } from './api'
import type { OpResult, PageChunk, TableLayoutView, TableView } from './types'

export class TableEditor {
  view: TableView | null = null
  layout: TableLayoutView | null = null

  constructor(
    private readonly api: ApiClient,
    readonly docId: string,
    readonly elementId: number,
  ) {}

  async refresh(): Promise<TableView> {
    this.view = await this.api.tableView(this.docId, this.elementId)
    return this.view
  }

  async refreshLayout(): Promise<TableLayoutView> {
    this.layout = await this.api.tableLayout(this.docId, this.elementId)
    return this.layout
  }

  private op(action: string, args?: Record<string, unknown>): Promise<OpResult> {
    return this.api.tableOp(this.docId, this.elementId, action, args)
  }

  mark(rows: number[]): Promise<OpResult> {
    return this.op('mark', { rows })
  }

  markRange(start: number, end: number): Promise<OpResult> {
    return this.op('mark_range', { start, end })
  }

  unmark(): Promise<OpResult> {
    return this.op('unmark')
  }

  copyTo(to: number): Promise<OpResult> {
    return this.op('copy', { to })
  }

  moveTo(to: number): Promise<OpResult> {
    return this.op('move', { to })
  }

  deleteMarked(): Promise<OpResult> {
    return this.op('delete')
  }

  clearMarked(): Promise<OpResult> {
    return this.op('clear')
  }

  toBuffer(): Promise<OpResult> {
    return this.op('to_buffer')
  }

  fromBuffer(): Promise<OpResult> {
    return this.op('from_buffer')
  }

  undo(): Promise<OpResult> {
    return this.op('undo')
  }

  insertPartAt(x: number, y: number): Promise<OpResult> {
    return this.op('insert_part_at', { point: [x, y] })
  }

  newRecordFromTemplate(template: string): Promise<OpResult> {
    return this.op('new_record_from_template', { template })
  }

  setCell(path: number[], text: string): Promise<OpResult> {
    return this.op('set_cell', { path, text })
  }

  addSection(title: string, at: number): Promise<OpResult> {
    return this.op('add_section', { title, at })
  }

  orderBy(fields: string[]): Promise<OpResult> {
    return this.op('order', { fields })
  }

  mergeIdentical(field: string): Promise<OpResult> {
    return this.op('merge', { field })
  }

  extractCommonNames(field: string): Promise<OpResult> {
    return this.op('extract_common_names', { field })
  }

  async paginatePreview(
    maxHeightMm: number,
    direction: 'left' | 'right' = 'right',
    headMode = 'repeat-header',
  ): Promise<PageChunk[]> {
    const result = await this.op('paginate', {
      max_height_mm: maxHeightMm,
      direction,
      head_mode: headMode,
    })
    return result.chunks ?? []
  }

  isEqualTo(otherDocId: string): Promise<{ equal: boolean }> {
    return this.api.diff(this.docId, otherDocId)
  }
}
