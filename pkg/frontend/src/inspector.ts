/** PO inspector view model: duplicates, structure frequencies, hints. */

import type { ApiClient } from './api'
import type { DuplicateEntry, StructureReport } from './types'

export type InspectorReport = {
  duplicates: DuplicateEntry[]
  frequencies: { signature: string; count: number }[]
  hints: StructureReport['hints']
}

export class PoInspector {
  constructor(private readonly api: ApiClient) {}

  async load(docId: string): Promise<InspectorReport> {
    const dupes = await this.api.duplicates(docId)
    const structures = await this.api.poStructures(docId)
    return {
      duplicates: dupes.duplicates,
      // server dict order is already by descending count; keep it
      frequencies: Object.entries(structures.frequencies).map(
        ([signature, count]) => ({ signature, count }),
      ),
      hints: structures.hints,
    }
  }
}
