/** Catalog browser: classification filters narrow the table list. */

import type { ApiClient } from './api'
import type {
  CatalogEntry,
  CatalogFilters,
  CatalogRowsPage,
  RowFilters,
} from './types'

export class CatalogBrowser {
  entries: CatalogEntry[] = []
  openTableName: string | null = null
  rowsPage: CatalogRowsPage | null = null

  constructor(private readonly api: ApiClient) {}

  async applyFilters(filters: CatalogFilters = {}): Promise<CatalogEntry[]> {
    const data = await this.api.listCatalogs(filters)
    this.entries = data.catalogs
    return this.entries
  }

  async openTable(name: string, filters: RowFilters = {}): Promise<CatalogRowsPage> {
    this.rowsPage = await this.api.catalogRows(name, filters)
    this.openTableName = name
    return this.rowsPage
  }
}
