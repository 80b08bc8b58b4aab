/** Typed client for the specforge HTTP facade.
 *
 * All server access goes through a Transport so tests can replay recorded
 * transcripts; the UI layer never fabricates a value the server did not
 * deliver.
 */

import type {
  CatalogEntry,
  CatalogFilters,
  CatalogRowsPage,
  DuplicateEntry,
  GeneratedFields,
  OpResult,
  RowFilters,
  SessionView,
  StructureReport,
  TableLayoutView,
  TableView,
} from './types'

export type Transport = (
  method: string,
  path: string,
  body?: unknown,
) => Promise<{ status: number; body: any }>

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`)
  }
}

/** Transport over the browser fetch; base URL '' means same origin. */
export function httpTransport(
  baseUrl = '',
  fetchImpl: typeof fetch = fetch,
): Transport {
  return async (method, path, body) => {
    const response = await fetchImpl(baseUrl + path, {
      method,
      headers: body === undefined ? {} : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    })
    return { status: response.status, body: await response.json() }
  }
}

function query(params: Record<string, string | undefined>): string {
  const parts = Object.entries(params)
    .filter(([, v]) => v !== undefined && v !== '')
    .map(([k, v]) => `${k}=${v}`)
  return parts.length ? `?${parts.join('&')}` : ''
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const { status, body: data } = await this.transport(method, path, body)
    if (status >= 400) {
      throw new ApiError(status, data && data.detail ? String(data.detail) : '')
    }
    return data as T
  }

  // catalogs
  listCatalogs(filters: CatalogFilters = {}): Promise<{ catalogs: CatalogEntry[] }> {
    return this.call('GET', `/catalogs${query(filters as Record<string, string>)}`)
  }

  catalogRows(table: string, filters: RowFilters = {}): Promise<CatalogRowsPage> {
    return this.call(
      'GET',
      `/catalogs/${table}/rows${query(filters as Record<string, string>)}`,
    )
  }

  // sessions
  createSession(table: string, row: number): Promise<SessionView> {
    return this.call('POST', '/sessions', { table, row })
  }

  sessionPrompt(id: string): Promise<SessionView> {
    return this.call('GET', `/sessions/${id}/prompt`)
  }

  answer(id: string, value: number | string): Promise<SessionView> {
    return this.call('POST', `/sessions/${id}/answer`, { value })
  }

  finish(id: string): Promise<GeneratedFields> {
    return this.call('POST', `/sessions/${id}/finish`)
  }

  // documents
  createDocument(body?: unknown): Promise<{ id: string }> {
    return this.call('POST', '/documents', body)
  }

  getDocument(id: string): Promise<any> {
    return this.call('GET', `/documents/${id}`)
  }

  saveDocument(id: string, path: string): Promise<{ ok: boolean; path: string }> {
    return this.call('POST', `/documents/${id}/save`, { path })
  }

  diff(a: string, b: string): Promise<{ equal: boolean }> {
    return this.call('GET', `/documents/${a}/diff/${b}`)
  }

  // tables
  tableView(docId: string, elementId: number): Promise<TableView> {
    return this.call('GET', `/documents/${docId}/tables/${elementId}`)
  }

  tableLayout(docId: string, elementId: number): Promise<TableLayoutView> {
    return this.call('GET', `/documents/${docId}/tables/${elementId}/layout`)
  }

  tableOp(
    docId: string,
    elementId: number,
    action: string,
    args?: Record<string, unknown>,
  ): Promise<OpResult> {
    const body: Record<string, unknown> = { action }
    if (args !== undefined) body.args = args
    return this.call('POST', `/documents/${docId}/tables/${elementId}/ops`, body)
  }

  // designation services
  duplicates(docId: string): Promise<{ duplicates: DuplicateEntry[] }> {
    return this.call('GET', `/documents/${docId}/duplicates`)
  }

  poStructures(docId: string): Promise<StructureReport> {
    return this.call('GET', `/documents/${docId}/po-structures`)
  }
}
