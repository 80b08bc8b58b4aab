/** Entry point: wires the screens to the same-origin service. */

import { ApiClient, httpTransport } from './api'
import { CatalogBrowser } from './catalogBrowser'
import { PoInspector } from './inspector'
import { SelectionWizard } from './wizard'
import { renderCatalogList, renderPrompt } from './dom'
import { initialState, withSession } from './state'

const api = new ApiClient(httpTransport(''))
const browser = new CatalogBrowser(api)
const wizard = new SelectionWizard(api)
const inspector = new PoInspector(api)
let state = initialState()

async function showCatalogs(root: HTMLElement): Promise<void> {
  const entries = await browser.applyFilters({})
  root.replaceChildren(
    renderCatalogList(entries, (table) => startWizard(root, table), state.language),
  )
}

async function startWizard(root: HTMLElement, table: string): Promise<void> {
  await wizard.start(table, 0)
  state = withSession(state, wizard.sessionId)
  const paint = () => {
    root.replaceChildren(
      renderPrompt(
        wizard.prompt,
        async (value) => {
          await wizard.answer(value)
          if (wizard.done) {
            const fields = await wizard.finish()
            const pre = document.createElement('pre')
            pre.textContent = JSON.stringify(fields, null, 2)
            root.replaceChildren(pre)
          } else {
            paint()
          }
        },
        state.language,
      ),
    )
  }
  paint()
}

export { api, browser, wizard, inspector, showCatalogs }

const mount = typeof document !== 'undefined' ? document.getElementById('app') : null
if (mount) {
  void showCatalogs(mount)
}
