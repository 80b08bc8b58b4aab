/** Cascading selection wizard.
 *
 * Renders exactly the prompts the server delivers: each answer posts back
 * and the next prompt comes from the response, never from local guessing.
 */

import type { ApiClient } from './api'
import type { GeneratedFields, Prompt, SessionView } from './types'

export class SelectionWizard {
  private view: SessionView | null = null
  /** Every prompt the server delivered, in order. */
  readonly promptHistory: Prompt[] = []

  constructor(private readonly api: ApiClient) {}

  get sessionId(): string | null {
    return this.view ? this.view.id : null
  }

  get prompt(): Prompt {
    return this.view ? this.view.prompt : null
  }

  get done(): boolean {
    return this.view !== null && this.view.status === 'done'
  }

  get answersSoFar(): unknown[] {
    return this.view ? this.view.answers : []
  }

  async start(table: string, row: number): Promise<void> {
    this.view = await this.api.createSession(table, row)
    this.promptHistory.length = 0
    if (this.view.prompt) this.promptHistory.push(this.view.prompt)
  }

  async answer(value: number | string): Promise<void> {
    if (!this.view) throw new Error('wizard has no active session')
    this.view = await this.api.answer(this.view.id, value)
    if (this.view.prompt) this.promptHistory.push(this.view.prompt)
  }

  async finish(): Promise<GeneratedFields> {
    if (!this.view) throw new Error('wizard has no active session')
    return this.api.finish(this.view.id)
  }
}
