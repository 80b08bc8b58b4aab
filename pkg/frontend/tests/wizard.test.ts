import { describe, expect, it } from 'vitest'

import { ApiClient } from '../src/api'
import { SelectionWizard } from '../src/wizard'
import { replayClientParts } from './replay'

describe('selection wizard against the recorded transcript', () => {
  it('walks the full prompt sequence and finishes', async () => {
    const { transport } = replayClientParts('transcript_wizard.json')
    const wizard = new SelectionWizard(new ApiClient(transport.transport))

    await wizard.start('kip_manometers', 0)
    expect(wizard.done).toBe(false)
    expect(wizard.prompt).toMatchObject({ type: 'menu' })
    expect((wizard.prompt as any).options).toHaveLength(5)

    await wizard.answer(0)
    // the two-option direct menu renders exactly two choices
    expect(wizard.prompt).toEqual({
      type: 'menu',
      text: 'Расположение штуцера',
      options: ['радиальный', 'осевой'],
    })

    await wizard.answer(1)
    expect(wizard.prompt).toMatchObject({ type: 'input', kind: 'string' })

    await wizard.answer('405')
    expect(wizard.done).toBe(true)
    expect(wizard.prompt).toBeNull()

    const fields = await wizard.finish()
    expect(fields.fields['naimenovanie']).toBe('Манометр МП4-У до 0,6 кгс/см2')
    expect(fields.fields['kod_oborud']).toBe('405')

    // every prompt shown came from the server, in delivery order
    expect(wizard.promptHistory.map((p) => p && p.type)).toEqual([
      'menu',
      'menu',
      'input',
    ])
    expect(transport.exhausted).toBe(true)
  })
})
