// Function panel: notes and code tabs with autosave and local execution.

import { AutosaveDebouncer } from '../activity'
import { CodeRunner } from '../coderunner'

export class FunctionPanel {
  readonly root: HTMLElement
  private notesArea: HTMLTextAreaElement
  private codeArea: HTMLTextAreaElement
  private output: HTMLElement

  constructor(
    sendNotes: (text: string) => void,
    sendCode: (text: string) => void,
    private runner: CodeRunner,
    autosaveMs = 2000,
  ) {
    this.root = document.createElement('section')
    this.root.className = 'panel function-panel'
    this.root.innerHTML = `
      <header>
        <button data-tab="notes" class="active">Notes</button>
        <button data-tab="code">Code</button>
      </header>
      <textarea class="notes" placeholder="Take notes as you watch..."></textarea>
      <div class="code-wrap" hidden>
        <textarea class="code" spellcheck="false" placeholder="# write Python here"></textarea>
        <button class="run">Run</button>
        <pre class="output"></pre>
      </div>`
    this.notesArea = this.root.querySelector('.notes')!
    this.codeArea = this.root.querySelector('.code')!
    this.output = this.root.querySelector('.output')!

    const notesSaver = new AutosaveDebouncer(sendNotes, autosaveMs)
    const codeSaver = new AutosaveDebouncer(sendCode, autosaveMs)
    this.notesArea.oninput = () => notesSaver.edited(this.notesArea.value)
    this.codeArea.oninput = () => codeSaver.edited(this.codeArea.value)

    for (const button of this.root.querySelectorAll<HTMLButtonElement>('[data-tab]')) {
      button.onclick = () => this.switchTab(button.dataset.tab as 'notes' | 'code')
    }
    this.root.querySelector<HTMLButtonElement>('.run')!.onclick = () => void this.runCode()
  }

  /** Exactly one tab is active at a time. */
  private switchTab(tab: 'notes' | 'code'): void {
    this.notesArea.hidden = tab !== 'notes'
    this.root.querySelector<HTMLElement>('.code-wrap')!.hidden = tab !== 'code'
    for (const button of this.root.querySelectorAll<HTMLButtonElement>('[data-tab]')) {
      button.classList.toggle('active', button.dataset.tab === tab)
    }
  }

  private async runCode(): Promise<void> {
    this.output.textContent = 'running...'
    const result = await this.runner.run(this.codeArea.value)
    this.output.textContent = result.error ? `error: ${result.error}` : result.stdout
  }
}
