// Chat panel: the group window plus one private window per co-learner.

import { SessionStore } from '../store'

export class ChatPanel {
  readonly root: HTMLElement
  private windowPicker: HTMLSelectElement
  private log: HTMLElement
  private input: HTMLInputElement
  private recordButton: HTMLButtonElement
  private noticeLine: HTMLElement
  private activeRoom = 'group'

  constructor(
    private store: SessionStore,
    sendText: (room: string, text: string) => void,
    toggleAudio: (agentId: string) => void,
  ) {
    this.root = document.createElement('section')
    this.root.className = 'panel chat-panel'
    this.root.innerHTML = `
      <header>
        <select></select>
        <span class="chat-notice" role="alert"></span>
      </header>
      <div class="chat-log"></div>
      <footer>
        <input type="text" placeholder="Send a message...">
        <button class="send">Send</button>
        <button class="record" hidden>Rec</button>
      </footer>`
    this.windowPicker = this.root.querySelector('select')!
    this.log = this.root.querySelector('.chat-log')!
    this.input = this.root.querySelector('input')!
    this.recordButton = this.root.querySelector('.record')!
    this.noticeLine = this.root.querySelector('.chat-notice')!

    this.windowPicker.append(new Option('Group chat', 'group'))
    for (const agent of store.agents.values()) {
      this.windowPicker.append(new Option(`Private: ${agent.name}`, `private:${agent.agentId}`))
    }
    this.windowPicker.onchange = () => this.showRoom(this.windowPicker.value)

    const submit = () => {
      const text = this.input.value.trim()
      if (!text) return
      sendText(this.activeRoom, text)
      this.input.value = ''
    }
    this.root.querySelector<HTMLButtonElement>('.send')!.onclick = submit
    this.input.onkeydown = (event) => {
      if (event.key === 'Enter') submit()
    }
    this.recordButton.onclick = () => {
      const agentId = this.activeRoom.replace(/^private:/, '')
      toggleAudio(agentId)
    }
    store.onChange(() => this.render())
    this.render()
  }

  showRoom(roomId: string): void {
    this.activeRoom = roomId
    this.windowPicker.value = roomId
    this.recordButton.hidden = roomId === 'group'
    this.render()
  }

  setRecording(on: boolean): void {
    this.recordButton.classList.toggle('recording', on)
    this.recordButton.textContent = on ? 'Stop' : 'Rec'
  }

  showNotice(message: string): void {
    this.noticeLine.textContent = message
  }

  private senderLabel(sender: string): string {
    if (sender === 'user') return 'You'
    if (sender === 'system') return 'System'
    return this.store.agents.get(sender)?.name ?? sender
  }

  private render(): void {
    const bubbles = this.store.roomBubbles(this.activeRoom)
    this.log.replaceChildren(
      ...bubbles.map((bubble) => {
        const row = document.createElement('div')
        row.className = `bubble from-${bubble.sender === 'user' ? 'user' : 'peer'} modality-${bubble.modality}`
        const who = document.createElement('strong')
        who.textContent = this.senderLabel(bubble.sender)
        const text = document.createElement('span')
        text.textContent = bubble.text
        row.append(who, text)
        return row
      }),
    )
    this.log.scrollTop = this.log.scrollHeight
  }
}
