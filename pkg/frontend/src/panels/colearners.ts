// Co-learners panel: per-agent shared screen, action screen, five buttons.
//
// Clip mapping comes from the asset manifest. Passive clips loop; active
// clips play once per phase. The tile whose agent most recently started an
// active action is enlarged until its reversion event arrives (the store owns
// that exclusivity rule).

import { SessionStore, AgentState } from '../store'
import { AssetManifest } from '../types'

export type AgentAction = (agentId: string) => void

export type CoLearnerCallbacks = {
  onChat: AgentAction
  onAudioChat: AgentAction
  onViewNotes: AgentAction
  onViewProfile: AgentAction
  onCustomize: AgentAction
}

export class CoLearnersPanel {
  readonly root: HTMLElement
  private tiles = new Map<string, HTMLElement>()
  private lastClipKey = new Map<string, string>()

  constructor(
    private store: SessionStore,
    private manifest: AssetManifest,
    private assetBase: string,
    callbacks: CoLearnerCallbacks,
  ) {
    this.root = document.createElement('section')
    this.root.className = 'panel colearners-panel'
    this.root.innerHTML = '<header>Co-learners</header><div class="tiles"></div>'
    const tilesBox = this.root.querySelector('.tiles')!
    for (const agent of store.agents.values()) {
      const tile = document.createElement('div')
      tile.className = 'tile'
      tile.dataset.agent = agent.agentId
      tile.innerHTML = `
        <div class="tile-name"></div>
        <div class="screens">
          <video class="shared" muted loop></video>
          <video class="action" muted></video>
        </div>
        <div class="buttons">
          <button data-act="chat" title="Chat">Chat</button>
          <button data-act="audio" title="Audio chat">Audio</button>
          <button data-act="notes" title="View notes">Notes</button>
          <button data-act="profile" title="View profile">Profile</button>
          <button data-act="customize" title="Customize">Customize</button>
        </div>`
      tile.querySelector<HTMLElement>('.tile-name')!.textContent = agent.name
      const wire = (act: string, fn: AgentAction) => {
        tile.querySelector<HTMLButtonElement>(`[data-act="${act}"]`)!.onclick = () =>
          fn(agent.agentId)
      }
      wire('chat', callbacks.onChat)
      wire('audio', callbacks.onAudioChat)
      wire('notes', callbacks.onViewNotes)
      wire('profile', callbacks.onViewProfile)
      wire('customize', callbacks.onCustomize)
      tilesBox.appendChild(tile)
      this.tiles.set(agent.agentId, tile)
      this.loadSharedScreen(agent)
    }
    store.onChange(() => this.render())
    this.render()
  }

  private agentManifest(agent: AgentState) {
    return this.manifest.agents[agent.name]
  }

  private loadSharedScreen(agent: AgentState): void {
    const tile = this.tiles.get(agent.agentId)
    const entry = this.agentManifest(agent)
    if (!tile || !entry) return
    const video = tile.querySelector<HTMLVideoElement>('.shared')!
    video.src = this.assetBase + entry.shared_screen
  }

  private clipFor(agent: AgentState): string | null {
    const entry = this.agentManifest(agent)
    if (!entry) return null
    const actionId = agent.phase ? `${agent.action}.${agent.phase}` : agent.action
    return entry.actions[actionId] ?? null
  }

  private render(): void {
    for (const agent of this.store.agents.values()) {
      const tile = this.tiles.get(agent.agentId)
      if (!tile) continue
      tile.classList.toggle('enlarged', this.store.enlargedAgent === agent.agentId)

      const shared = tile.querySelector<HTMLVideoElement>('.shared')!
      if (agent.sharedScreenPlaying && shared.paused) void shared.play().catch(() => {})
      if (!agent.sharedScreenPlaying && !shared.paused) shared.pause()

      const action = tile.querySelector<HTMLVideoElement>('.action')!
      const clipKey = `${agent.action}|${agent.phase ?? ''}`
      if (this.lastClipKey.get(agent.agentId) !== clipKey) {
        this.lastClipKey.set(agent.agentId, clipKey)
        const clip = this.clipFor(agent)
        if (clip) {
          action.src = this.assetBase + clip
          action.loop = agent.phase === null // passive clips loop, phases play once
          tile.classList.remove('missing-asset')
          void action.play().catch(() => {})
        } else {
          // placeholder tile plus a console diagnostic when a clip is unmapped
          action.removeAttribute('src')
          tile.classList.add('missing-asset')
          console.warn(`no clip mapped for ${agent.name}: ${clipKey}`)
        }
      }
    }
  }
}
