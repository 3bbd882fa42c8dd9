// Client-side session state, rebuilt purely from the event stream.
//
// Every server event is applied in seq order to one store; reconnecting with
// resume-from-seq and replaying therefore converges to the same state as a
// fresh consumer of the full log.

import { Snapshot, WireEvent } from './types'

export type ChatBubble = {
  sender: string // 'user' | 'system' | agent id
  text: string
  atMs: number
  modality: string
}

export type AgentState = {
  agentId: string
  name: string
  notes: string
  profile: string
  action: string
  phase: string | null
  actionDurationMs: number
  sharedScreenPlaying: boolean
  sharedScreenPositionMs: number
}

export type AudioClip = {
  agentId: string
  audioB64: string
  mime: string
  durationMs: number
}

const USAGE_COUNTER_KEYS: Record<string, string> = {
  notes: 'notes_views',
  chat: 'chat_messages',
  brush: 'brush_uses',
  audio: 'audio_uses',
  profile: 'profile_views',
  customization: 'customization_changes',
}

export class SessionStore {
  lastSeq = 0
  clockMs = 0
  rooms = new Map<string, ChatBubble[]>()
  agents = new Map<string, AgentState>()
  enlargedAgent: string | null = null
  notesDoc = ''
  codeDoc = ''
  usage: Record<string, number> = {}
  pendingAudio: AudioClip[] = []
  /** Set when a gap is detected; the client should reconnect from lastSeq. */
  needsResync = false

  private listeners = new Set<() => void>()

  onChange(listener: () => void): () => void {
    this.listeners.add(listener)
    return () => this.listeners.delete(listener)
  }

  private notify(): void {
    for (const listener of this.listeners) listener()
  }

  seedFromSnapshot(snapshot: Snapshot): void {
    this.lastSeq = snapshot.last_seq
    this.clockMs = snapshot.clock_ms
    this.rooms = new Map(
      Object.entries(snapshot.rooms).map(([roomId, messages]) => [
        roomId,
        messages.map((m) => ({ sender: m.sender, text: m.text, atMs: m.at_ms, modality: m.modality })),
      ]),
    )
    this.agents = new Map(
      snapshot.roster.map((entry) => [
        entry.agent_id,
        {
          agentId: entry.agent_id,
          name: entry.name,
          notes: entry.notes ?? '',
          profile: entry.profile ?? '',
          action: entry.action?.action ?? 'typing',
          phase: entry.action?.phase ?? null,
          actionDurationMs: 0,
          sharedScreenPlaying: entry.shared_screen?.playing ?? true,
          sharedScreenPositionMs: entry.shared_screen?.position_ms ?? 0,
        },
      ]),
    )
    this.enlargedAgent = null
    this.notesDoc = snapshot.docs.notes.text
    this.codeDoc = snapshot.docs.code.text
    this.usage = { ...snapshot.usage }
    this.notify()
  }

  roomBubbles(roomId: string): ChatBubble[] {
    return this.rooms.get(roomId) ?? []
  }

  private pushBubble(roomId: string, bubble: ChatBubble): void {
    const bubbles = this.rooms.get(roomId)
    if (bubbles) bubbles.push(bubble)
    else this.rooms.set(roomId, [bubble])
  }

  takePendingAudio(): AudioClip[] {
    const clips = this.pendingAudio
    this.pendingAudio = []
    return clips
  }

  apply(event: WireEvent): void {
    if (event.seq <= this.lastSeq) return // duplicate delivery after reconnect
    if (event.seq !== this.lastSeq + 1) {
      this.needsResync = true
      return
    }
    this.lastSeq = event.seq
    this.clockMs = Math.max(this.clockMs, event.at_ms)
    const data = event.data
    switch (event.kind) {
      case 'user_chat':
        this.pushBubble(data.room, {
          sender: 'user',
          text: data.text,
          atMs: event.at_ms,
          modality: data.transcribed ? 'audio' : 'text',
        })
        break
      case 'agent_chat':
        this.pushBubble(data.room, {
          sender: data.agent_id,
          text: data.text,
          atMs: event.at_ms,
          modality: data.modality,
        })
        break
      case 'system_notice':
        this.pushBubble(data.room, {
          sender: 'system',
          text: data.text,
          atMs: event.at_ms,
          modality: 'text',
        })
        break
      case 'agent_audio':
        this.pendingAudio.push({
          agentId: data.agent_id,
          audioB64: data.audio_b64,
          mime: data.mime,
          durationMs: data.duration_ms,
        })
        break
      case 'action_change': {
        const agent = this.agents.get(data.agent_id)
        if (agent) {
          agent.action = data.action
          agent.phase = data.phase
          agent.actionDurationMs = data.duration_ms
        }
        if (data.phase === 'starting') {
          // most recent active action wins the single enlarged slot
          this.enlargedAgent = data.agent_id
        } else if (
          data.phase === null &&
          data.action === 'typing' &&
          this.enlargedAgent === data.agent_id
        ) {
          this.enlargedAgent = null
        }
        break
      }
      case 'shared_screen_control': {
        const agent = this.agents.get(data.agent_id)
        if (agent) {
          agent.sharedScreenPlaying = data.control === 'resume'
          agent.sharedScreenPositionMs = data.position_ms
        }
        break
      }
      case 'notes_update': {
        const agent = this.agents.get(data.agent_id)
        if (agent) agent.notes = data.notes
        break
      }
      case 'profile_update': {
        const agent = this.agents.get(data.agent_id)
        if (agent) agent.profile = data.profile
        break
      }
      case 'notes_edit':
        this.notesDoc = data.text
        break
      case 'code_edit':
        this.codeDoc = data.text
        break
      case 'usage_increment':
        this.usage[USAGE_COUNTER_KEYS[data.feature] ?? data.feature] = data.value
        break
      default:
        break // perceive echoes, trigger_fired, gated markers: nothing to render
    }
    this.notify()
  }
}
