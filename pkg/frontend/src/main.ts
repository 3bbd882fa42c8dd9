// App shell: create a session, connect the stream, wire the four panels.

import { ApiClient } from './api'
import { MouseCoalescer } from './activity'
import { SessionStore } from './store'
import { VideoPanel } from './panels/video'
import { FunctionPanel } from './panels/functionpanel'
import { CoLearnersPanel } from './panels/colearners'
import { ChatPanel } from './panels/chat'
import { AudioChatRecorder, playAudioClip } from './recorder'
import { PyodideRunner } from './coderunner'
import { isHeartbeat } from './types'

const params = new URLSearchParams(location.search)
const SERVER = params.get('server') ?? 'http://127.0.0.1:8000'
const VIDEO_URL = params.get('video') ?? ''

async function boot(): Promise<void> {
  const api = new ApiClient(SERVER)
  const store = new SessionStore()

  const created = await api.createSession(
    params.get('session') ? { session_id: params.get('session') } : {},
  )
  const sessionId = created.session_id
  store.seedFromSnapshot(await api.snapshot(sessionId))
  const manifest = await api.manifest().catch(() => ({ agents: {} }))

  const send = (kind: string, data: Record<string, unknown>) =>
    api.sendEvent(sessionId, kind, data).catch((error) => console.warn('send failed:', error))

  const mouse = new MouseCoalescer(() => void send('activity_ping', { channel: 'mouse' }))
  document.addEventListener('pointermove', () => mouse.pointerActivity())
  document.addEventListener('pointerdown', () => mouse.pointerActivity())

  const recorder = new AudioChatRecorder()

  const video = new VideoPanel(
    VIDEO_URL,
    ['Explain this part', 'Why is this correct?', 'Give an example'],
    async (payload) => {
      await api.sendEvent(sessionId, 'brush_query', payload)
    },
    () => mouse.pointerActivity(),
  )
  video.root.querySelector('video')!.addEventListener('timeupdate', () => {
    void send('video_position', { position_ms: Math.round(video.currentVideoMs) })
  })

  const functions = new FunctionPanel(
    (text) => void send('notes_edit', { text }),
    (text) => void send('code_edit', { text }),
    new PyodideRunner(),
  )

  const chat = new ChatPanel(
    store,
    (room, text) => void send('user_chat', { room, text }),
    async (agentId) => {
      try {
        const clip = await recorder.toggle()
        chat.setRecording(recorder.recording)
        if (clip) {
          await api.sendEvent(sessionId, 'user_audio', {
            agent_id: agentId,
            audio_b64: clip.audioB64,
            mime: clip.mime,
          })
        }
      } catch {
        chat.setRecording(false)
        chat.showNotice('Microphone unavailable; text chat still works.')
      }
    },
  )

  const colearners = new CoLearnersPanel(store, manifest, SERVER + '/assets/', {
    onChat: (agentId) => chat.showRoom(`private:${agentId}`),
    onAudioChat: (agentId) => chat.showRoom(`private:${agentId}`),
    onViewNotes: (agentId) => {
      void api.recordUsage(sessionId, 'notes')
      alert(store.agents.get(agentId)?.notes || 'No notes yet.')
    },
    onViewProfile: (agentId) => {
      void api.recordUsage(sessionId, 'profile')
      alert(store.agents.get(agentId)?.profile || 'No profile yet.')
    },
    onCustomize: (agentId) => {
      const agent = store.agents.get(agentId)
      const tone = prompt(`New tone for ${agent?.name}?`)
      if (tone && tone.trim()) {
        void send('persona_update', { agent_id: agentId, changes: { tone } })
      }
    },
  })

  const grid = document.getElementById('app')!
  grid.replaceChildren(video.root, functions.root, colearners.root, chat.root)

  store.onChange(() => {
    for (const clip of store.takePendingAudio()) playAudioClip(clip.audioB64, clip.mime)
  })

  // stream consumption with reconnect-from-last-seq
  while (true) {
    try {
      for await (const frame of api.stream(sessionId, store.lastSeq)) {
        if (isHeartbeat(frame)) continue
        store.apply(frame)
        if (store.needsResync) {
          store.needsResync = false
          break // reconnect from lastSeq
        }
      }
    } catch (error) {
      console.warn('stream dropped, reconnecting:', error)
      await new Promise((resolve) => setTimeout(resolve, 1000))
    }
  }
}

void boot()
