// Wire types mirrored from the server's event schema.

export type WireEvent = {
  seq: number
  at_ms: number
  kind: string
  cause: number | null
  data: Record<string, any>
  protocol_version?: number
}

export type HeartbeatFrame = { kind: 'hb'; protocol_version: number }

export type StreamFrame = WireEvent | HeartbeatFrame

export function isHeartbeat(frame: StreamFrame): frame is HeartbeatFrame {
  return frame.kind === 'hb' && !('seq' in frame)
}

export type RosterEntry = {
  agent_id: string
  name: string
  tone?: string
  interaction_style?: string
  characteristic?: string
  voice_id?: string
  notes?: string
  profile?: string
  action?: { action: string; phase: string | null; until_ms: number | null }
  shared_screen?: { playing: boolean; position_ms: number }
}

export type Snapshot = {
  session_id: string
  protocol_version: number
  mode: string
  clock_ms: number
  last_seq: number
  roster: RosterEntry[]
  rooms: Record<string, { sender: string; text: string; at_ms: number; modality: string }[]>
  docs: { notes: { text: string }; code: { text: string } }
  usage: Record<string, number>
}

export type CreateSessionResponse = {
  session_id: string
  protocol_version: number
  mode: string
  roster: { agent_id: string; name: string }[]
}

export type AssetManifest = {
  assets_root?: string
  agents: Record<string, { shared_screen: string; actions: Record<string, string> }>
}
