// HTTP + SSE client for the session server.

import { CreateSessionResponse, Snapshot, StreamFrame, AssetManifest } from './types'

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message)
  }
}

async function expectJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    const body = await response.text()
    throw new ApiError(response.status, body || response.statusText)
  }
  return (await response.json()) as T
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, '') + path
  }

  async createSession(body: Record<string, unknown> = {}): Promise<CreateSessionResponse> {
    const response = await fetch(this.url('/sessions'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    })
    return expectJson(response)
  }

  async snapshot(sessionId: string): Promise<Snapshot> {
    return expectJson(await fetch(this.url(`/sessions/${sessionId}`)))
  }

  async manifest(): Promise<AssetManifest> {
    return expectJson(await fetch(this.url('/manifest')))
  }

  async sendEvent(
    sessionId: string,
    kind: string,
    data: Record<string, unknown>,
    atMs?: number,
  ): Promise<{ seq: number }> {
    const body: Record<string, unknown> = { kind, data }
    if (atMs !== undefined) body.at_ms = atMs
    const response = await fetch(this.url(`/sessions/${sessionId}/events`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    })
    return expectJson(response)
  }

  async recordUsage(sessionId: string, feature: string): Promise<Record<string, number>> {
    const response = await fetch(this.url(`/sessions/${sessionId}/usage`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ feature }),
    })
    return expectJson(response)
  }

  /**
   * Consume the server-push stream from a resume point. Yields every frame
   * (heartbeats included) until the connection closes or `signal` aborts.
   */
  async *stream(
    sessionId: string,
    fromSeq = 0,
    signal?: AbortSignal,
  ): AsyncGenerator<StreamFrame> {
    const response = await fetch(this.url(`/sessions/${sessionId}/stream?from_seq=${fromSeq}`), {
      signal,
    })
    if (!response.ok || !response.body) {
      throw new ApiError(response.status, 'stream connection failed')
    }
    const reader = response.body.getReader()
    const decoder = new TextDecoder()
    let buffer = ''
    try {
      while (true) {
        const { value, done } = await reader.read()
        if (done) break
        buffer += decoder.decode(value, { stream: true })
        let boundary: number
        while ((boundary = buffer.indexOf('\n\n')) !== -1) {
          const frame = buffer.slice(0, boundary)
          buffer = buffer.slice(boundary + 2)
          for (const line of frame.split('\n')) {
            if (line.startsWith('data: ')) {
              yield JSON.parse(line.slice('data: '.length)) as StreamFrame
            }
          }
        }
      }
    } finally {
      reader.releaseLock()
    }
  }
}
