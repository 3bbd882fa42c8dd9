// Push-to-toggle microphone recording for audio chat.

export type RecordedClip = { audioB64: string; mime: string }

function blobToBase64(blob: Blob): Promise<string> {
  return new Promise((resolve, reject) => {
    const reader = new FileReader()
    reader.onerror = () => reject(reader.error)
    reader.onloadend = () => {
      const dataUrl = reader.result as string
      resolve(dataUrl.split(',', 2)[1] ?? '')
    }
    reader.readAsDataURL(blob)
  })
}

export class AudioChatRecorder {
  private recorder: MediaRecorder | null = null
  private chunks: Blob[] = []
  private stopped: ((clip: RecordedClip) => void) | null = null

  get recording(): boolean {
    return this.recorder !== null
  }

  /** First call starts recording; second stops and resolves the clip. */
  async toggle(): Promise<RecordedClip | null> {
    if (this.recorder) {
      const recorder = this.recorder
      this.recorder = null
      const clip = new Promise<RecordedClip>((resolve) => {
        this.stopped = resolve
      })
      recorder.stop()
      recorder.stream.getTracks().forEach((track) => track.stop())
      return clip
    }
    // getUserMedia rejection (permission denied) propagates to the caller,
    // which surfaces a notice; text chat stays usable
    const stream = await navigator.mediaDevices.getUserMedia({ audio: true })
    const mime = MediaRecorder.isTypeSupported('audio/webm;codecs=opus')
      ? 'audio/webm;codecs=opus'
      : 'audio/webm'
    this.chunks = []
    this.recorder = new MediaRecorder(stream, { mimeType: mime })
    this.recorder.ondataavailable = (event) => {
      if (event.data && event.data.size > 0) this.chunks.push(event.data)
    }
    this.recorder.onstop = async () => {
      const blob = new Blob(this.chunks, { type: mime })
      const audioB64 = await blobToBase64(blob)
      this.stopped?.({ audioB64, mime })
      this.stopped = null
    }
    this.recorder.start()
    return null
  }
}

export function playAudioClip(audioB64: string, mime: string): HTMLAudioElement {
  const audio = new Audio(`data:${mime};base64,${audioB64}`)
  void audio.play().catch((error) => console.warn('audio playback failed:', error))
  return audio
}
