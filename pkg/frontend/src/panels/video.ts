// Main video panel: tutorial playback plus the brush overlay.

import { captureBrushQuery, normalizeDrag, Rect, VideoFrameCapture } from '../brush'

export type BrushSubmit = (payload: ReturnType<typeof captureBrushQuery>) => Promise<void>

export class VideoPanel {
  readonly root: HTMLElement
  private video: HTMLVideoElement
  private overlay: HTMLCanvasElement
  private questionInput: HTMLInputElement
  private promptPicker: HTMLSelectElement
  private doneButton: HTMLButtonElement
  private errorLine: HTMLElement
  private brushing = false
  private dragStart: { x: number; y: number } | null = null
  private rect: Rect | null = null

  constructor(
    videoUrl: string,
    predefinedPrompts: string[],
    private submit: BrushSubmit,
    private onPointerActivity: () => void,
  ) {
    this.root = document.createElement('section')
    this.root.className = 'panel video-panel'
    this.root.innerHTML = `
      <header>Lecture</header>
      <div class="video-wrap">
        <video controls></video>
        <canvas class="brush-overlay" hidden></canvas>
      </div>
      <div class="brush-bar">
        <button data-act="brush">Brush</button>
        <button data-act="clear">Clear</button>
        <select></select>
        <input type="text" placeholder="Ask about the selected area">
        <button data-act="done" disabled>Done</button>
        <span class="inline-error" role="alert"></span>
      </div>`
    this.video = this.root.querySelector('video')!
    this.video.src = videoUrl
    this.overlay = this.root.querySelector('canvas')!
    this.questionInput = this.root.querySelector('input')!
    this.promptPicker = this.root.querySelector('select')!
    this.doneButton = this.root.querySelector('[data-act="done"]')!
    this.errorLine = this.root.querySelector('.inline-error')!

    this.promptPicker.append(new Option('Custom question...', ''))
    for (const prompt of predefinedPrompts) this.promptPicker.append(new Option(prompt, prompt))
    this.promptPicker.onchange = () => {
      if (this.promptPicker.value) this.questionInput.value = this.promptPicker.value
      this.refreshDone()
    }
    this.questionInput.oninput = () => this.refreshDone()

    this.root.querySelector<HTMLButtonElement>('[data-act="brush"]')!.onclick = () =>
      this.setBrushing(!this.brushing)
    this.root.querySelector<HTMLButtonElement>('[data-act="clear"]')!.onclick = () => this.clear()
    this.doneButton.onclick = () => void this.finish()

    this.overlay.onpointerdown = (event) => {
      this.dragStart = this.overlayPoint(event)
      this.rect = null
      this.refreshDone()
    }
    this.overlay.onpointermove = (event) => {
      this.onPointerActivity()
      if (!this.dragStart) return
      const point = this.overlayPoint(event)
      this.rect = normalizeDrag(this.dragStart.x, this.dragStart.y, point.x, point.y)
      this.draw()
      this.refreshDone()
    }
    this.overlay.onpointerup = () => (this.dragStart = null)
    this.video.onpointermove = () => this.onPointerActivity()
  }

  get currentVideoMs(): number {
    return this.video.currentTime * 1000
  }

  private overlayPoint(event: PointerEvent): { x: number; y: number } {
    const bounds = this.overlay.getBoundingClientRect()
    return { x: event.clientX - bounds.left, y: event.clientY - bounds.top }
  }

  private setBrushing(on: boolean): void {
    this.brushing = on
    this.overlay.hidden = !on
    if (on) {
      this.overlay.width = this.video.clientWidth
      this.overlay.height = this.video.clientHeight
      this.video.pause()
    } else {
      this.clear()
    }
  }

  private clear(): void {
    this.rect = null
    this.dragStart = null
    this.errorLine.textContent = ''
    this.overlay.getContext('2d')?.clearRect(0, 0, this.overlay.width, this.overlay.height)
    this.refreshDone()
  }

  private draw(): void {
    const ctx = this.overlay.getContext('2d')
    if (!ctx || !this.rect) return
    ctx.clearRect(0, 0, this.overlay.width, this.overlay.height)
    ctx.strokeStyle = '#ff5252'
    ctx.lineWidth = 2
    ctx.strokeRect(
      this.rect.minX,
      this.rect.minY,
      this.rect.maxX - this.rect.minX,
      this.rect.maxY - this.rect.minY,
    )
  }

  private refreshDone(): void {
    const rectOk = !!this.rect && this.rect.maxX > this.rect.minX && this.rect.maxY > this.rect.minY
    this.doneButton.disabled = !(rectOk && this.questionInput.value.trim() !== '')
  }

  private async finish(): Promise<void> {
    if (!this.rect) return
    try {
      const payload = captureBrushQuery(
        new VideoFrameCapture(this.video),
        this.rect,
        this.questionInput.value,
        this.currentVideoMs,
      )
      await this.submit(payload)
      this.setBrushing(false)
      this.questionInput.value = ''
    } catch (error) {
      this.errorLine.textContent = String(error instanceof Error ? error.message : error)
    }
  }
}
