// Brush selection geometry and frame capture.
//
// Selections are drawn in CSS pixels over a scaled rendering of the video but
// always reported to the server in the video's intrinsic pixel space, so the
// same drag means the same region no matter how the panel is sized.

export type Rect = {
  minX: number
  minY: number
  maxX: number
  maxY: number
}

export type VideoMetrics = {
  intrinsicWidth: number
  intrinsicHeight: number
  displayWidth: number
  displayHeight: number
}

export function normalizeDrag(x1: number, y1: number, x2: number, y2: number): Rect {
  return {
    minX: Math.min(x1, x2),
    minY: Math.min(y1, y2),
    maxX: Math.max(x1, x2),
    maxY: Math.max(y1, y2),
  }
}

export function rectValid(rect: Rect): boolean {
  return rect.minX >= 0 && rect.minY >= 0 && rect.minX < rect.maxX && rect.minY < rect.maxY
}

export function displayedToIntrinsic(rect: Rect, metrics: VideoMetrics): Rect {
  const sx = metrics.intrinsicWidth / metrics.displayWidth
  const sy = metrics.intrinsicHeight / metrics.displayHeight
  return {
    minX: Math.round(rect.minX * sx),
    minY: Math.round(rect.minY * sy),
    maxX: Math.round(rect.maxX * sx),
    maxY: Math.round(rect.maxY * sy),
  }
}

export type CapturedFrame = {
  imageB64: string
  width: number
  height: number
}

// Capture is injectable so geometry and payload assembly stay testable
// without a real <video> + <canvas> pair.
export interface FrameCapture {
  metrics(): VideoMetrics
  crop(rect: Rect): CapturedFrame
}

export class VideoFrameCapture implements FrameCapture {
  constructor(private video: HTMLVideoElement) {}

  metrics(): VideoMetrics {
    return {
      intrinsicWidth: this.video.videoWidth,
      intrinsicHeight: this.video.videoHeight,
      displayWidth: this.video.clientWidth,
      displayHeight: this.video.clientHeight,
    }
  }

  crop(rect: Rect): CapturedFrame {
    const width = rect.maxX - rect.minX
    const height = rect.maxY - rect.minY
    const canvas = document.createElement('canvas')
    canvas.width = width
    canvas.height = height
    const ctx = canvas.getContext('2d')
    if (!ctx) throw new Error('canvas 2d context unavailable')
    ctx.drawImage(this.video, rect.minX, rect.minY, width, height, 0, 0, width, height)
    const dataUrl = canvas.toDataURL('image/png')
    return { imageB64: dataUrl.split(',', 2)[1] ?? '', width, height }
  }
}

export type BrushQueryPayload = {
  region: [number, number, number, number]
  image_b64: string
  question: string
  video_ms: number
}

/**
 * Build the brush_query payload for a drag made in display coordinates.
 * Throws when the selection or question is unusable; callers surface the
 * message inline and send nothing.
 */
export function captureBrushQuery(
  capture: FrameCapture,
  displayedRect: Rect,
  question: string,
  videoMs: number,
): BrushQueryPayload {
  if (!question.trim()) throw new Error('enter a question or pick a prompt first')
  const intrinsic = displayedToIntrinsic(displayedRect, capture.metrics())
  if (!rectValid(intrinsic)) throw new Error('draw a selection on the video first')
  const frame = capture.crop(intrinsic)
  if (!frame.imageB64) throw new Error('could not capture the selected area')
  return {
    region: [intrinsic.minX, intrinsic.minY, intrinsic.maxX, intrinsic.maxY],
    image_b64: frame.imageB64,
    question,
    video_ms: Math.max(0, Math.round(videoMs)),
  }
}
