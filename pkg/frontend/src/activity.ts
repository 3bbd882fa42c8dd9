// Activity reporting: pointer-move coalescing and document autosave debounce.

/** Forwards pointer activity as at most one ping per interval. */
export class MouseCoalescer {
  private lastSentMs = -Infinity

  constructor(
    private send: () => void,
    private intervalMs = 1000,
    private now: () => number = () => Date.now(),
  ) {}

  pointerActivity(): void {
    const at = this.now()
    if (at - this.lastSentMs >= this.intervalMs) {
      this.lastSentMs = at
      this.send()
    }
  }
}

/** Trailing-edge debounce for notes/code snapshots (default 2 s). */
export class AutosaveDebouncer {
  private timer: ReturnType<typeof setTimeout> | null = null
  private latest = ''

  constructor(
    private send: (text: string) => void,
    private delayMs = 2000,
  ) {}

  edited(text: string): void {
    this.latest = text
    if (this.timer !== null) clearTimeout(this.timer)
    this.timer = setTimeout(() => {
      this.timer = null
      this.send(this.latest)
    }, this.delayMs)
  }

  flush(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer)
      this.timer = null
      this.send(this.latest)
    }
  }
}
