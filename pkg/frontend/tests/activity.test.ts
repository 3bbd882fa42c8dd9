// Pointer coalescing bound and autosave debounce timing.

import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest'
import { AutosaveDebouncer, MouseCoalescer } from '../src/activity'

describe('MouseCoalescer', () => {
  it('sends at most one ping per second of continuous movement', () => {
    let clock = 0
    let pings = 0
    const coalescer = new MouseCoalescer(() => pings++, 1000, () => clock)
    // continuous movement for 10 s at 60 events/s
    for (let i = 0; i < 600; i++) {
      clock = i * (10_000 / 600)
      coalescer.pointerActivity()
    }
    expect(pings).toBeLessThanOrEqual(10)
    expect(pings).toBeGreaterThan(0)
  })

  it('sends nothing when idle', () => {
    let pings = 0
    new MouseCoalescer(() => pings++, 1000, () => 0)
    expect(pings).toBe(0)
  })
})

describe('AutosaveDebouncer', () => {
  beforeEach(() => vi.useFakeTimers())
  afterEach(() => vi.useRealTimers())

  it('sends one trailing snapshot after 2s of quiet', () => {
    const sent: string[] = []
    const saver = new AutosaveDebouncer((text) => sent.push(text), 2000)
    saver.edited('d')
    saver.edited('de')
    saver.edited('def f():')
    vi.advanceTimersByTime(1999)
    expect(sent).toEqual([])
    vi.advanceTimersByTime(1)
    expect(sent).toEqual(['def f():'])
  })

  it('restarts the window on every edit', () => {
    const sent: string[] = []
    const saver = new AutosaveDebouncer((text) => sent.push(text), 2000)
    saver.edited('a')
    vi.advanceTimersByTime(1500)
    saver.edited('ab')
    vi.advanceTimersByTime(1500)
    expect(sent).toEqual([])
    vi.advanceTimersByTime(500)
    expect(sent).toEqual(['ab'])
  })

  it('flush sends the latest text immediately', () => {
    const sent: string[] = []
    const saver = new AutosaveDebouncer((text) => sent.push(text), 2000)
    saver.edited('x')
    saver.flush()
    expect(sent).toEqual(['x'])
    saver.flush() // nothing pending: no duplicate
    expect(sent).toEqual(['x'])
  })
})
