// In-browser code execution behind a small interface.
//
// The default implementation loads a Python-in-WebAssembly runtime (Pyodide)
// from a configurable URL and captures stdout; execution results stay local
// and are never sent to agents except inside code_edit snapshots. Tests and
// offline deployments plug in their own runner.

export type RunResult = { stdout: string; error?: string }

export interface CodeRunner {
  run(code: string): Promise<RunResult>
}

declare global {
  interface Window {
    loadPyodide?: (options: { indexURL: string }) => Promise<any>
  }
}

export class PyodideRunner implements CodeRunner {
  private runtime: Promise<any> | null = null

  constructor(private indexUrl = 'https://cdn.jsdelivr.net/pyodide/v0.25.0/full/') {}

  private load(): Promise<any> {
    if (!this.runtime) {
      this.runtime = (async () => {
        if (!window.loadPyodide) {
          await new Promise<void>((resolve, reject) => {
            const script = document.createElement('script')
            script.src = this.indexUrl + 'pyodide.js'
            script.onload = () => resolve()
            script.onerror = () => reject(new Error('interpreter download failed'))
            document.head.appendChild(script)
          })
        }
        if (!window.loadPyodide) throw new Error('interpreter unavailable')
        return window.loadPyodide({ indexURL: this.indexUrl })
      })()
    }
    return this.runtime
  }

  async run(code: string): Promise<RunResult> {
    try {
      const pyodide = await this.load()
      let captured = ''
      pyodide.setStdout({ batched: (line: string) => (captured += line + '\n') })
      pyodide.setStderr({ batched: (line: string) => (captured += line + '\n') })
      await pyodide.runPythonAsync(code)
      return { stdout: captured }
    } catch (error) {
      return { stdout: '', error: String(error) }
    }
  }
}

/** Offline fallback: reports that no interpreter is available. */
export class UnavailableRunner implements CodeRunner {
  async run(): Promise<RunResult> {
    return { stdout: '', error: 'code execution unavailable (no interpreter loaded)' }
  }
}
