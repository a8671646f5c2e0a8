/** Small framework-free helpers shared by the screens. */

export function clamp01(v: number): number {
  if (Number.isNaN(v)) return 0;
  return Math.min(1, Math.max(0, v));
}

export function formatDegree(v: number): string {
  return `${Math.round(v * 100)}%`;
}

/**
 * Trailing-edge debounce: the wrapped function runs once, `ms` after the
 * last call, with the last call's arguments. Keeps slider drags from
 * flooding the render endpoints.
 */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms = 150,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, ms);
  };
}

/**
 * At most one in-flight request per pane, latest wins: starting a new
 * request aborts the previous one under the same key.
 */
export class LatestWins {
  private inflight = new Map<string, AbortController>();

  async run<T>(key: string, task: (signal: AbortSignal) => Promise<T>): Promise<T | undefined> {
    this.inflight.get(key)?.abort();
    const controller = new AbortController();
    this.inflight.set(key, controller);
    try {
      const result = await task(controller.signal);
      return controller.signal.aborted ? undefined : result; // drop stale results
    } catch (err) {
      if (controller.signal.aborted) return undefined; // superseded
      throw err;
    } finally {
      if (this.inflight.get(key) === controller) this.inflight.delete(key);
    }
  }
}

export function randomId(prefix: string): string {
  const bytes = new Uint8Array(8);
  crypto.getRandomValues(bytes);
  const hex = Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
  return `${prefix}-${hex}`;
}
