/**
 * Live preview: original, corrected and simulated-corrected panes of one
 * source image. Every change to the profile sliders or the method
 * toggles re-renders the two derived panes through the server; the
 * original pane is set once at upload and never touched again.
 */

import type { ApiClient, CorrectionParams, Profile } from "./api.js";
import { LatestWins, clamp01 } from "./util.js";

export interface PreviewState {
  profile: Profile;
  params: CorrectionParams;
}

export const DEFAULT_PREVIEW: PreviewState = {
  profile: { beta: 0, alpha_p: 0, alpha_d: 0, alpha_n: 1 },
  params: { method: "b", domain: "rgb", equalize: false },
};

export function withDegree(state: PreviewState, field: keyof Profile, value: number): PreviewState {
  return {
    ...state,
    profile: { ...state.profile, [field]: clamp01(value) },
  };
}

export function withParams(state: PreviewState, params: Partial<CorrectionParams>): PreviewState {
  return { ...state, params: { ...state.params, ...params } };
}

export type PaneSetter = (pane: "corrected" | "simulated", image: Blob) => void;

export class PreviewRenderer {
  private guard = new LatestWins();
  private source: Blob | null = null;

  constructor(
    private readonly client: ApiClient,
    private readonly setPane: PaneSetter,
    private readonly onError: (message: string) => void = () => {},
  ) {}

  setSource(image: Blob): void {
    this.source = image;
  }

  get hasSource(): boolean {
    return this.source !== null;
  }

  /**
   * Render both derived panes: corrected = correct(source), then
   * simulated = simulate(corrected) at the profile's degrees. One
   * in-flight chain; a newer render aborts the previous one.
   */
  async render(state: PreviewState): Promise<void> {
    const source = this.source;
    if (source === null) return;
    try {
      await this.guard.run("preview", async (signal) => {
        const corrected = await this.client.correct(source, state.profile, state.params, signal);
        if (signal.aborted) return;
        this.setPane("corrected", corrected);
        const simulated = await this.client.simulate(
          corrected,
          state.profile.alpha_p,
          state.profile.alpha_d,
          signal,
        );
        if (signal.aborted) return;
        this.setPane("simulated", simulated);
      });
    } catch (err) {
      this.onError(err instanceof Error ? err.message : String(err));
    }
  }
}
