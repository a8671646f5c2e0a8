/**
 * Typed client for the cvdkit HTTP API. All rendering happens server-side;
 * this module only moves bytes and JSON. Degrees are clamped to [0, 1]
 * before they go on the wire, mirroring server validation.
 */

import { clamp01 } from "./util.js";

export interface PlateInfo {
  id: string;
  kind: string;
  image_url: string;
  options: string[];
}

export interface SessionState {
  session_id: string;
  answered: string[];
  total_plates: number;
  next_plate_id: string | null;
  completed: boolean;
}

export interface Profile {
  beta: number;
  alpha_p: number;
  alpha_d: number;
  alpha_n: number;
}

export interface CorrectionParams {
  method: "a" | "b";
  domain: "rgb" | "lms";
  equalize: boolean;
}

export interface SurveyOption {
  position: string;
  label: string;
  image_url: string;
}

export interface SurveyQuestion {
  index: number;
  total_questions: number;
  presented_url: string;
  options: SurveyOption[];
}

export interface SurveyStats {
  total_answers: number;
  respondents: number;
  overall: Record<string, number>;
  positive_overall: Record<string, number>;
  by_type: Record<string, Record<string, number>>;
  by_type_degree: Record<string, Record<string, Record<string, number>>>;
  no_improvement_rate: number;
  expected_no_improvement_rate: number;
}

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

export function simulateUrl(alphaP: number, alphaD: number, base = ""): string {
  const p = new URLSearchParams({
    alpha_p: String(clamp01(alphaP)),
    alpha_d: String(clamp01(alphaD)),
  });
  return `${base}/api/simulate?${p.toString()}`;
}

export function correctUrl(profile: Profile, params: CorrectionParams, base = ""): string {
  const p = new URLSearchParams({
    method: params.method,
    domain: params.domain,
    equalize: String(params.equalize),
    beta: String(clamp01(profile.beta)),
    alpha_p: String(clamp01(profile.alpha_p)),
    alpha_d: String(clamp01(profile.alpha_d)),
    alpha_n: String(clamp01(profile.alpha_n)),
  });
  return `${base}/api/correct?${p.toString()}`;
}

async function raiseForStatus(response: Response): Promise<Response> {
  if (response.ok) return response;
  let code = "http_error";
  let message = `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (body?.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(code, message, response.status);
}

export class ApiClient {
  constructor(
    private readonly fetchFn: typeof fetch = fetch,
    private readonly base = "",
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const r = await raiseForStatus(await this.fetchFn(`${this.base}${path}`));
    return (await r.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const r = await raiseForStatus(
      await this.fetchFn(`${this.base}${path}`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
    return (await r.json()) as T;
  }

  async getPlates(): Promise<PlateInfo[]> {
    const data = await this.getJson<{ plates: PlateInfo[] }>("/api/plates");
    return data.plates;
  }

  postAnswer(sessionId: string, plateId: string, optionIndex: number): Promise<SessionState> {
    return this.postJson(`/api/test/${encodeURIComponent(sessionId)}/answer`, {
      plate_id: plateId,
      option_index: optionIndex,
    });
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.getJson(`/api/test/${encodeURIComponent(sessionId)}`);
  }

  getResult(sessionId: string): Promise<Profile & { session_id: string }> {
    return this.getJson(`/api/test/${encodeURIComponent(sessionId)}/result`);
  }

  /** Server-rendered simulation of an uploaded image; returns PNG bytes. */
  async simulate(image: Blob, alphaP: number, alphaD: number, signal?: AbortSignal): Promise<Blob> {
    const r = await raiseForStatus(
      await this.fetchFn(simulateUrl(alphaP, alphaD, this.base), {
        method: "POST",
        body: image,
        signal,
      }),
    );
    return r.blob();
  }

  async correct(
    image: Blob,
    profile: Profile,
    params: CorrectionParams,
    signal?: AbortSignal,
  ): Promise<Blob> {
    const r = await raiseForStatus(
      await this.fetchFn(correctUrl(profile, params, this.base), {
        method: "POST",
        body: image,
        signal,
      }),
    );
    return r.blob();
  }

  getSurveyQuestion(index: number): Promise<SurveyQuestion> {
    return this.getJson(`/api/survey/question/${index}`);
  }

  postSurveyResponse(
    respondentId: string,
    answers: Record<number, string>,
  ): Promise<{ accepted: boolean; respondents: number }> {
    return this.postJson("/api/survey/response", {
      respondent_id: respondentId,
      answers,
    });
  }

  getSurveyStats(): Promise<SurveyStats> {
    return this.getJson("/api/survey/stats");
  }
}
