// Typed client for the analyze service. All traffic goes through the
// documented /api/v1 endpoints; nothing here reorders or filters what the
// server returns.

export type Language = "en" | "fa";

export interface Recommendation {
  id: string;
  text: string;
}

export interface AnalyzeResponse {
  distribution: Record<string, number>;
  top_emotion: string;
  negative: boolean;
  notification_text: string | null;
  recommendations: Recommendation[];
  audio_ref: string | null;
  warning: string | null;
}

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  async analyze(wav: Blob, lang: Language): Promise<AnalyzeResponse> {
    const form = new FormData();
    form.append("audio", wav, "clip.wav");
    const response = await fetch(
      `${this.baseUrl}/api/v1/analyze?lang=${encodeURIComponent(lang)}`,
      { method: "POST", body: form },
    );
    if (!response.ok) {
      let detail = `analyze failed (${response.status})`;
      try {
        const body = await response.json();
        if (body && typeof body.error === "string") detail = body.error;
      } catch {
        // non-JSON error body; keep the status message
      }
      throw new ApiError(detail, response.status);
    }
    return (await response.json()) as AnalyzeResponse;
  }

  async fetchAudio(ref: string): Promise<Blob> {
    const response = await fetch(`${this.baseUrl}/api/v1/audio/${encodeURIComponent(ref)}`);
    if (!response.ok) {
      throw new ApiError(response.status === 404 ? "audio expired" : "audio fetch failed",
        response.status);
    }
    return await response.blob();
  }

  async health(): Promise<Record<string, unknown>> {
    const response = await fetch(`${this.baseUrl}/api/v1/health`);
    if (!response.ok) throw new ApiError("service unreachable", response.status);
    return (await response.json()) as Record<string, unknown>;
  }
}
