// Thin typed client over the session API. All editor traffic goes through
// here; the editor never talks to a solver directly.

import type {
  AbduceResponse,
  CorpusEntry,
  EditOpJson,
  SessionResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export interface VisualizeBody {
  program?: string;
  interpretation?: string;
  corpus?: string;
  seed?: number;
}

export interface AbduceOverrides {
  integrity?: string[];
  abducibles?: string[];
  domainTerms?: string[];
  all?: boolean;
}

async function asJson<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const message = (body as { error?: string }).error ?? response.statusText;
    throw new ApiError(response.status, message);
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async corpus(): Promise<CorpusEntry[]> {
    return asJson(await fetch(this.url("/api/corpus")));
  }

  async visualize(body: VisualizeBody): Promise<SessionResponse> {
    return asJson(await fetch(this.url("/api/visualize"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }));
  }

  async scene(sessionId: string): Promise<SessionResponse> {
    return asJson(await fetch(this.url(`/api/session/${sessionId}/scene`)));
  }

  async edit(sessionId: string, op: EditOpJson): Promise<SessionResponse> {
    return asJson(await fetch(this.url(`/api/session/${sessionId}/edit`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(op),
    }));
  }

  async abduce(sessionId: string, overrides: AbduceOverrides = {}): Promise<AbduceResponse> {
    return asJson(await fetch(this.url(`/api/session/${sessionId}/abduce`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(overrides),
    }));
  }

  svgUrl(sessionId: string): string {
    return this.url(`/api/session/${sessionId}/svg`);
  }

  async svg(sessionId: string): Promise<string> {
    const response = await fetch(this.svgUrl(sessionId));
    if (!response.ok) {
      throw new ApiError(response.status, response.statusText);
    }
    return response.text();
  }
}
