import type { Report, ThemeSpec, ThemesPayload } from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number | null = null) {
    super(message);
  }
}

let baseUrl = "";

/** Point the client at a non-default server (used by tests). */
export function setBaseUrl(url: string): void {
  baseUrl = url.replace(/\/$/, "");
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(baseUrl + path, init);
  } catch (err) {
    throw new ApiError(`network failure: ${String(err)}`);
  }
  const body = await response.text();
  if (!response.ok) {
    let message = `${response.status} ${response.statusText}`;
    try {
      const parsed = JSON.parse(body) as { error?: string };
      if (parsed.error) message = parsed.error;
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiError(message, response.status);
  }
  return JSON.parse(body) as T;
}

export function getReport(): Promise<Report> {
  return request<Report>("/api/report");
}

export function getThemes(): Promise<ThemesPayload> {
  return request<ThemesPayload>("/api/themes");
}

/** POST a theme spec; resolves to the persisted spec plus the
 * server-derived counts. Counts shown in the UI must come from here,
 * never from client-side arithmetic. */
export function postThemes(spec: ThemeSpec): Promise<ThemesPayload> {
  return request<ThemesPayload>("/api/themes", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(spec),
  });
}
