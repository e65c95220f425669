// Thin clients for the five endpoints of the matching service.
// Nothing else in the UI talks to the network.

export interface RequirementRow {
  id: string;
  description: string;
  language: string;
  accepted: number;
  rejected: number;
}

export interface MatchHit {
  id: string;
  score: number;
}

export interface MatchResult {
  direction: string;
  k: number;
  hits: MatchHit[];
}

export interface HealthInfo {
  status: string;
  checkpoint: string | null;
  index_items: number;
  annotation_events: number;
}

export type Verdict = "accept" | "reject";

export interface AnnotationReceipt {
  accepted: boolean;
  stored: boolean;
}

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

let baseUrl = "";

export function setBaseUrl(url: string): void {
  baseUrl = url.replace(/\/+$/, "");
}

async function request(path: string, init?: RequestInit): Promise<Response> {
  let res: Response;
  try {
    res = await fetch(`${baseUrl}${path}`, init);
  } catch (err) {
    throw new ApiError(0, `server unreachable: ${String(err)}`);
  }
  if (!res.ok) {
    const text = await res.text();
    let message = text || `${res.status}`;
    try {
      const parsed = JSON.parse(text);
      if (typeof parsed.detail === "string") message = parsed.detail;
    } catch {
      // not JSON: surface the raw body
    }
    throw new ApiError(res.status, message);
  }
  return res;
}

export async function getHealth(): Promise<HealthInfo> {
  return (await request("/health")).json();
}

export async function getRequirements(): Promise<RequirementRow[]> {
  const body = await (await request("/requirements")).json();
  return body.requirements;
}

export async function postMatch(
  text: string,
  direction: string,
  k: number,
): Promise<MatchResult> {
  const res = await request("/match", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ text, direction, k }),
  });
  return res.json();
}

export async function postAnnotation(
  paragraphId: string,
  requirementId: string,
  verdict: Verdict,
): Promise<AnnotationReceipt> {
  const res = await request("/annotations", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({
      paragraph_id: paragraphId,
      requirement_id: requirementId,
      verdict,
      source: "ui",
    }),
  });
  return res.json();
}

export async function getAnnotationsExport(): Promise<string> {
  return (await request("/annotations/export")).text();
}
