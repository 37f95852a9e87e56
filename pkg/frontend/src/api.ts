// Typed client for the recommendation API. The server returns results in
// final ranked order and every response carries the parsed-query echo;
// nothing on this side reorders results or re-derives filters.

export type FilterField = "work_mode" | "seniority" | "employment" | "location";

export const FILTER_FIELDS: readonly FilterField[] = [
  "work_mode",
  "seniority",
  "employment",
  "location",
];

export interface ParsedQueryEcho {
  raw: string;
  normalized: string;
  tokens: string[];
  work_mode: string | null;
  seniority: string | null;
  employment: string | null;
  location: string | null;
}

export interface Posting {
  id: number;
  title: string;
  company: string;
  location: string;
  hiring_status: string;
  posted_date: string;
  seniority: string;
  function: string;
  employment_type: string;
  industry: string;
}

export interface ScoreBreakdown {
  s_sem_raw: number;
  s_lex_raw: number;
  s_sem_hat: number;
  s_lex_hat: number;
  s_hybrid: number;
  s_rerank_hat: number | null;
  bonus: number;
  s_final: number;
}

export interface ResultExplanation {
  matched_keywords: string[];
  applied_filters: [string, string][];
  fallback_used: boolean;
  metadata_evidence: [string, string][];
  ranking_evidence: string;
}

export interface RecommendResult {
  rank: number;
  posting: Posting;
  score_breakdown: ScoreBreakdown;
  explanation: ResultExplanation;
}

export interface RecommendResponse {
  query: string;
  parsed_query: ParsedQueryEcho;
  applied_filters: [string, string][];
  fallback_used: boolean;
  results: RecommendResult[];
  timing_ms: number;
}

export interface RecommendRequestBody {
  query: string;
  w_sem: number;
  w_lex: number;
  rerank: boolean;
  work_mode?: string | null;
  seniority?: string | null;
  employment?: string | null;
  location?: string | null;
}

export interface SearchSettings {
  query: string;
  wSem: number;
  rerank: boolean;
  dismissed: ReadonlySet<FilterField>;
}

/**
 * Build one request body from the control state. A dismissed filter is sent
 * as an explicit null, which tells the server to drop the detected value;
 * filters that were not touched are omitted entirely, which tells the
 * server to keep whatever the parser found. JSON.stringify preserves the
 * nulls and drops nothing else, so the wire format matches this object.
 */
export function buildRequestBody(settings: SearchSettings): RecommendRequestBody {
  const body: RecommendRequestBody = {
    query: settings.query,
    w_sem: settings.wSem,
    w_lex: 1 - settings.wSem,
    rerank: settings.rerank,
  };
  for (const field of settings.dismissed) {
    body[field] = null;
  }
  return body;
}

function apiBase(): string {
  if (typeof window === "undefined") {
    return "";
  }
  return (window as { __API_BASE_URL__?: string }).__API_BASE_URL__ ?? "";
}

export async function postRecommend(
  body: RecommendRequestBody,
  base: string = apiBase(),
): Promise<RecommendResponse> {
  const response = await fetch(`${base}/api/v1/recommend`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    let detail = `request failed with status ${response.status}`;
    try {
      const payload = (await response.json()) as { detail?: string };
      if (payload.detail) {
        detail = payload.detail;
      }
    } catch {
      // unparseable error body; keep the status-based message
    }
    throw new Error(detail);
  }
  return (await response.json()) as RecommendResponse;
}
