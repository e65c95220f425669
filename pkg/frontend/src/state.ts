// Client state and its pure transitions. The server stays authoritative:
// hits keep server order, scores render as received, and verdict badges
// reseed from the annotations export on every load. Rejected verdicts are
// session-local because the export carries accepted pairs only.

import type { MatchHit, RequirementRow, Verdict } from "./api.js";

export const EXCERPT_LIMIT = 400;
export const MIN_K = 1;
export const MAX_K = 20;
export const DEFAULT_K = 5;
export const PAGE_SIZE = 10;

export interface AppState {
  requirements: RequirementRow[];
  filter: string;
  page: number;
  selectedId: string | null;
  k: number;
  hits: MatchHit[];
  matchError: string | null;
  verdicts: Map<string, Verdict>;
  rowErrors: Map<string, string>;
  expanded: Set<string>;
  loadError: string | null;
  loading: boolean;
}

export function initialState(): AppState {
  return {
    requirements: [],
    filter: "",
    page: 0,
    selectedId: null,
    k: DEFAULT_K,
    hits: [],
    matchError: null,
    verdicts: new Map(),
    rowErrors: new Map(),
    expanded: new Set(),
    loadError: null,
    loading: true,
  };
}

export function pairKey(paragraphId: string, requirementId: string): string {
  return `${paragraphId}\t${requirementId}`;
}

// One "pid TAB rid" line per accepted pair, the export wire format.
export function parseExport(text: string): Array<[string, string]> {
  const pairs: Array<[string, string]> = [];
  for (const line of text.split("\n")) {
    if (!line.trim()) continue;
    const [pid, rid] = line.split("\t");
    if (pid && rid) pairs.push([pid, rid]);
  }
  return pairs;
}

export function seedVerdicts(pairs: Array<[string, string]>): Map<string, Verdict> {
  const verdicts = new Map<string, Verdict>();
  for (const [pid, rid] of pairs) verdicts.set(pairKey(pid, rid), "accept");
  return verdicts;
}

export function clampK(value: number): number {
  if (!Number.isFinite(value)) return DEFAULT_K;
  return Math.min(MAX_K, Math.max(MIN_K, Math.trunc(value)));
}

// Substring filter on requirement ids; server order is preserved.
export function filterRequirements(
  rows: RequirementRow[],
  filter: string,
): RequirementRow[] {
  const needle = filter.trim().toLowerCase();
  if (!needle) return rows;
  return rows.filter((r) => r.id.toLowerCase().includes(needle));
}

export function pageCount(total: number, size: number = PAGE_SIZE): number {
  return Math.max(1, Math.ceil(total / size));
}

export function pageOf<T>(rows: T[], page: number, size: number = PAGE_SIZE): T[] {
  return rows.slice(page * size, (page + 1) * size);
}

export function truncateExcerpt(
  text: string,
  limit: number = EXCERPT_LIMIT,
): { shown: string; truncated: boolean } {
  if (text.length <= limit) return { shown: text, truncated: false };
  return { shown: text.slice(0, limit), truncated: true };
}

export function formatScore(score: number): string {
  return score.toFixed(3);
}
