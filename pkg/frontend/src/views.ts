// DOM rendering. The skeleton (header, filter box, pane containers) mounts
// once so text inputs survive re-renders; the dynamic regions are rebuilt
// from state on every change. No view code computes or reorders scores.

import type { Verdict } from "./api.js";
import {
  AppState,
  MAX_K,
  MIN_K,
  filterRequirements,
  formatScore,
  pageCount,
  pageOf,
  pairKey,
  truncateExcerpt,
} from "./state.js";

export interface Handlers {
  onFilter(value: string): void;
  onPage(delta: number): void;
  onSelect(id: string): void;
  onKChange(value: number): void;
  onVerdict(paragraphId: string, requirementId: string, verdict: Verdict): void;
  onToggleExpand(blockId: string): void;
  onRetry(): void;
}

export interface Skeleton {
  banner: HTMLElement;
  filterInput: HTMLInputElement;
  listRegion: HTMLElement;
  detailRegion: HTMLElement;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function mountSkeleton(root: HTMLElement, handlers: Handlers): Skeleton {
  root.textContent = "";

  const header = el("header");
  header.appendChild(el("h1", "", "Requirement review"));
  const banner = el("div", "banner");
  banner.id = "banner";
  header.appendChild(banner);
  root.appendChild(header);

  const main = el("main");

  const listPane = el("section", "list-pane");
  const filterInput = el("input");
  filterInput.id = "filter-input";
  filterInput.type = "search";
  filterInput.placeholder = "filter by requirement id";
  filterInput.addEventListener("input", () => handlers.onFilter(filterInput.value));
  listPane.appendChild(filterInput);
  const listRegion = el("div", "list-region");
  listRegion.id = "req-list";
  listPane.appendChild(listRegion);
  main.appendChild(listPane);

  const detailRegion = el("section", "detail-pane");
  detailRegion.id = "detail";
  main.appendChild(detailRegion);

  root.appendChild(main);
  return { banner, filterInput, listRegion, detailRegion };
}

export function renderBanner(target: HTMLElement, state: AppState, handlers: Handlers): void {
  target.textContent = "";
  if (!state.loadError) return;
  target.appendChild(el("span", "error", state.loadError));
  const retry = el("button", "retry", "retry");
  retry.id = "retry-btn";
  retry.addEventListener("click", () => handlers.onRetry());
  target.appendChild(retry);
}

export function renderList(target: HTMLElement, state: AppState, handlers: Handlers): void {
  target.textContent = "";
  if (state.loading) {
    target.appendChild(el("p", "empty", "loading checklist..."));
    return;
  }
  if (state.loadError) return;
  if (state.requirements.length === 0) {
    target.appendChild(el("p", "empty", "the checklist is empty"));
    return;
  }

  const filtered = filterRequirements(state.requirements, state.filter);
  if (filtered.length === 0) {
    target.appendChild(el("p", "empty", "no requirements match the filter"));
    return;
  }

  const pages = pageCount(filtered.length);
  const page = Math.min(state.page, pages - 1);

  const list = el("ul", "req-rows");
  for (const row of pageOf(filtered, page)) {
    const item = el("li", "req-row" + (row.id === state.selectedId ? " selected" : ""));
    item.dataset.id = row.id;
    item.appendChild(el("span", "req-id", row.id));
    item.appendChild(el("span", "req-lang", row.language));
    item.appendChild(el("span", "req-tally", `${row.accepted} accepted / ${row.rejected} rejected`));
    item.addEventListener("click", () => handlers.onSelect(row.id));
    list.appendChild(item);
  }
  target.appendChild(list);

  const nav = el("div", "pager");
  const prev = el("button", "page-prev", "prev");
  prev.disabled = page === 0;
  prev.addEventListener("click", () => handlers.onPage(-1));
  const label = el("span", "page-label", `page ${page + 1} of ${pages}`);
  const next = el("button", "page-next", "next");
  next.disabled = page >= pages - 1;
  next.addEventListener("click", () => handlers.onPage(1));
  nav.append(prev, label, next);
  target.appendChild(nav);
}

function renderTextBlock(
  blockId: string,
  text: string,
  state: AppState,
  handlers: Handlers,
): HTMLElement {
  const block = el("div", "text-block");
  const expanded = state.expanded.has(blockId);
  const cut = truncateExcerpt(text);
  const shown = expanded ? text : cut.shown;
  block.appendChild(el("span", "text", shown + (cut.truncated && !expanded ? "…" : "")));
  if (cut.truncated) {
    const toggle = el("button", "expand-btn", expanded ? "show less" : "show all");
    toggle.addEventListener("click", () => handlers.onToggleExpand(blockId));
    block.appendChild(toggle);
  }
  return block;
}

export function renderDetail(target: HTMLElement, state: AppState, handlers: Handlers): void {
  target.textContent = "";
  const selected = state.requirements.find((r) => r.id === state.selectedId);
  if (!selected) {
    target.appendChild(el("p", "empty", "select a requirement to see recommended paragraphs"));
    return;
  }

  const head = el("div", "detail-head");
  head.appendChild(el("h2", "", selected.id));
  head.appendChild(el("span", "req-lang", selected.language));
  target.appendChild(head);

  const description = el("div", "description");
  description.id = "description";
  description.appendChild(renderTextBlock(`desc:${selected.id}`, selected.description, state, handlers));
  target.appendChild(description);

  const controls = el("div", "controls");
  const kLabel = el("label", "", "top k ");
  const kInput = el("input");
  kInput.id = "k-input";
  kInput.type = "number";
  kInput.min = String(MIN_K);
  kInput.max = String(MAX_K);
  kInput.value = String(state.k);
  kInput.addEventListener("change", () => handlers.onKChange(Number(kInput.value)));
  kLabel.appendChild(kInput);
  controls.appendChild(kLabel);
  target.appendChild(controls);

  if (state.matchError) {
    target.appendChild(el("p", "error match-error", state.matchError));
    return;
  }
  if (state.hits.length === 0) {
    target.appendChild(el("p", "empty", "no recommended paragraphs"));
    return;
  }

  const table = el("table", "hits");
  const head2 = el("tr");
  head2.append(el("th", "", "paragraph"), el("th", "", "score"), el("th", "", "verdict"));
  table.appendChild(head2);

  for (const hit of state.hits) {
    const key = pairKey(hit.id, selected.id);
    const verdict = state.verdicts.get(key);
    const row = el("tr", "hit-row");
    row.dataset.pid = hit.id;

    row.appendChild(el("td", "pid", hit.id));
    row.appendChild(el("td", "score", formatScore(hit.score)));

    const cell = el("td", "verdict-cell");
    if (verdict) cell.appendChild(el("span", `badge ${verdict}`, verdict === "accept" ? "accepted" : "rejected"));
    const acceptBtn = el("button", "accept-btn", "accept");
    acceptBtn.addEventListener("click", () => handlers.onVerdict(hit.id, selected.id, "accept"));
    const rejectBtn = el("button", "reject-btn", "reject");
    rejectBtn.addEventListener("click", () => handlers.onVerdict(hit.id, selected.id, "reject"));
    cell.append(acceptBtn, rejectBtn);
    const rowError = state.rowErrors.get(key);
    if (rowError) cell.appendChild(el("span", "row-error", rowError));
    row.appendChild(cell);

    table.appendChild(row);
  }
  target.appendChild(table);
}
