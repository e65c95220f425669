// Wiring: one state object, handlers that call the API, and region
// re-renders after every transition. Async work runs through a serial
// queue so interactions stay ordered and tests can await idle().

import * as api from "./api.js";
import type { Verdict } from "./api.js";
import {
  AppState,
  clampK,
  filterRequirements,
  initialState,
  pageCount,
  pairKey,
  parseExport,
  seedVerdicts,
} from "./state.js";
import {
  Handlers,
  Skeleton,
  mountSkeleton,
  renderBanner,
  renderDetail,
  renderList,
} from "./views.js";

export interface App {
  idle(): Promise<void>;
}

function messageOf(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

export function initApp(root: HTMLElement): App {
  const state: AppState = initialState();
  let queue: Promise<void> = Promise.resolve();

  function enqueue(task: () => Promise<void>): void {
    queue = queue.then(task);
  }

  function redraw(): void {
    renderBanner(skeleton.banner, state, handlers);
    renderList(skeleton.listRegion, state, handlers);
    renderDetail(skeleton.detailRegion, state, handlers);
  }

  async function loadAll(): Promise<void> {
    state.loading = true;
    state.loadError = null;
    redraw();
    try {
      const [requirements, exportText] = await Promise.all([
        api.getRequirements(),
        api.getAnnotationsExport(),
      ]);
      state.requirements = requirements;
      state.verdicts = seedVerdicts(parseExport(exportText));
    } catch (err) {
      state.loadError = messageOf(err);
    }
    state.loading = false;
    redraw();
  }

  async function requery(): Promise<void> {
    const selected = state.requirements.find((r) => r.id === state.selectedId);
    if (!selected) return;
    state.matchError = null;
    try {
      // server-authoritative: hits land in response order and stay there
      const result = await api.postMatch(selected.description, "paragraphs", state.k);
      state.hits = result.hits;
    } catch (err) {
      state.hits = [];
      state.matchError = messageOf(err);
    }
    redraw();
  }

  async function recordVerdict(
    paragraphId: string,
    requirementId: string,
    verdict: Verdict,
  ): Promise<void> {
    const key = pairKey(paragraphId, requirementId);
    if (state.verdicts.get(key) === verdict) return; // replay: nothing new to store
    const previous = state.verdicts.get(key);
    state.verdicts.set(key, verdict); // optimistic
    state.rowErrors.delete(key);
    redraw();
    try {
      await api.postAnnotation(paragraphId, requirementId, verdict);
      try {
        state.requirements = await api.getRequirements(); // refresh tallies
      } catch {
        // stale tallies until the next load; the verdict itself is stored
      }
    } catch (err) {
      if (previous === undefined) state.verdicts.delete(key);
      else state.verdicts.set(key, previous);
      state.rowErrors.set(key, messageOf(err));
    }
    redraw();
  }

  const handlers: Handlers = {
    onFilter(value) {
      state.filter = value;
      state.page = 0;
      redraw();
    },
    onPage(delta) {
      const filtered = filterRequirements(state.requirements, state.filter);
      const top = pageCount(filtered.length) - 1;
      state.page = Math.min(top, Math.max(0, Math.min(state.page, top) + delta));
      redraw();
    },
    onSelect(id) {
      state.selectedId = id;
      state.hits = [];
      state.matchError = null;
      redraw();
      enqueue(requery);
    },
    onKChange(value) {
      const k = clampK(value);
      const changed = k !== state.k;
      state.k = k;
      redraw(); // normalizes the input to the clamped value
      if (changed) enqueue(requery);
    },
    onVerdict(paragraphId, requirementId, verdict) {
      enqueue(() => recordVerdict(paragraphId, requirementId, verdict));
    },
    onToggleExpand(blockId) {
      if (state.expanded.has(blockId)) state.expanded.delete(blockId);
      else state.expanded.add(blockId);
      redraw();
    },
    onRetry() {
      enqueue(loadAll);
    },
  };

  const skeleton: Skeleton = mountSkeleton(root, handlers);
  redraw();
  enqueue(loadAll);

  return { idle: () => queue };
}

const mount = document.getElementById("app");
if (mount) initApp(mount);
