// Page wiring: read the controls, build one request body, and hand it to
// the sequenced sender. All mutable state lives in init(); the render
// helpers are stateless.

import type {
  FilterField,
  ParsedQueryEcho,
  RecommendRequestBody,
  RecommendResponse,
} from "./api.js";
import { buildRequestBody, postRecommend } from "./api.js";
import type { Chip } from "./chips.js";
import { chipsFromEcho } from "./chips.js";
import { createSearchController } from "./controller.js";
import { renderChips, renderResults } from "./render.js";

function formatWeights(wSem: number): string {
  return `semantic ${wSem.toFixed(2)} / keyword ${(1 - wSem).toFixed(2)}`;
}

function init(): void {
  const input = document.querySelector<HTMLInputElement>("#query-input");
  const slider = document.querySelector<HTMLInputElement>("#wsem-slider");
  const sliderValue = document.querySelector<HTMLElement>("#wsem-value");
  const rerankToggle = document.querySelector<HTMLInputElement>("#rerank-toggle");
  const chipsRow = document.querySelector<HTMLElement>("#chips");
  const status = document.querySelector<HTMLElement>("#status");
  const resultsContainer = document.querySelector<HTMLElement>("#results");
  if (
    !input ||
    !slider ||
    !sliderValue ||
    !rerankToggle ||
    !chipsRow ||
    !status ||
    !resultsContainer
  ) {
    console.error("recommend UI failed to initialize: elements missing");
    return;
  }

  const dismissed = new Set<FilterField>();
  let lastEcho: ParsedQueryEcho | null = null;

  function showStatus(message: string, kind: "" | "warn" | "error" = ""): void {
    status!.textContent = message;
    status!.className = kind === "" ? "status" : `status ${kind}`;
  }

  function applyResponse(response: RecommendResponse): void {
    lastEcho = response.parsed_query;
    renderChips(chipsRow!, chipsFromEcho(response.parsed_query, dismissed), onChipToggle);
    renderResults(resultsContainer!, response.results);
    if (response.fallback_used) {
      showStatus("no posting matched every filter, so the filters were dropped", "warn");
    } else {
      const n = response.results.length;
      showStatus(`${n} result${n === 1 ? "" : "s"} in ${response.timing_ms.toFixed(0)} ms`);
    }
  }

  const controller = createSearchController<RecommendRequestBody, RecommendResponse>({
    send: postRecommend,
    onResult: applyResponse,
    onError: (message) => showStatus(`error: ${message}`, "error"),
  });

  function refresh(immediate: boolean): void {
    const query = input!.value.trim();
    if (query === "") {
      // The server rejects empty queries, so clear the page instead.
      controller.cancel();
      lastEcho = null;
      renderChips(chipsRow!, [], onChipToggle);
      resultsContainer!.innerHTML = "";
      showStatus("type a query to search");
      return;
    }
    const body = buildRequestBody({
      query,
      wSem: Number(slider!.value),
      rerank: rerankToggle!.checked,
      dismissed,
    });
    if (immediate) {
      controller.issueNow(body);
    } else {
      controller.schedule(body);
    }
    showStatus("searching…");
  }

  function onChipToggle(chip: Chip): void {
    if (dismissed.has(chip.field)) {
      dismissed.delete(chip.field);
    } else {
      dismissed.add(chip.field);
    }
    // Repaint the chip row right away; the fresh results follow.
    if (lastEcho !== null) {
      renderChips(chipsRow!, chipsFromEcho(lastEcho, dismissed), onChipToggle);
    }
    refresh(true);
  }

  input.addEventListener("input", () => {
    // A new query means a fresh parse; dismissals do not carry over.
    dismissed.clear();
    refresh(false);
  });
  slider.addEventListener("input", () => {
    sliderValue!.textContent = formatWeights(Number(slider!.value));
    refresh(false);
  });
  rerankToggle.addEventListener("change", () => refresh(true));

  sliderValue.textContent = formatWeights(Number(slider.value));
}

document.addEventListener("DOMContentLoaded", init);
