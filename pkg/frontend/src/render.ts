import type { FilterField, RecommendResult } from "./api.js";
import type { Chip } from "./chips.js";
import { segmentByKeywords } from "./highlight.js";

const CHIP_LABELS: Record<FilterField, string> = {
  work_mode: "work mode",
  seniority: "seniority",
  employment: "employment",
  location: "location",
};

/** Text with the matched keywords wrapped in <mark> elements. */
export function renderHighlighted(
  text: string,
  keywords: readonly string[],
): DocumentFragment {
  const fragment = document.createDocumentFragment();
  for (const segment of segmentByKeywords(text, keywords)) {
    if (segment.marked) {
      const mark = document.createElement("mark");
      mark.textContent = segment.text;
      fragment.appendChild(mark);
    } else {
      fragment.appendChild(document.createTextNode(segment.text));
    }
  }
  return fragment;
}

export function renderChips(
  container: HTMLElement,
  chips: Chip[],
  onToggle: (chip: Chip) => void,
): void {
  container.innerHTML = "";
  for (const chip of chips) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = chip.active ? "chip" : "chip off";
    button.dataset.field = chip.field;
    button.title = chip.active ? "dismiss this filter" : "apply this filter again";

    const label = document.createElement("span");
    label.className = "chip-label";
    label.textContent = `${CHIP_LABELS[chip.field]}: ${chip.value}`;
    button.appendChild(label);

    const glyph = document.createElement("span");
    glyph.className = "chip-glyph";
    glyph.textContent = chip.active ? "×" : "+";
    button.appendChild(glyph);

    button.addEventListener("click", () => onToggle(chip));
    container.appendChild(button);
  }
}

function appendMeta(target: HTMLElement, pieces: [string, string[]][]): void {
  let first = true;
  for (const [text, keywords] of pieces) {
    if (text === "") {
      continue;
    }
    if (!first) {
      target.appendChild(document.createTextNode(" • "));
    }
    target.appendChild(renderHighlighted(text, keywords));
    first = false;
  }
}

function createResultCard(result: RecommendResult): HTMLElement {
  const keywords = result.explanation.matched_keywords;
  const posting = result.posting;

  const card = document.createElement("article");
  card.className = "result-card";

  const header = document.createElement("header");
  const rank = document.createElement("span");
  rank.className = "result-rank";
  rank.textContent = `#${result.rank}`;
  header.appendChild(rank);

  const title = document.createElement("h3");
  title.className = "result-title";
  title.appendChild(renderHighlighted(posting.title, keywords));
  header.appendChild(title);

  const score = document.createElement("span");
  score.className = "result-score";
  score.textContent = result.score_breakdown.s_final.toFixed(4);
  score.title = "final score";
  header.appendChild(score);
  card.appendChild(header);

  const meta = document.createElement("p");
  meta.className = "result-meta";
  appendMeta(meta, [
    [posting.company, keywords],
    [posting.location, keywords],
    [posting.seniority, keywords],
    [posting.employment_type, keywords],
  ]);
  card.appendChild(meta);

  const evidence = document.createElement("p");
  evidence.className = "result-evidence";
  evidence.textContent = result.explanation.ranking_evidence;
  card.appendChild(evidence);

  return card;
}

/**
 * Append one card per result, in response order. Ranking is the server's
 * job; this function must never sort.
 */
export function renderResults(container: HTMLElement, results: RecommendResult[]): void {
  container.innerHTML = "";
  if (results.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "no postings matched this query";
    container.appendChild(empty);
    return;
  }
  for (const result of results) {
    container.appendChild(createResultCard(result));
  }
}
