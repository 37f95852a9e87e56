import type { FilterField, ParsedQueryEcho } from "./api.js";
import { FILTER_FIELDS } from "./api.js";

export interface Chip {
  field: FilterField;
  value: string;
  active: boolean;
}

/**
 * Chips come from the server's parsed-query echo and from nowhere else; the
 * client never guesses filters out of the raw text. A dismissed chip stays
 * visible but inactive, so the user can see what was detected and turn it
 * back on.
 */
export function chipsFromEcho(
  parsed: ParsedQueryEcho,
  dismissed: ReadonlySet<FilterField>,
): Chip[] {
  const chips: Chip[] = [];
  for (const field of FILTER_FIELDS) {
    const value = parsed[field];
    if (value !== null) {
      chips.push({ field, value, active: !dismissed.has(field) });
    }
  }
  return chips;
}
