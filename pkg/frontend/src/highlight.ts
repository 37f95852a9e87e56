export interface Segment {
  text: string;
  marked: boolean;
}

/**
 * Split display text into segments, marking exactly the whole words listed
 * in `keywords`. Posting fields arrive already normalized (lowercase words
 * separated by single spaces), so a plain split sees the same tokens the
 * server matched; a keyword never marks a substring of a longer word.
 * Joining the segment texts reproduces the input unchanged.
 */
export function segmentByKeywords(text: string, keywords: readonly string[]): Segment[] {
  const wanted = new Set(keywords);
  const segments: Segment[] = [];
  const push = (piece: string, marked: boolean) => {
    if (piece === "") {
      return;
    }
    const last = segments[segments.length - 1];
    if (last !== undefined && last.marked === marked) {
      last.text += piece;
    } else {
      segments.push({ text: piece, marked });
    }
  };
  text.split(" ").forEach((word, i) => {
    if (i > 0) {
      push(" ", false);
    }
    push(word, wanted.has(word));
  });
  return segments;
}
