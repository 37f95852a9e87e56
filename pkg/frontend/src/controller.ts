// Latest-wins request sequencing. Every issued request takes an increasing
// sequence number, and a response (or failure) is applied only while its
// number is still the newest one issued. Debounced typing funnels through
// the same sequence, so a slow early response can never overwrite the
// results of a fast later one.

export const DEFAULT_DEBOUNCE_MS = 300;

export interface ControllerOptions<Body, Result> {
  send: (body: Body) => Promise<Result>;
  onResult: (result: Result) => void;
  onError: (message: string) => void;
  debounceMs?: number;
}

export interface SearchController<Body> {
  /** Send after the debounce window, replacing any earlier pending send. */
  schedule(body: Body): void;
  /** Send immediately, cancelling any pending debounced send. */
  issueNow(body: Body): void;
  /** Drop the pending send and ignore whatever is currently in flight. */
  cancel(): void;
}

export function createSearchController<Body, Result>(
  options: ControllerOptions<Body, Result>,
): SearchController<Body> {
  const debounceMs = options.debounceMs ?? DEFAULT_DEBOUNCE_MS;
  let sequence = 0;
  let timer: ReturnType<typeof setTimeout> | null = null;

  const cancelPending = () => {
    if (timer !== null) {
      clearTimeout(timer);
      timer = null;
    }
  };

  const issue = async (body: Body) => {
    const token = ++sequence;
    try {
      const result = await options.send(body);
      if (token === sequence) {
        options.onResult(result);
      }
    } catch (error) {
      if (token === sequence) {
        options.onError(error instanceof Error ? error.message : String(error));
      }
    }
  };

  return {
    schedule(body: Body) {
      cancelPending();
      timer = setTimeout(() => {
        timer = null;
        void issue(body);
      }, debounceMs);
    },
    issueNow(body: Body) {
      cancelPending();
      void issue(body);
    },
    cancel() {
      cancelPending();
      sequence += 1;
    },
  };
}
