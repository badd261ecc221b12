/**
 * Thin client for the /v1 endpoints with per-endpoint in-flight
 * cancellation: a newer request aborts the previous one so stale responses
 * never land in the UI.
 */

import type {
  CompareResponse,
  StrategyDoc,
  TrajectoryResponse,
  ValuationRequestDoc,
  ValuationResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(typeof detail === 'string' ? detail : `request failed (${status})`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(
    private baseUrl: string = '',
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    this.inflight.get(path)?.abort();
    const controller = new AbortController();
    this.inflight.set(path, controller);
    try {
      const resp = await this.fetchImpl(this.baseUrl + path, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(body),
        signal: controller.signal,
      });
      if (!resp.ok) {
        let detail: unknown = resp.statusText;
        try {
          detail = (await resp.json()).detail;
        } catch {
          // keep the status text
        }
        throw new ApiError(resp.status, detail);
      }
      return (await resp.json()) as T;
    } finally {
      if (this.inflight.get(path) === controller) {
        this.inflight.delete(path);
      }
    }
  }

  valuation(request: ValuationRequestDoc): Promise<ValuationResponse> {
    return this.post('/v1/valuation', request);
  }

  trajectory(request: ValuationRequestDoc): Promise<TrajectoryResponse> {
    return this.post('/v1/trajectory', request);
  }

  compare(
    request: ValuationRequestDoc,
    strategies: StrategyDoc[],
  ): Promise<CompareResponse> {
    return this.post('/v1/compare', { ...request, strategies });
  }

  async health(): Promise<{ status: string; version: string }> {
    const resp = await this.fetchImpl(this.baseUrl + '/v1/health');
    if (!resp.ok) {
      throw new ApiError(resp.status, resp.statusText);
    }
    return (await resp.json()) as { status: string; version: string };
  }
}

/** Trailing-edge debounce used for slider drags. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms = 150,
): { (...args: A): void; cancel(): void } {
  let timer: ReturnType<typeof setTimeout> | undefined;
  const wrapped = (...args: A) => {
    if (timer !== undefined) {
      clearTimeout(timer);
    }
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, ms);
  };
  wrapped.cancel = () => {
    if (timer !== undefined) {
      clearTimeout(timer);
      timer = undefined;
    }
  };
  return wrapped;
}
