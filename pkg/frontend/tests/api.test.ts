import { describe, expect, it, vi } from 'vitest';

import { ApiClient, ApiError, debounce } from '../src/api.js';
import { defaultInputs, toValuationRequest } from '../src/state.js';

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

describe('ApiClient', () => {
  it('posts the request document unchanged', async () => {
    const seen: { url: string; body: unknown }[] = [];
    const client = new ApiClient('http://svc', async (url, init) => {
      seen.push({ url, body: JSON.parse(String(init?.body)) });
      return jsonResponse({ ok: true });
    });
    const request = toValuationRequest(defaultInputs());
    await client.valuation(request);
    expect(seen[0].url).toBe('http://svc/v1/valuation');
    expect(seen[0].body).toEqual(request);
  });

  it('raises ApiError with the service detail on non-2xx', async () => {
    const client = new ApiClient('', async () =>
      jsonResponse({ detail: 'balance must be positive' }, 422),
    );
    await expect(
      client.valuation(toValuationRequest(defaultInputs())),
    ).rejects.toMatchObject({ status: 422, detail: 'balance must be positive' });
  });

  it('aborts the previous in-flight request on the same endpoint', async () => {
    const aborted: boolean[] = [];
    const client = new ApiClient('', (_url, init) => {
      const signal = init?.signal as AbortSignal;
      return new Promise<Response>((resolve, reject) => {
        const timer = setTimeout(() => resolve(jsonResponse({ ok: 1 })), 30);
        signal.addEventListener('abort', () => {
          clearTimeout(timer);
          aborted.push(true);
          reject(new DOMException('aborted', 'AbortError'));
        });
      });
    });
    const request = toValuationRequest(defaultInputs());
    const first = client.valuation(request);
    const second = client.valuation({ ...request, x: 200 });
    await expect(first).rejects.toThrow(/abort/i);
    await expect(second).resolves.toEqual({ ok: 1 });
    expect(aborted).toEqual([true]);
  });

  it('appends strategies in compare bodies', async () => {
    let body: Record<string, unknown> = {};
    const client = new ApiClient('', async (_url, init) => {
      body = JSON.parse(String(init?.body));
      return jsonResponse({ results: [] });
    });
    const request = toValuationRequest(defaultInputs());
    await client.compare(request, [{ label: 'max', segments: [{ end: 25, policy: 'max' }] }]);
    expect(body.strategies).toEqual([
      { label: 'max', segments: [{ end: 25, policy: 'max' }] },
    ]);
    expect(body.x).toBe(request.x);
  });
});

describe('ApiError', () => {
  it('keeps a readable message', () => {
    expect(new ApiError(422, 'nope').message).toBe('nope');
    expect(new ApiError(500, { weird: 1 }).message).toMatch(/500/);
  });
});

describe('debounce', () => {
  it('fires once on the trailing edge', async () => {
    vi.useFakeTimers();
    const calls: number[] = [];
    const tick = debounce((v: number) => calls.push(v), 150);
    tick(1);
    tick(2);
    tick(3);
    vi.advanceTimersByTime(149);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(2);
    expect(calls).toEqual([3]);
    tick(4);
    tick.cancel();
    vi.advanceTimersByTime(200);
    expect(calls).toEqual([3]);
    vi.useRealTimers();
  });
});
