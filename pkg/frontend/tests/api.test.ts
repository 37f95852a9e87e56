import { afterEach, describe, expect, it, vi } from "vitest";

import { buildRequestBody, postRecommend } from "../src/api.js";

describe("buildRequestBody", () => {
  it("always carries the query, both weights and the rerank flag", () => {
    const body = buildRequestBody({
      query: "data analyst",
      wSem: 0.35,
      rerank: true,
      dismissed: new Set(),
    });
    expect(body).toEqual({
      query: "data analyst",
      w_sem: 0.35,
      w_lex: 1 - 0.35,
      rerank: true,
    });
  });

  it("sends dismissed filters as explicit nulls and omits the rest", () => {
    const body = buildRequestBody({
      query: "remote junior data analyst london",
      wSem: 0.4,
      rerank: false,
      dismissed: new Set(["location", "work_mode"]),
    });
    expect(body.location).toBeNull();
    expect(body.work_mode).toBeNull();
    expect("seniority" in body).toBe(false);
    expect("employment" in body).toBe(false);
    // The nulls must survive serialization; that is what the server keys on.
    const wire = JSON.parse(JSON.stringify(body)) as Record<string, unknown>;
    expect(wire.location).toBeNull();
    expect("seniority" in wire).toBe(false);
  });
});

describe("postRecommend", () => {
  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it("posts JSON to the recommend endpoint and returns the parsed payload", async () => {
    const payload = { query: "nurse", results: [] };
    const fetchMock = vi.fn(async () => new Response(JSON.stringify(payload), { status: 200 }));
    vi.stubGlobal("fetch", fetchMock);

    const body = buildRequestBody({
      query: "nurse",
      wSem: 0.4,
      rerank: false,
      dismissed: new Set(),
    });
    const response = await postRecommend(body, "");

    expect(response).toEqual(payload);
    expect(fetchMock).toHaveBeenCalledTimes(1);
    const [url, init] = fetchMock.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("/api/v1/recommend");
    expect(init.method).toBe("POST");
    expect((init.headers as Record<string, string>)["Content-Type"]).toBe("application/json");
    expect(JSON.parse(init.body as string)).toEqual(body);
  });

  it("surfaces the server's detail message on an error status", async () => {
    const fetchMock = vi.fn(
      async () => new Response(JSON.stringify({ detail: "query must not be empty" }), { status: 400 }),
    );
    vi.stubGlobal("fetch", fetchMock);

    await expect(
      postRecommend({ query: "", w_sem: 0.4, w_lex: 0.6, rerank: false }, ""),
    ).rejects.toThrow("query must not be empty");
  });

  it("falls back to a status message when the error body is not JSON", async () => {
    const fetchMock = vi.fn(async () => new Response("gateway timeout", { status: 504 }));
    vi.stubGlobal("fetch", fetchMock);

    await expect(
      postRecommend({ query: "nurse", w_sem: 0.4, w_lex: 0.6, rerank: false }, ""),
    ).rejects.toThrow("request failed with status 504");
  });
});
