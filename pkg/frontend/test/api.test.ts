import { afterEach, describe, expect, it, vi } from "vitest";

import {
  ApiError,
  getAnnotationsExport,
  getHealth,
  getRequirements,
  postAnnotation,
  postMatch,
  setBaseUrl,
} from "../src/api.js";

type StubResponse = {
  ok: boolean;
  status: number;
  json: () => Promise<unknown>;
  text: () => Promise<string>;
};

function jsonResponse(status: number, body: unknown): StubResponse {
  return {
    ok: status < 400,
    status,
    json: async () => body,
    text: async () => JSON.stringify(body),
  };
}

function textResponse(status: number, body: string): StubResponse {
  return {
    ok: status < 400,
    status,
    json: async () => JSON.parse(body),
    text: async () => body,
  };
}

afterEach(() => {
  vi.unstubAllGlobals();
  setBaseUrl("");
});

describe("endpoint clients", () => {
  it("GET /health returns the payload as-is", async () => {
    const payload = { status: "ok", checkpoint: "mlm+tsdae+supervised", index_items: 3, annotation_events: 0 };
    const fetchMock = vi.fn(async () => jsonResponse(200, payload));
    vi.stubGlobal("fetch", fetchMock);

    expect(await getHealth()).toEqual(payload);
    expect(fetchMock).toHaveBeenCalledWith("/health", undefined);
  });

  it("GET /requirements unwraps the requirements list", async () => {
    const rows = [{ id: "C_1_1", description: "d", language: "en", accepted: 0, rejected: 0 }];
    const fetchMock = vi.fn(async () => jsonResponse(200, { requirements: rows }));
    vi.stubGlobal("fetch", fetchMock);

    expect(await getRequirements()).toEqual(rows);
    expect(fetchMock).toHaveBeenCalledWith("/requirements", undefined);
  });

  it("POST /match sends text, direction, and k as JSON", async () => {
    const result = { direction: "paragraphs", k: 2, hits: [{ id: "P_1", score: 0.5 }] };
    const fetchMock = vi.fn(async () => jsonResponse(200, result));
    vi.stubGlobal("fetch", fetchMock);

    expect(await postMatch("some text", "paragraphs", 2)).toEqual(result);
    const [path, init] = fetchMock.mock.calls[0] as [string, RequestInit];
    expect(path).toBe("/match");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body as string)).toEqual({ text: "some text", direction: "paragraphs", k: 2 });
  });

  it("POST /annotations tags ui as the source", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(200, { accepted: true, stored: true }));
    vi.stubGlobal("fetch", fetchMock);

    expect(await postAnnotation("P_1", "C_1_1", "accept")).toEqual({ accepted: true, stored: true });
    const [, init] = fetchMock.mock.calls[0] as [string, RequestInit];
    expect(JSON.parse(init.body as string)).toEqual({
      paragraph_id: "P_1",
      requirement_id: "C_1_1",
      verdict: "accept",
      source: "ui",
    });
  });

  it("GET /annotations/export returns the raw text body", async () => {
    const fetchMock = vi.fn(async () => textResponse(200, "P_1\tC_1_1\n"));
    vi.stubGlobal("fetch", fetchMock);

    expect(await getAnnotationsExport()).toBe("P_1\tC_1_1\n");
  });

  it("honors a configured base url", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(200, { requirements: [] }));
    vi.stubGlobal("fetch", fetchMock);
    setBaseUrl("http://localhost:8000/");

    await getRequirements();
    expect(fetchMock).toHaveBeenCalledWith("http://localhost:8000/requirements", undefined);
  });
});

describe("error surfacing", () => {
  it("extracts the server's detail message from error bodies", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => textResponse(422, '{"detail":"unknown paragraph id \'P_x\'"}')));

    const err = await getRequirements().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.message).toBe("unknown paragraph id 'P_x'");
  });

  it("falls back to the raw body when it is not JSON", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => textResponse(500, "boom")));

    const err = await getHealth().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(500);
    expect(err.message).toBe("boom");
  });

  it("maps network failures to status 0", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => {
      throw new TypeError("fetch failed");
    }));

    const err = await getAnnotationsExport().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(0);
    expect(err.message).toContain("server unreachable");
  });
});
