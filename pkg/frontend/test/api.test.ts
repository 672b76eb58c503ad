import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function stubFetch(handler: (url: string, init?: RequestInit) => unknown) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const fn = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    const body = handler(url, init);
    if (body instanceof Response) return body;
    return new Response(JSON.stringify(body), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  };
  return { fn, calls };
}

describe("ApiClient", () => {
  it("posts the example name on create", async () => {
    const { fn, calls } = stubFetch(() => ({ id: "x", state: {} }));
    const api = new ApiClient("http://h", fn);
    await api.createFromExample("c3");
    expect(calls[0].url).toBe("http://h/sessions");
    expect(JSON.parse(String(calls[0].init!.body))).toEqual({ example: "c3" });
  });

  it("threads panel and vertex query parameters", async () => {
    const { fn, calls } = stubFetch(() => ({}));
    const api = new ApiClient("", fn);
    await api.getState("abc", ["homology", "phi"], "2");
    expect(calls[0].url).toBe("/sessions/abc?panel=homology&panel=phi&vertex=2");
  });

  it("omits query string when no panels are requested", async () => {
    const { fn, calls } = stubFetch(() => ({}));
    const api = new ApiClient("", fn);
    await api.getState("abc");
    expect(calls[0].url).toBe("/sessions/abc");
  });

  it("raises ApiError with diagnostics on 400", async () => {
    const { fn } = stubFetch(
      () =>
        new Response(
          JSON.stringify({
            error: "parse failed",
            diagnostics: [{ line: 3, col: 1, message: "not a cycle", token: "a" }],
          }),
          { status: 400 },
        ),
    );
    const api = new ApiClient("", fn);
    const err = await api.createFromText("bad").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(400);
    expect(err.diagnostics[0].line).toBe(3);
  });

  it("raises ApiError with the server message on 409", async () => {
    const { fn } = stubFetch(
      () => new Response(JSON.stringify({ error: "two-cycle at vertex" }), { status: 409 }),
    );
    const api = new ApiClient("", fn);
    const err = await api.mutate("s", "1").catch((e) => e);
    expect(err.message).toBe("two-cycle at vertex");
  });
});
