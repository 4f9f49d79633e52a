import { readFileSync } from "node:fs";

/** Recorded service responses (regenerate with scripts/gen_fixtures.py). */
export function fixture<T = unknown>(name: string): T {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

type Route = { status: number; body: unknown };

/** fetch stand-in serving the recorded responses by method+path. */
export function fakeFetch(routes: Record<string, Route>) {
  const calls: string[] = [];
  const fn = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const path = input.replace(/^https?:\/\/[^/]+/, "");
    const key = `${method} ${path}`;
    calls.push(key);
    const route = routes[key];
    if (!route) {
      return new Response(JSON.stringify({ schema_version: "1", error: `no route ${key}` }), {
        status: 404,
        headers: { "Content-Type": "application/json" },
      });
    }
    return new Response(JSON.stringify(route.body), {
      status: route.status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fn, calls };
}
