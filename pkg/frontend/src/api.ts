import { z } from "zod";

export const AssessmentReportSchema = z
  .object({
    schema_version: z.string(),
    dmu: z.string(),
    program: z.object({ variant: z.string(), kappa: z.number().nullable() }),
    step1: z
      .object({
        Q: z.array(z.number()),
        P: z.array(z.number()),
        pi: z.array(z.number()),
        delta: z.number(),
      })
      .passthrough(),
    step2: z
      .object({
        E: z.number(),
        F: z.number(),
        gamma: z.number(),
        w: z.number(),
        omega: z.number(),
        alpha_affected: z.number(),
        beta_affected: z.number(),
        x_target: z.array(z.number()),
        y_target: z.array(z.number()),
        peers: z.array(z.string()),
      })
      .passthrough(),
    decomposition: z
      .object({
        E: z.number(),
        T: z.number(),
        S: z.number(),
        Xi: z.number(),
        rts_class: z.string(),
      })
      .passthrough(),
    dataset: z
      .object({
        ids: z.array(z.string()),
        input_names: z.array(z.string()),
        output_names: z.array(z.string()),
      })
      .passthrough(),
  })
  .passthrough();

export type AssessmentReport = z.infer<typeof AssessmentReportSchema>;

export const SessionSnapshotSchema = z
  .object({
    schema_version: z.string(),
    session_id: z.string().nullable(),
    o: z.string(),
    excluded: z.array(z.string()),
    kappa1: z.number(),
    kappa2: z.number(),
    kappa2_open: z.boolean(),
    interval: z.tuple([z.number(), z.number()]),
    finalized: z.boolean(),
    dataset: z.object({
      input_names: z.array(z.string()),
      output_names: z.array(z.string()),
      dmus: z.array(
        z.object({
          id: z.string(),
          inputs: z.array(z.number()),
          outputs: z.array(z.number()),
        }),
      ),
    }),
    phase_reports: z.object({
      pte: AssessmentReportSchema,
      ste1: AssessmentReportSchema,
      ste2: AssessmentReportSchema,
    }),
    what_if_log: z.array(z.object({ kappa: z.number(), report: AssessmentReportSchema })),
    final: z.object({ kappa: z.number(), report: AssessmentReportSchema }).nullable(),
  })
  .passthrough();

export type SessionSnapshot = z.infer<typeof SessionSnapshotSchema>;

export const GeometrySchema = z
  .object({
    frame: z.enum(["pte", "ste"]),
    points: z.array(
      z.object({
        id: z.string(),
        x: z.number(),
        y: z.number(),
        kind: z.string(),
        quadrant: z.string(),
      }),
    ),
    anchor: z.object({ x: z.number(), y: z.number() }),
    boundary: z.string(),
    vectors: z.array(z.object({ from: z.string(), to: z.string(), label: z.string() })),
  })
  .passthrough();

export type Geometry = z.infer<typeof GeometrySchema>;

export const WhatIfResponseSchema = z
  .object({
    kappa: z.number(),
    report: AssessmentReportSchema,
    session: SessionSnapshotSchema,
  })
  .passthrough();

export type WhatIfResponse = z.infer<typeof WhatIfResponseSchema>;

export const ExcludeResponseSchema = z
  .object({
    session_id: z.string(),
    session: SessionSnapshotSchema,
  })
  .passthrough();

export type ExcludeResponse = z.infer<typeof ExcludeResponseSchema>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client; every number shown in the UI comes from these payloads. */
export class VgaClient {
  constructor(
    public readonly base: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const resp = await this.fetchFn(`${this.base}${path}`, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const body = (await resp.json()) as Record<string, unknown>;
    if (!resp.ok) {
      const detail = typeof body.error === "string" ? body.error : resp.statusText;
      throw new ApiError(resp.status, detail);
    }
    return body;
  }

  async uploadCsv(csv: string): Promise<{ datasetId: string; ids: string[] }> {
    const body = (await this.request("/datasets", {
      method: "POST",
      body: JSON.stringify({ csv }),
    })) as { dataset_id: string; ids: string[] };
    return { datasetId: body.dataset_id, ids: body.ids };
  }

  async createSession(datasetId: string, dmu: string): Promise<SessionSnapshot> {
    return SessionSnapshotSchema.parse(
      await this.request("/sessions", {
        method: "POST",
        body: JSON.stringify({ dataset_id: datasetId, dmu }),
      }),
    );
  }

  async getSession(sessionId: string): Promise<SessionSnapshot> {
    return SessionSnapshotSchema.parse(await this.request(`/sessions/${sessionId}`));
  }

  async whatIf(sessionId: string, kappa: number): Promise<WhatIfResponse> {
    return WhatIfResponseSchema.parse(
      await this.request(`/sessions/${sessionId}/what-if`, {
        method: "POST",
        body: JSON.stringify({ kappa }),
      }),
    );
  }

  async exclude(sessionId: string, ids: string[]): Promise<ExcludeResponse> {
    return ExcludeResponseSchema.parse(
      await this.request(`/sessions/${sessionId}/exclude`, {
        method: "POST",
        body: JSON.stringify({ ids }),
      }),
    );
  }

  async finalize(sessionId: string, kappa: number): Promise<SessionSnapshot> {
    return SessionSnapshotSchema.parse(
      await this.request(`/sessions/${sessionId}/finalize`, {
        method: "POST",
        body: JSON.stringify({ kappa }),
      }),
    );
  }

  async geometry(sessionId: string, frame: "pte" | "ste"): Promise<Geometry> {
    return GeometrySchema.parse(
      await this.request(`/sessions/${sessionId}/geometry?frame=${frame}`),
    );
  }
}
