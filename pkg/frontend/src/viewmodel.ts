import type { AssessmentReport, Geometry, SessionSnapshot } from "./api";

export interface Gauge {
  label: string;
  value: number;
}

export function gauges(report: AssessmentReport): Gauge[] {
  const d = report.decomposition;
  return [
    { label: "E", value: d.E },
    { label: "T", value: d.T },
    { label: "S", value: d.S },
    { label: "Ξ", value: d.Xi },
  ];
}

export interface BenchmarkRow {
  index: string;
  side: "input" | "output";
  current: number;
  target: number;
  slackRatio: number;
}

/** Current level vs benchmark per index for the assessed unit. */
export function benchmarkRows(snapshot: SessionSnapshot, report: AssessmentReport): BenchmarkRow[] {
  const unit = snapshot.dataset.dmus.find((d) => d.id === snapshot.o);
  if (!unit) return [];
  const rows: BenchmarkRow[] = [];
  snapshot.dataset.input_names.forEach((name, i) => {
    rows.push({
      index: name,
      side: "input",
      current: unit.inputs[i],
      target: report.step2.x_target[i],
      slackRatio: report.step1.Q[i],
    });
  });
  snapshot.dataset.output_names.forEach((name, r) => {
    rows.push({
      index: name,
      side: "output",
      current: unit.outputs[r],
      target: report.step2.y_target[r],
      slackRatio: report.step1.P[r],
    });
  });
  return rows;
}

export interface ScatterPoint {
  id: string;
  x: number;
  y: number;
  kind: string;
  hover: string;
}

export interface ScatterVector {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  label: string;
}

export interface ScatterSpec {
  frame: "pte" | "ste";
  points: ScatterPoint[];
  /** Anchor marker; hidden (null) when it coincides with the origin. */
  anchor: { x: number; y: number } | null;
  /** Extent of the boundary diagonal from the origin. */
  diagonalMax: number;
  vectors: ScatterVector[];
}

export function hoverText(id: string, x: number, y: number): string {
  const gap = x - y;
  return `${id}: (${x.toFixed(3)}, ${y.toFixed(3)}), gap ${gap.toFixed(3)}`;
}

export function scatterSpec(geometry: Geometry): ScatterSpec {
  const pts = geometry.points
    .filter((p) => p.kind !== "origin")
    .map((p) => ({ id: p.id, x: p.x, y: p.y, kind: p.kind, hover: hoverText(p.id, p.x, p.y) }));
  const anchorAtOrigin = Math.abs(geometry.anchor.x) + Math.abs(geometry.anchor.y) <= 1e-9;
  const anchor = anchorAtOrigin ? null : { x: geometry.anchor.x, y: geometry.anchor.y };

  const coords = new Map<string, { x: number; y: number }>();
  coords.set("O", { x: 0, y: 0 });
  if (anchor) coords.set("AP", anchor);
  for (const p of pts) coords.set(p.id, { x: p.x, y: p.y });

  const vectors: ScatterVector[] = [];
  for (const v of geometry.vectors) {
    const a = coords.get(v.from);
    const b = coords.get(v.to);
    if (a && b) vectors.push({ x1: a.x, y1: a.y, x2: b.x, y2: b.y, label: v.label });
  }

  const diagonalMax =
    1.1 *
    Math.max(
      1e-6,
      ...pts.map((p) => Math.max(Math.abs(p.x), Math.abs(p.y))),
    );
  return { frame: geometry.frame, points: pts, anchor, diagonalMax, vectors };
}

export interface PeerRow {
  id: string;
  inputs: number[];
  outputs: number[];
  isPeer: boolean;
  pending: boolean;
}

export function peerRows(
  snapshot: SessionSnapshot,
  peers: string[],
  pending: string[],
): PeerRow[] {
  return snapshot.dataset.dmus
    .filter((d) => d.id !== snapshot.o)
    .map((d) => ({
      id: d.id,
      inputs: d.inputs,
      outputs: d.outputs,
      isPeer: peers.includes(d.id),
      pending: pending.includes(d.id),
    }));
}

export interface IntervalSummary {
  kappa1: number;
  kappa2: number;
  lo: number;
  hi: number;
  openBound: boolean;
  excluded: string[];
}

export function intervalSummary(snapshot: SessionSnapshot): IntervalSummary {
  return {
    kappa1: snapshot.kappa1,
    kappa2: snapshot.kappa2,
    lo: snapshot.interval[0],
    hi: snapshot.interval[1],
    openBound: snapshot.kappa2_open,
    excluded: snapshot.excluded,
  };
}
