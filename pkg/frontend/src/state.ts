import type {
  AssessmentReport,
  ExcludeResponse,
  SessionSnapshot,
  WhatIfResponse,
} from "./api";

/** Immutable view state for one explorer screen. */
export interface SessionView {
  snapshot: SessionSnapshot;
  frame: "pte" | "ste";
  /** Current slider position (a scalar inside the feasible interval). */
  kappa: number;
  /** Peers ticked for exclusion but not submitted yet. */
  pendingExclusions: string[];
  lastTrial: { kappa: number; report: AssessmentReport } | null;
  /** Prior rounds (newest first); they stay viewable after an exclusion. */
  history: SessionSnapshot[];
  notice: string | null;
}

export function openSession(snapshot: SessionSnapshot): SessionView {
  const logTail = snapshot.what_if_log.at(-1) ?? null;
  const finalTrial = snapshot.final ? { kappa: snapshot.final.kappa, report: snapshot.final.report } : null;
  const lastTrial = finalTrial ?? logTail;
  return {
    snapshot,
    frame: "ste",
    kappa: lastTrial?.kappa ?? snapshot.kappa1,
    pendingExclusions: [],
    lastTrial,
    history: [],
    notice: null,
  };
}

export function sliderBounds(view: SessionView): [number, number] {
  return [view.snapshot.interval[0], view.snapshot.interval[1]];
}

/** Default granularity: one hundredth of the interval (exact values go
 * through the numeric entry instead). */
export function sliderStep(view: SessionView): number {
  const [lo, hi] = sliderBounds(view);
  return (hi - lo) / 100 || 1e-6;
}

export function clampKappa(view: SessionView, kappa: number): number {
  const [lo, hi] = sliderBounds(view);
  return Math.min(Math.max(kappa, lo), hi);
}

export function isReadOnly(view: SessionView): boolean {
  return view.snapshot.finalized;
}

/** The report currently on display: final choice, else last trial, else
 * the phase-2 assessment. */
export function currentReport(view: SessionView): AssessmentReport {
  if (view.snapshot.final) return view.snapshot.final.report;
  if (view.lastTrial) return view.lastTrial.report;
  return view.snapshot.phase_reports.ste1;
}

export function applyTrial(view: SessionView, resp: WhatIfResponse): SessionView {
  return {
    ...view,
    snapshot: resp.session,
    kappa: resp.kappa,
    lastTrial: { kappa: resp.kappa, report: resp.report },
    notice: null,
  };
}

/** Server turned the scalar down (422): bounce the slider back. */
export function rejectTrial(view: SessionView, requested: number, message: string): SessionView {
  return {
    ...view,
    notice: `scalar ${requested} rejected: ${message}`,
  };
}

export function togglePeer(view: SessionView, id: string): SessionView {
  if (isReadOnly(view)) return view;
  const peers = peerIds(view);
  if (!peers.includes(id)) return view;
  const pending = view.pendingExclusions.includes(id)
    ? view.pendingExclusions.filter((p) => p !== id)
    : [...view.pendingExclusions, id];
  if (pending.length >= peers.length) {
    return { ...view, notice: "cannot exclude every peer" };
  }
  return { ...view, pendingExclusions: pending, notice: null };
}

export function peerIds(view: SessionView): string[] {
  const { pte, ste1 } = view.snapshot.phase_reports;
  return Array.from(new Set([...pte.step2.peers, ...ste1.step2.peers]));
}

/** A submitted exclusion round returns a freshly solved session; the old
 * one is kept viewable in the history. */
export function applyExclusionRound(view: SessionView, resp: ExcludeResponse): SessionView {
  return {
    ...openSession(resp.session),
    frame: view.frame,
    history: [view.snapshot, ...view.history],
  };
}

export function applyFinalize(view: SessionView, snapshot: SessionSnapshot): SessionView {
  return {
    ...view,
    snapshot,
    lastTrial: snapshot.final
      ? { kappa: snapshot.final.kappa, report: snapshot.final.report }
      : view.lastTrial,
    kappa: snapshot.final?.kappa ?? view.kappa,
    pendingExclusions: [],
    notice: snapshot.finalized ? "session finalized (read-only)" : view.notice,
  };
}

export function setFrame(view: SessionView, frame: "pte" | "ste"): SessionView {
  return { ...view, frame };
}
