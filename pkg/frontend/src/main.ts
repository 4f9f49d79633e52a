import { ApiError, VgaClient } from "./api";
import {
  applyExclusionRound,
  applyFinalize,
  applyTrial,
  clampKappa,
  currentReport,
  isReadOnly,
  openSession,
  peerIds,
  rejectTrial,
  sliderBounds,
  sliderStep,
  setFrame,
  togglePeer,
  type SessionView,
} from "./state";
import {
  benchmarkRows,
  gauges,
  intervalSummary,
  peerRows,
  scatterSpec,
} from "./viewmodel";
import {
  renderBenchmarkTable,
  renderGauges,
  renderPeerPanel,
  renderScatter,
} from "./render";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? ($("api-base") as HTMLInputElement).value;
}

let client = new VgaClient(apiBase());
let datasetId: string | null = null;
let view: SessionView | null = null;

function notice(text: string | null): void {
  const banner = $("notice");
  banner.textContent = text ?? "";
  banner.style.display = text ? "block" : "none";
}

async function refreshGeometry(): Promise<void> {
  if (!view?.snapshot.session_id) return;
  try {
    const geo = await client.geometry(view.snapshot.session_id, view.frame);
    renderScatter($("scatter") as unknown as SVGSVGElement, scatterSpec(geo));
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      notice("session no longer exists on the server (stale view)");
    } else {
      throw err;
    }
  }
}

function redraw(): void {
  if (!view) return;
  const snap = view.snapshot;
  const info = intervalSummary(snap);
  $("session-title").textContent =
    `${snap.o} - session ${snap.session_id ?? "?"}` +
    (info.excluded.length ? ` (excluded: ${info.excluded.join(", ")})` : "") +
    (snap.finalized ? " [final]" : "");
  $("interval-label").textContent =
    `κ interval [${info.lo.toFixed(4)}, ${info.hi.toFixed(4)}]` +
    (info.openBound ? " (open bound, capped)" : "") +
    ` - κ¹=${info.kappa1.toFixed(4)}, κ²=${info.kappa2.toFixed(4)}`;

  const slider = $("kappa-slider") as HTMLInputElement;
  const [lo, hi] = sliderBounds(view);
  slider.min = String(lo);
  slider.max = String(hi);
  slider.step = String(sliderStep(view));
  slider.value = String(view.kappa);
  slider.disabled = isReadOnly(view);
  ($("kappa-entry") as HTMLInputElement).value = view.kappa.toFixed(6);
  ($("kappa-entry") as HTMLInputElement).disabled = isReadOnly(view);
  ($("finalize-button") as HTMLButtonElement).disabled = isReadOnly(view);
  ($("exclude-button") as HTMLButtonElement).disabled =
    isReadOnly(view) || view.pendingExclusions.length === 0;

  const report = currentReport(view);
  renderGauges($("gauges"), gauges(report));
  renderBenchmarkTable($("benchmark") as HTMLElement, benchmarkRows(snap, report));
  renderPeerPanel($("peers") as HTMLElement, peerRows(snap, peerIds(view), view.pendingExclusions),
    isReadOnly(view), (id) => {
      if (!view) return;
      view = togglePeer(view, id);
      notice(view.notice);
      redraw();
    });
  $("history").textContent = view.history.length
    ? `prior rounds: ${view.history.map((s) => s.session_id).join(" ← ")}`
    : "";
  notice(view.notice);
  void refreshGeometry();
}

async function tryKappa(kappa: number): Promise<void> {
  if (!view?.snapshot.session_id || isReadOnly(view)) return;
  const requested = kappa;
  try {
    const resp = await client.whatIf(view.snapshot.session_id, clampKappa(view, kappa));
    view = applyTrial(view, resp);
  } catch (err) {
    if (err instanceof ApiError && err.status === 422) {
      view = rejectTrial(view, requested, err.message);
    } else {
      throw err;
    }
  }
  redraw();
}

async function startSession(dmu: string): Promise<void> {
  if (!datasetId) return;
  const snapshot = await client.createSession(datasetId, dmu);
  view = openSession(snapshot);
  $("explorer").style.display = "block";
  redraw();
}

function wire(): void {
  $("api-base").addEventListener("change", () => {
    client = new VgaClient(apiBase());
  });

  $("upload-button").addEventListener("click", () => {
    void (async () => {
      try {
        const csv = ($("csv-input") as HTMLTextAreaElement).value;
        const up = await client.uploadCsv(csv);
        datasetId = up.datasetId;
        const select = $("dmu-select") as HTMLSelectElement;
        select.innerHTML = "";
        for (const id of up.ids) {
          const opt = document.createElement("option");
          opt.value = id;
          opt.textContent = id;
          select.appendChild(opt);
        }
        $("session-controls").style.display = "block";
        notice(null);
      } catch (err) {
        notice(err instanceof ApiError ? err.message : String(err));
      }
    })();
  });

  $("session-button").addEventListener("click", () => {
    void startSession(($("dmu-select") as HTMLSelectElement).value).catch((err) =>
      notice(err instanceof ApiError ? err.message : String(err)),
    );
  });

  $("kappa-slider").addEventListener("change", (ev) => {
    void tryKappa(Number((ev.target as HTMLInputElement).value));
  });
  $("kappa-entry").addEventListener("change", (ev) => {
    void tryKappa(Number((ev.target as HTMLInputElement).value));
  });

  for (const frame of ["pte", "ste"] as const) {
    $(`frame-${frame}`).addEventListener("click", () => {
      if (!view) return;
      view = setFrame(view, frame);
      void refreshGeometry();
    });
  }

  $("exclude-button").addEventListener("click", () => {
    void (async () => {
      if (!view?.snapshot.session_id || view.pendingExclusions.length === 0) return;
      try {
        const resp = await client.exclude(view.snapshot.session_id, view.pendingExclusions);
        view = applyExclusionRound(view, resp);
        redraw();
      } catch (err) {
        notice(err instanceof ApiError ? err.message : String(err));
      }
    })();
  });

  $("finalize-button").addEventListener("click", () => {
    void (async () => {
      if (!view?.snapshot.session_id) return;
      try {
        const snapshot = await client.finalize(view.snapshot.session_id, view.kappa);
        view = applyFinalize(view, snapshot);
        redraw();
      } catch (err) {
        if (err instanceof ApiError) {
          notice(`finalize rejected (${err.status}): ${err.message}`);
        } else {
          throw err;
        }
      }
    })();
  });
}

wire();
