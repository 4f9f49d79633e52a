"""JSON-over-HTTP service around datasets, assessments, and sessions.

State is an in-memory store (optionally snapshotted to a directory).
Per-session mutations are serialized with a lock; distinct sessions
run concurrently.  Mutating endpoints honor an ``Idempotency-Key``
header: a retried request replays the stored response.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from pydantic import BaseModel

from . import dataset as ds_mod
from .dataset import Dataset, DatasetError
from .models import (
    AssessmentError,
    InfeasibleScalarError,
    ProgramKind,
    VgaError,
    assess,
)
from .phases import (
    AlreadyFinalizedError,
    KappaOutsideIntervalError,
    WhatIfRejection,
    exclude_and_rerun,
    finalize,
    start_session,
    what_if,
)
from .report import (
    SCHEMA_VERSION,
    assessment_report,
    comparison_report,
    dump_json,
    geometry_dict,
    session_snapshot,
)
from .post import geometry
from .sbm import compare_sbm_vga


class UploadDataset(BaseModel):
    csv: str | None = None
    input_names: list[str] | None = None
    output_names: list[str] | None = None
    dmus: list[dict] | None = None


class CreateSession(BaseModel):
    dataset_id: str
    dmu: str


class WhatIfBody(BaseModel):
    kappa: float


class ExcludeBody(BaseModel):
    ids: list[str]


class FinalizeBody(BaseModel):
    kappa: float


class _Store:
    def __init__(self, data_dir: str | None):
        self.datasets: dict[str, Dataset] = {}
        self.sessions: dict[str, object] = {}
        self.session_parent: dict[str, str | None] = {}
        self.session_locks: dict[str, threading.Lock] = {}
        self.idempotency: dict[tuple[str, str], tuple[int, str]] = {}
        self._counter = 0
        self._lock = threading.Lock()
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            (self.data_dir / "datasets").mkdir(parents=True, exist_ok=True)
            (self.data_dir / "sessions").mkdir(parents=True, exist_ok=True)
            for path in sorted((self.data_dir / "datasets").glob("*.json")):
                try:
                    self.datasets[path.stem] = ds_mod.loads_json(path.read_text(encoding="utf-8"))
                except DatasetError:
                    continue

    def new_id(self, prefix: str) -> str:
        with self._lock:
            self._counter += 1
            return f"{prefix}-{self._counter:04d}"

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._lock:
            return self.session_locks.setdefault(session_id, threading.Lock())

    def snapshot_dataset(self, dataset_id: str) -> None:
        if self.data_dir:
            path = self.data_dir / "datasets" / f"{dataset_id}.json"
            path.write_text(json.dumps(ds_mod.to_jsonable(self.datasets[dataset_id]), indent=2),
                            encoding="utf-8")

    def snapshot_session(self, session_id: str) -> None:
        if self.data_dir:
            snap = session_snapshot(self.sessions[session_id], session_id,
                                    self.session_parent.get(session_id))
            path = self.data_dir / "sessions" / f"{session_id}.json"
            path.write_text(dump_json(snap), encoding="utf-8")


class ApiError(Exception):
    def __init__(self, status_code: int, message: str):
        super().__init__(message)
        self.status_code = status_code
        self.message = message


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(content=dump_json(payload), status_code=status_code,
                    media_type="application/json")


def create_app(data_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="vga", version=SCHEMA_VERSION)
    store = _Store(data_dir)
    app.state.store = store

    @app.exception_handler(ApiError)
    def _api_error(_request: Request, exc: ApiError):
        return _json_response({"schema_version": SCHEMA_VERSION, "error": exc.message},
                              exc.status_code)

    @app.exception_handler(RequestValidationError)
    def _validation_error(_request: Request, exc: RequestValidationError):
        return _json_response({"schema_version": SCHEMA_VERSION, "error": str(exc.errors())}, 400)

    def _dataset(dataset_id: str) -> Dataset:
        if dataset_id not in store.datasets:
            raise ApiError(404, f"unknown dataset {dataset_id!r}")
        return store.datasets[dataset_id]

    def _session(session_id: str):
        if session_id not in store.sessions:
            raise ApiError(404, f"unknown session {session_id!r}")
        return store.sessions[session_id]

    def _replay(request: Request, scope: str):
        key = request.headers.get("Idempotency-Key")
        if not key:
            return None, None
        cache_key = (scope, key)
        if cache_key in store.idempotency:
            status, body = store.idempotency[cache_key]
            return cache_key, Response(content=body, status_code=status,
                                       media_type="application/json")
        return cache_key, None

    def _remember(cache_key, response: Response) -> Response:
        if cache_key is not None:
            store.idempotency[cache_key] = (response.status_code, response.body.decode("utf-8"))
        return response

    @app.post("/datasets")
    def upload_dataset(body: UploadDataset, request: Request):
        cache_key, hit = _replay(request, "POST /datasets")
        if hit:
            return hit
        try:
            if body.csv is not None:
                dataset = ds_mod.loads_csv(body.csv)
            elif body.dmus is not None:
                dataset = ds_mod.loads_json(json.dumps({
                    "input_names": body.input_names or [],
                    "output_names": body.output_names or [],
                    "dmus": body.dmus,
                }))
            else:
                raise ApiError(400, "provide either 'csv' or 'input_names/output_names/dmus'")
        except DatasetError as exc:
            raise ApiError(400, str(exc)) from exc
        dataset_id = store.new_id("ds")
        store.datasets[dataset_id] = dataset
        store.snapshot_dataset(dataset_id)
        return _remember(cache_key, _json_response(
            {"schema_version": SCHEMA_VERSION, "dataset_id": dataset_id,
             "n": dataset.n, "m": dataset.m, "s": dataset.s, "ids": list(dataset.ids)}, 201))

    @app.get("/datasets/{dataset_id}")
    def get_dataset(dataset_id: str):
        dataset = _dataset(dataset_id)
        payload = {"schema_version": SCHEMA_VERSION, "dataset_id": dataset_id}
        payload.update(ds_mod.to_jsonable(dataset))
        return _json_response(payload)

    @app.get("/datasets/{dataset_id}/assess/{dmu}")
    def get_assessment(dataset_id: str, dmu: str, program: str = "pte", kappa: float | None = None):
        dataset = _dataset(dataset_id)
        try:
            if program == "pte":
                kind = ProgramKind.pte()
            elif program == "ste":
                if kappa is None:
                    raise ApiError(400, "program 'ste' requires kappa")
                kind = ProgramKind.stea(kappa)
            else:
                raise ApiError(400, f"unknown program {program!r}")
            return _json_response(assessment_report(assess(dataset, dmu, kind)))
        except InfeasibleScalarError as exc:
            raise ApiError(422, str(exc)) from exc
        except (AssessmentError, DatasetError, VgaError, ValueError) as exc:
            raise ApiError(400, str(exc)) from exc

    @app.get("/datasets/{dataset_id}/sbm/{dmu}")
    def get_sbm(dataset_id: str, dmu: str):
        dataset = _dataset(dataset_id)
        try:
            return _json_response(comparison_report(compare_sbm_vga(dataset, dmu)))
        except (AssessmentError, DatasetError, VgaError) as exc:
            raise ApiError(400, str(exc)) from exc

    @app.post("/sessions")
    def create_session(body: CreateSession, request: Request):
        cache_key, hit = _replay(request, "POST /sessions")
        if hit:
            return hit
        dataset = _dataset(body.dataset_id)
        try:
            session = start_session(dataset, body.dmu)
        except (AssessmentError, DatasetError, VgaError) as exc:
            raise ApiError(400, str(exc)) from exc
        session_id = store.new_id("s")
        store.sessions[session_id] = session
        store.session_parent[session_id] = None
        store.snapshot_session(session_id)
        return _remember(cache_key, _json_response(session_snapshot(session, session_id), 201))

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = _session(session_id)
        return _json_response(session_snapshot(session, session_id,
                                               store.session_parent.get(session_id)))

    @app.post("/sessions/{session_id}/what-if")
    def post_what_if(session_id: str, body: WhatIfBody, request: Request):
        cache_key, hit = _replay(request, f"POST /sessions/{session_id}/what-if")
        if hit:
            return hit
        with store.lock_for(session_id):
            session = _session(session_id)
            new_session, outcome = what_if(session, body.kappa)
            if isinstance(outcome, WhatIfRejection):
                raise ApiError(422, outcome.reason)
            store.sessions[session_id] = new_session
            store.snapshot_session(session_id)
            payload = {
                "schema_version": SCHEMA_VERSION,
                "session_id": session_id,
                "kappa": body.kappa,
                "report": assessment_report(outcome),
                "session": session_snapshot(new_session, session_id,
                                            store.session_parent.get(session_id)),
            }
        return _remember(cache_key, _json_response(payload))

    @app.post("/sessions/{session_id}/exclude")
    def post_exclude(session_id: str, body: ExcludeBody, request: Request):
        cache_key, hit = _replay(request, f"POST /sessions/{session_id}/exclude")
        if hit:
            return hit
        with store.lock_for(session_id):
            session = _session(session_id)
            if session.final is not None:
                raise ApiError(409, "session is finalized and read-only")
            try:
                new_session = exclude_and_rerun(session, body.ids)
            except (DatasetError, VgaError) as exc:
                raise ApiError(400, str(exc)) from exc
            if new_session is session:
                payload = {
                    "schema_version": SCHEMA_VERSION,
                    "session_id": session_id,
                    "session": session_snapshot(session, session_id,
                                                store.session_parent.get(session_id)),
                }
                return _remember(cache_key, _json_response(payload))
            new_id = store.new_id("s")
            store.sessions[new_id] = new_session
            store.session_parent[new_id] = session_id
            store.snapshot_session(new_id)
            payload = {
                "schema_version": SCHEMA_VERSION,
                "session_id": new_id,
                "parent": session_id,
                "session": session_snapshot(new_session, new_id, session_id),
            }
        return _remember(cache_key, _json_response(payload, 201))

    @app.post("/sessions/{session_id}/finalize")
    def post_finalize(session_id: str, body: FinalizeBody, request: Request):
        cache_key, hit = _replay(request, f"POST /sessions/{session_id}/finalize")
        if hit:
            return hit
        with store.lock_for(session_id):
            session = _session(session_id)
            try:
                new_session = finalize(session, body.kappa)
            except AlreadyFinalizedError as exc:
                raise ApiError(409, str(exc)) from exc
            except KappaOutsideIntervalError as exc:
                raise ApiError(422, str(exc)) from exc
            store.sessions[session_id] = new_session
            store.snapshot_session(session_id)
            payload = session_snapshot(new_session, session_id,
                                       store.session_parent.get(session_id))
        return _remember(cache_key, _json_response(payload))

    @app.get("/sessions/{session_id}/geometry")
    def get_geometry(session_id: str, frame: str = "ste"):
        session = _session(session_id)
        if frame == "pte":
            a = session.phase1
        elif frame == "ste":
            if session.final is not None:
                a = session.final[1]
            elif session.what_if_log:
                a = session.what_if_log[-1][1]
            else:
                a = session.phase2
        else:
            raise ApiError(400, f"unknown frame {frame!r} (use pte or ste)")
        payload = {"schema_version": SCHEMA_VERSION, "session_id": session_id}
        payload.update(geometry_dict(geometry(session.dataset, a)))
        return _json_response(payload)

    return app
