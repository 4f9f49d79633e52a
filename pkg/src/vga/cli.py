"""Command-line interface: assess, phases, serve.

Exit codes: 0 success, 2 validation/usage error, 3 infeasible or
rejected scalar.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .dataset import DatasetError, exclude_dmus, load_any
from .models import (
    AssessmentError,
    InfeasibleScalarError,
    ProgramKind,
    VgaError,
    assess,
)
from .phases import KappaOutsideIntervalError, finalize, start_session
from .report import assessment_report, dump_json, report_csv, session_snapshot

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_REJECTED = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vga", description="Virtual gap analysis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_assess = sub.add_parser("assess", help="assess one DMU under the plain or scale-constrained program")
    p_assess.add_argument("--data", required=True, help="dataset CSV or JSON path")
    p_assess.add_argument("--dmu", required=True, help="id of the assessed DMU")
    p_assess.add_argument("--program", required=True, choices=["pte", "ste"])
    p_assess.add_argument("--kappa", type=float, default=None, help="intensity-sum scalar (ste only)")
    p_assess.add_argument("--out", default=None, help="write the report here instead of stdout")
    p_assess.add_argument("--format", default="json", choices=["json", "csv"])

    p_phases = sub.add_parser("phases", help="run phases 1-3 (optionally finalize) and emit the session snapshot")
    p_phases.add_argument("--data", required=True)
    p_phases.add_argument("--dmu", required=True)
    p_phases.add_argument("--exclude", default=None, help="comma-separated ids removed before phase 1")
    p_phases.add_argument("--kappa-target", type=float, default=None, help="finalize at this scalar")
    p_phases.add_argument("--out", default=None)

    p_serve = sub.add_parser("serve", help="run the JSON-over-HTTP service")
    p_serve.add_argument("--port", type=int, default=None, help="defaults to $VGA_PORT or 8080")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--data-dir", default=None, help="directory for dataset/session snapshots")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_assess(args) -> int:
    if args.program == "ste" and args.kappa is None:
        print("error: --program ste requires --kappa", file=sys.stderr)
        return EXIT_VALIDATION
    if args.program == "pte" and args.kappa is not None:
        print("error: --program pte takes no --kappa", file=sys.stderr)
        return EXIT_VALIDATION
    dataset = load_any(args.data)
    kind = ProgramKind.pte() if args.program == "pte" else ProgramKind.stea(args.kappa)
    a = assess(dataset, args.dmu, kind)
    report = assessment_report(a)
    _emit(report_csv(report) if args.format == "csv" else dump_json(report), args.out)
    return EXIT_OK


def _cmd_phases(args) -> int:
    dataset = load_any(args.data)
    excluded = frozenset()
    if args.exclude:
        excluded = frozenset(tok.strip() for tok in args.exclude.split(",") if tok.strip())
        dataset = exclude_dmus(dataset, excluded)
    session = start_session(dataset, args.dmu, excluded=excluded)
    if args.kappa_target is not None:
        session = finalize(session, args.kappa_target)
    _emit(dump_json(session_snapshot(session)), args.out)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = args.port if args.port is not None else int(os.environ.get("VGA_PORT", "8080"))
    uvicorn.run(create_app(args.data_dir), host=args.host, port=port)
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "assess":
            return _cmd_assess(args)
        if args.command == "phases":
            return _cmd_phases(args)
        return _cmd_serve(args)
    except (InfeasibleScalarError, KappaOutsideIntervalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except (DatasetError, AssessmentError, VgaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
