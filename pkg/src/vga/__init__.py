"""Virtual gap analysis: benchmark selection with price-normalized slacks."""

from .dataset import Dataset, DatasetError, DmuRecord, exclude_dmus, load_csv, load_json, validate
from .models import (
    AssessmentError,
    InfeasibleScalarError,
    ProgramKind,
    StepISolution,
    VgaAssessment,
    VgaError,
    assess,
    boundary_efficiency,
    build_tsp,
    compute_gamma,
    compute_targets,
    normalize_step2,
    solve_step1,
    verify_duality,
)
from .phases import (
    AlreadyFinalizedError,
    KappaOutsideIntervalError,
    Phase4Session,
    WhatIfRejection,
    exclude_and_rerun,
    finalize,
    phase1,
    phase2,
    phase3,
    start_session,
    what_if,
)
from .post import Decomposition, GeometryPoint, brtp, decompose, geometry, interlinkage, rts_classify
from .sbm import SbmComparison, SbmResult, compare_sbm_vga, solve_sbm

__version__ = "0.1.0"
