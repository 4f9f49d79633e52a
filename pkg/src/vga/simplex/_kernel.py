"""Dense two-phase simplex pivot kernel.

One routine, two backends: the hot tableau loop below is compiled with
numba's @njit by default and falls back to the identical plain-numpy
code path when numba is unavailable or when ``VGA_BACKEND=numpy`` is
set in the environment.  Both backends execute the same statements in
the same order, so bases and solutions agree bit-for-bit.

The kernel works on a standardized problem

    minimize c.x  subject to  A x = b,  x >= 0,  b >= 0,

where columns ``n_real..n_total-1`` are phase-1 artificials.  Pivot
selection is largest-coefficient with a lowest-index tie-break, and it
switches permanently to Bland's rule once a run of degenerate pivots
trips the anti-cycling counter.
"""

import os

import numpy as np

STATUS_OPTIMAL = 0
STATUS_INFEASIBLE = 1
STATUS_UNBOUNDED = 2
STATUS_ITERATION_LIMIT = 3
STATUS_BREAKDOWN = 4


def _two_phase_impl(A, b, c, n_real, basis0, tol_rc, tol_pivot, degen_switch, max_iter):
    m, n_total = A.shape
    rhs = n_total
    T = np.zeros((m + 1, n_total + 1))
    for i in range(m):
        for j in range(n_total):
            T[i, j] = A[i, j]
        T[i, rhs] = b[i]
    basis = basis0.copy()

    n_iters = 0
    breakdown = False

    for phase in range(1, 3):
        if phase == 1:
            has_art = False
            for i in range(m):
                if basis[i] >= n_real:
                    has_art = True
            if not has_art:
                continue
            for j in range(n_total + 1):
                T[m, j] = 1.0 if (n_real <= j < n_total) else 0.0
            for i in range(m):
                if basis[i] >= n_real:
                    T[m, :] -= T[i, :]
        else:
            for j in range(n_total + 1):
                T[m, j] = c[j] if j < n_total else 0.0
            for i in range(m):
                cb = c[basis[i]]
                if cb != 0.0:
                    T[m, :] -= cb * T[i, :]

        bland = False
        degen_streak = 0
        while True:
            if n_iters >= max_iter:
                return STATUS_ITERATION_LIMIT, np.zeros(n_total), basis, n_iters

            # Entering column; artificials never re-enter.
            enter = -1
            if bland:
                for j in range(n_real):
                    if T[m, j] < -tol_rc:
                        enter = j
                        break
            else:
                best = -tol_rc
                for j in range(n_real):
                    if T[m, j] < best:
                        best = T[m, j]
                        enter = j
            if enter < 0:
                break  # phase optimal

            # Ratio test; ties resolved toward the smallest basis label.
            leave = -1
            best_ratio = 0.0
            near_pivot = False
            for i in range(m):
                a = T[i, enter]
                if a > tol_pivot:
                    ratio = T[i, rhs] / a
                    if ratio < 0.0:
                        ratio = 0.0
                    if leave < 0 or ratio < best_ratio - 1e-12 or (
                        ratio < best_ratio + 1e-12 and basis[i] < basis[leave]
                    ):
                        best_ratio = ratio
                        leave = i
                elif a > tol_pivot * 1e-3:
                    near_pivot = True
            if leave < 0:
                if near_pivot:
                    breakdown = True
                    return STATUS_BREAKDOWN, np.zeros(n_total), basis, n_iters
                if phase == 1:
                    # Phase 1 is bounded below by zero; no ratio row means
                    # the tableau has decayed numerically.
                    return STATUS_BREAKDOWN, np.zeros(n_total), basis, n_iters
                return STATUS_UNBOUNDED, np.zeros(n_total), basis, n_iters

            if best_ratio <= 1e-12:
                degen_streak += 1
                if degen_streak > degen_switch:
                    bland = True
            else:
                degen_streak = 0

            piv = T[leave, enter]
            T[leave, :] /= piv
            for r in range(m + 1):
                if r != leave:
                    f = T[r, enter]
                    if f != 0.0:
                        T[r, :] -= f * T[leave, :]
                        T[r, enter] = 0.0
            T[leave, enter] = 1.0
            basis[leave] = enter
            n_iters += 1

        if phase == 1:
            phase1_obj = -T[m, rhs]
            if phase1_obj > 1e-7:
                return STATUS_INFEASIBLE, np.zeros(n_total), basis, n_iters
            # Drive leftover artificials (basic at zero) out of the basis.
            for i in range(m):
                if basis[i] >= n_real:
                    pivot_col = -1
                    for j in range(n_real):
                        if abs(T[i, j]) > tol_pivot:
                            pivot_col = j
                            break
                    if pivot_col >= 0:
                        piv = T[i, pivot_col]
                        T[i, :] /= piv
                        for r in range(m + 1):
                            if r != i:
                                f = T[r, pivot_col]
                                if f != 0.0:
                                    T[r, :] -= f * T[i, :]
                                    T[r, pivot_col] = 0.0
                        T[i, pivot_col] = 1.0
                        basis[i] = pivot_col
                        n_iters += 1
                    # else: redundant row, artificial stays basic at zero.

    x = np.zeros(n_total)
    for i in range(m):
        x[basis[i]] = T[i, rhs]
    if breakdown:
        return STATUS_BREAKDOWN, x, basis, n_iters
    return STATUS_OPTIMAL, x, basis, n_iters


def _pick_backend():
    choice = os.environ.get("VGA_BACKEND", "numba").strip().lower()
    if choice == "numpy":
        return _two_phase_impl, "numpy"
    try:
        from numba import njit
    except ImportError:
        return _two_phase_impl, "numpy"
    return njit(cache=True)(_two_phase_impl), "numba"


two_phase_numpy = _two_phase_impl
two_phase, BACKEND = _pick_backend()
