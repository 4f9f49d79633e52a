"""Independent LP oracle: exhaustive basic-feasible-solution enumeration.

Standardizes on its own (slack columns per inequality, free variables
split) and tries every basis of the equality form.  Deliberately
shares no code with the solver under test.
"""

import itertools

import numpy as np


def oracle_optimum(sense, c, A, relations, b, free=None):
    """Best objective over all basic feasible solutions; None if infeasible.

    Valid for bounded feasible programs (the generator below only makes
    those): every optimum of a bounded LP is attained at some basis.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    free = list(free) if free else [False] * n

    cols = [A]
    costs = [c * (1.0 if sense == "min" else -1.0)]
    for j in range(n):
        if free[j]:
            cols.append(-A[:, j : j + 1])
            costs.append(np.array([-costs[0][j]]))
    for i, rel in enumerate(relations):
        if rel in ("<=", ">="):
            col = np.zeros((m, 1))
            col[i, 0] = 1.0 if rel == "<=" else -1.0
            cols.append(col)
            costs.append(np.zeros(1))
    A_std = np.hstack(cols)
    c_std = np.concatenate(costs)

    best = None
    ncol = A_std.shape[1]
    for combo in itertools.combinations(range(ncol), m):
        B = A_std[:, combo]
        try:
            xb = np.linalg.solve(B, b)
        except np.linalg.LinAlgError:
            continue
        if np.min(xb) < -1e-9:
            continue
        val = float(c_std[list(combo)] @ xb)
        if best is None or val < best:
            best = val
    if best is None:
        return None
    return best if sense == "min" else -best


def random_bounded_lp(rng):
    """Feasible bounded LP with mixed relations and nonnegative variables."""
    n = int(rng.integers(3, 8))
    m = int(rng.integers(2, 5))
    A = rng.uniform(-1.0, 2.0, size=(m, n))
    x0 = rng.uniform(0.0, 2.0, size=n)
    relations = []
    b = np.zeros(m)
    for i in range(m):
        rel = rng.choice(["<=", "<=", "<=", "=", ">="])
        relations.append(rel)
        ax = float(A[i] @ x0)
        if rel == "<=":
            b[i] = ax + rng.uniform(0.1, 2.0)
        elif rel == "=":
            b[i] = ax
        else:
            b[i] = ax - rng.uniform(0.1, 2.0)
    # cap the simplex so every objective is bounded
    A = np.vstack([A, np.ones(n)])
    relations.append("<=")
    b = np.append(b, float(np.sum(x0)) + 5.0)
    c = rng.uniform(-1.0, 1.0, size=n)
    sense = "max" if rng.random() < 0.7 else "min"
    return sense, c, A, tuple(relations), b
