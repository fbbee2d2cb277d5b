"""Dense tableau simplex with Bland's rule.

Only what the R0 test needs: maximise ``c @ z`` subject to ``G z <= h``,
``z >= 0`` with ``h >= 0`` (so the slack basis is feasible and no phase one is
required).
"""

import numpy as np

from .errors import NumericFailure

PIVOT_TOL = 1e-12


def simplex_max(c, G, h, tol=PIVOT_TOL, max_iter=10_000):
    """Return ``(optimum, z)``; raises NumericFailure if unbounded or stuck."""
    c = np.asarray(c, dtype=float)
    G = np.asarray(G, dtype=float)
    h = np.asarray(h, dtype=float)
    m, n = G.shape
    if np.any(h < 0):
        raise ValueError("right-hand side must be non-negative")
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = G
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = h
    T[m, :n] = -c
    basis = list(range(n, n + m))

    for _ in range(max_iter):
        entering = np.flatnonzero(T[m, :-1] < -tol)
        if entering.size == 0:
            z = np.zeros(n + m)
            z[basis] = T[:m, -1]
            return float(T[m, -1]), np.maximum(z[:n], 0.0)
        j = int(entering[0])
        col = T[:m, j]
        rows = np.flatnonzero(col > tol)
        if rows.size == 0:
            raise NumericFailure("linear program is unbounded")
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + tol * (1.0 + abs(best))]
        r = int(min(tied, key=lambda i: basis[i]))
        T[r] /= T[r, j]
        for i in range(m + 1):
            if i != r and T[i, j] != 0.0:
                T[i] -= T[i, j] * T[r]
        basis[r] = j
    raise NumericFailure("simplex did not terminate", iterations=max_iter)
