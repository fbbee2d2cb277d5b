"""Smoothing Newton solver for wHLCP(A, B, w, q).

At smoothing level ``mu > 0`` Newton's method is applied to

    F_mu(x, y) = ( x + y - sqrt(x^2 + y^2 + 2w + 2 mu^2 e),  Ax + By - q )

with Armijo backtracking on ``0.5 * ||F_mu||^2``. The square-root argument is
in the interior of the cone whenever ``mu > 0``, so ``sqrt`` is differentiable
there with derivative ``(2 L_s)^-1``. ``mu`` shrinks by ``sigma`` as soon as
``||F_mu|| <= mu``; the run stops when the unsmoothed residuals of the
original system meet ``tol``.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .algebra import Algebra, Element, min_eigenvalue, sqrt_clamped
from .errors import InvalidInputError, NumericFailure
from .maps import ResidualTriple, residual_triple, residuals
from .operators import PairProblem

CONVERGED = "converged"
MAX_ITERATIONS = "max_iterations"
NUMERIC_FAILURE = "numeric_failure"
DIVERGED = "diverged"
STATUS_RANK = {CONVERGED: 0, MAX_ITERATIONS: 1, NUMERIC_FAILURE: 2, DIVERGED: 3}

DIVERGENCE_MERIT = 1e12
PIVOT_TOL = 1e-12
MAX_BACKTRACKS = 60
START_SPREAD = 0.5

THREADS_ENV = "JORDAN_WLCP_THREADS"


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-8
    mu0: float = 1.0
    sigma: float = 0.2
    max_outer: int = 40
    max_inner: int = 50
    armijo_beta: float = 0.5
    armijo_gamma: float = 1e-4
    starts: int = 1
    seed: int = 0

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidInputError("tol must be positive")
        if not 0 < self.sigma < 1:
            raise InvalidInputError("sigma must lie in (0, 1)")
        if not self.mu0 > 0:
            raise InvalidInputError("mu0 must be positive")
        if not 0 < self.armijo_beta < 1 or not 0 < self.armijo_gamma < 0.5:
            raise InvalidInputError("need 0 < armijo_beta < 1 and 0 < armijo_gamma < 0.5")
        if self.max_outer < 1 or self.max_inner < 1 or self.starts < 1:
            raise InvalidInputError("max_outer, max_inner and starts must be >= 1")
        if self.seed < 0:
            raise InvalidInputError("seed must be non-negative")


@dataclass(frozen=True)
class SolveReport:
    status: str
    x: Element
    y: Element
    residuals: ResidualTriple
    iterations: int
    trace: tuple = ()
    start: int = 0

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def sort_key(self):
        return (STATUS_RANK[self.status], self.residuals.max(), self.start)


@dataclass(frozen=True)
class PathTrace:
    """Reports along ``t_k * w``, plus the warm-started ``w = 0`` limit solve."""

    schedule: tuple
    reports: tuple
    final_unweighted: ResidualTriple
    limit: SolveReport

    def __iter__(self):
        return iter(self.reports)

    def __len__(self):
        return len(self.reports)

    def __getitem__(self, k):
        return self.reports[k]


class _System:
    """Raw-coordinate view of a problem used inside the Newton loop."""

    def __init__(self, problem: PairProblem):
        self.alg: Algebra = problem.algebra
        self.A = problem.A.matrix
        self.B = problem.B.matrix
        self.w = problem.w.coords
        self.q = problem.q.coords
        self.e = self.alg.unit
        self.dim = self.alg.dim

    def smoothing_arg(self, x, y, mu):
        alg = self.alg
        return alg.mul(x, x) + alg.mul(y, y) + 2.0 * self.w + (2.0 * mu * mu) * self.e

    def F(self, x, y, mu):
        s = self.alg.apply(self.smoothing_arg(x, y, mu), sqrt_clamped)
        return np.concatenate([x + y - s, self.A @ x + self.B @ y - self.q])

    def jacobian(self, x, y, mu):
        alg = self.alg
        s = alg.apply(self.smoothing_arg(x, y, mu), sqrt_clamped)
        ls = alg.lmat(s)
        try:
            z = np.linalg.solve(ls, np.hstack([alg.lmat(x), alg.lmat(y)]))
        except np.linalg.LinAlgError as exc:
            raise NumericFailure(f"L_s singular at mu={mu:.3e}") from exc
        if not np.all(np.isfinite(z)):
            raise NumericFailure(f"L_s singular at mu={mu:.3e}")
        ident = np.eye(self.dim)
        top = np.hstack([ident - z[:, : self.dim], ident - z[:, self.dim :]])
        return np.vstack([top, np.hstack([self.A, self.B])])

    def residuals(self, x, y) -> ResidualTriple:
        return residual_triple(self.alg, self.A, self.B, self.w, self.q, x, y)


def assemble_jacobian(x: Element, y: Element, problem: PairProblem, mu: float) -> np.ndarray:
    """Jacobian of ``F_mu`` at (x, y), shape ``(2 dim, 2 dim)``.

    Block form ``[[I - L_s^-1 L_x, I - L_s^-1 L_y], [A, B]]`` with
    ``s = sqrt(x^2 + y^2 + 2w + 2 mu^2 e)``.
    """
    if not mu > 0:
        raise InvalidInputError("mu must be positive")
    return _System(problem).jacobian(x.coords, y.coords, mu)


def smoothed_map(x: Element, y: Element, problem: PairProblem, mu: float) -> np.ndarray:
    """Value of ``F_mu`` at (x, y) as a ``2 dim`` vector."""
    return _System(problem).F(x.coords, y.coords, mu)


def _lu(j):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(j, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < PIVOT_TOL * np.linalg.norm(j):
        raise NumericFailure("Newton matrix is numerically singular")
    return lu, piv


def _run(problem: PairProblem, config: SolverConfig, x0, y0, start: int) -> SolveReport:
    sysm = _System(problem)
    alg = sysm.alg
    dim = sysm.dim
    x = np.array(x0, dtype=float)
    y = np.array(y0, dtype=float)
    trace = []
    steps = 0
    best = [None, x, y]

    def report(status):
        res, bx, by = best
        if status == CONVERGED:
            bx, by = x, y
            res = sysm.residuals(x, y)
        return SolveReport(
            status, Element(alg, bx), Element(alg, by), res, steps, tuple(trace), start
        )

    def record(xc, yc):
        res = sysm.residuals(xc, yc)
        if best[0] is None or res.max() < best[0].max():
            best[:] = [res, xc, yc]
        return res

    if record(x, y).within(config.tol):
        return report(CONVERGED)

    mu = config.mu0
    for _ in range(config.max_outer):
        F = sysm.F(x, y, mu)
        merit = 0.5 * float(F @ F)
        for _ in range(config.max_inner):
            if math.sqrt(2.0 * merit) <= mu:
                break
            try:
                lu, piv = _lu(sysm.jacobian(x, y, mu))
            except NumericFailure:
                return report(NUMERIC_FAILURE)
            d = scipy.linalg.lu_solve((lu, piv), -F, check_finite=False)
            t = 1.0
            accepted = False
            for _ in range(MAX_BACKTRACKS):
                xn = x + t * d[:dim]
                yn = y + t * d[dim:]
                Fn = sysm.F(xn, yn, mu)
                mn = 0.5 * float(Fn @ Fn)
                if mn <= (1.0 - 2.0 * config.armijo_gamma * t) * merit:
                    accepted = True
                    break
                t *= config.armijo_beta
            if not accepted:
                break
            x, y, F, merit = xn, yn, Fn, mn
            steps += 1
            trace.append((mu, merit))
            if not math.isfinite(merit) or merit > DIVERGENCE_MERIT:
                return report(DIVERGED)
            if record(x, y).within(config.tol):
                return report(CONVERGED)
        mu *= config.sigma
    return report(MAX_ITERATIONS)


def starting_points(problem: PairProblem, config: SolverConfig):
    """Start 0 is (e, e); start k > 0 is a seeded log-normal perturbation of e."""
    alg = problem.algebra
    points = [(alg.unit.copy(), alg.unit.copy())]
    for k in range(1, config.starts):
        rng = np.random.default_rng([config.seed, k])
        gx = START_SPREAD * rng.normal(size=alg.dim)
        gy = START_SPREAD * rng.normal(size=alg.dim)
        points.append((alg.apply(gx, np.exp), alg.apply(gy, np.exp)))
    return points


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def solve_all_starts(problem: PairProblem, config: SolverConfig = SolverConfig()) -> list:
    """One report per starting point, in start order."""
    points = starting_points(problem, config)
    jobs = [(problem, config, x0, y0, k) for k, (x0, y0) in enumerate(points)]
    threads = min(_threads(), len(jobs))
    if threads <= 1:
        return [_run(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: _run(*job), jobs))


def solve(
    problem: PairProblem,
    config: SolverConfig = SolverConfig(),
    x0: Optional[Element] = None,
    y0: Optional[Element] = None,
) -> SolveReport:
    """Solve wHLCP(A, B, w, q).

    With an explicit ``(x0, y0)`` a single warm-started run is made. Otherwise
    ``config.starts`` runs are made and the best one is returned, ranked by
    (status, residual, start index).
    """
    if (x0 is None) != (y0 is None):
        raise InvalidInputError("give both x0 and y0 or neither")
    if x0 is not None:
        return _run(problem, config, x0.coords, y0.coords, 0)
    return min(solve_all_starts(problem, config), key=SolveReport.sort_key)


def geometric_schedule(steps: int, ratio: float = 0.5) -> tuple:
    """``(1, r, r^2, ..., r^steps)``."""
    if steps < 0 or not 0 < ratio < 1:
        raise InvalidInputError("need steps >= 0 and 0 < ratio < 1")
    return tuple(ratio**k for k in range(steps + 1))


def path_trace(problem: PairProblem, config: SolverConfig, schedule: Sequence[float]) -> PathTrace:
    """Solve wHLCP(A, B, t_k w, q) along a decreasing schedule, warm-starting each level.

    The last scheduled iterate is scored against the ``w = 0`` problem
    (``final_unweighted``) and then used to warm-start a ``w = 0`` solve
    (``limit``), which estimates the accumulation point of the path.
    """
    if min_eigenvalue(problem.w) <= 0:
        raise InvalidInputError("path tracing needs w in the interior of the cone")
    ts = tuple(float(t) for t in schedule)
    if not ts or any(not 0 < t <= 1 for t in ts) or any(b >= a for a, b in zip(ts, ts[1:])):
        raise InvalidInputError("schedule must be strictly decreasing within (0, 1]")
    reports = []
    warm = None
    for t in ts:
        rep = _warm_then_cold(problem.with_weight(t * problem.w), config, warm)
        reports.append(rep)
        if rep.converged:
            warm = (rep.x, rep.y)
    last = reports[-1]
    unweighted = problem.with_weight(problem.algebra.zero())
    final_res = residuals(last.x, last.y, unweighted)
    limit = _warm_then_cold(unweighted, config, (last.x, last.y))
    return PathTrace(ts, tuple(reports), final_res, limit)


def _warm_then_cold(problem: PairProblem, config: SolverConfig, warm) -> SolveReport:
    """Warm-started solve, falling back to the configured cold starts on failure.

    A warm start can sit on a set where the Newton matrix is singular for
    every mu (e.g. x = y when A = B), so it is not always usable.
    """
    if warm is not None:
        rep = solve(problem, config, *warm)
        if rep.converged:
            return rep
        return min(rep, solve(problem, config), key=SolveReport.sort_key)
    return solve(problem, config)
