"""Randomised invariant suites and the generators they use.

Each suite returns a list of :class:`CheckResult`; the ``check`` CLI command
runs them against an instance, and the test-suite reuses the generators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    Algebra,
    Element,
    inner_product,
    jordan_product,
    lyapunov_operator,
    min_eigenvalue,
    norm,
    operator_commute,
    spectral_decompose,
    spectral_map,
)
from .errors import JordanWLCPError
from .maps import fb_map, min_map, residuals, weighted_fb_map
from .operators import LinearOperator, PairProblem
from .pairs import (
    MAX_DEGREE_N,
    brute_force_hlcp,
    hlcp_degree,
    is_p_pair,
    is_r0_pair,
)
from .solver import SolverConfig, assemble_jacobian, smoothed_map, solve, solve_all_starts

HOMOTOPY_GRID = tuple(k / 10 for k in range(11))
FD_STEP = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float = 0.0
    tol: float = 0.0
    skipped: bool = False
    note: str = ""

    def line(self) -> str:
        tag = "SKIP" if self.skipped else "PASS" if self.passed else "FAIL"
        text = f"{tag} {self.name}"
        if not self.skipped and self.tol:
            text += f": {self.value:.3e} (tol {self.tol:.1e})"
        if self.note:
            text += f" [{self.note}]"
        return text


def _bound(name, worst, tol, note="") -> CheckResult:
    return CheckResult(name, bool(worst <= tol), float(worst), tol, note=note)


def _floor(name, least, tol, note="") -> CheckResult:
    # "at least tol": report the smallest value seen
    return CheckResult(name, bool(least >= tol), float(least), tol, note=note)


# ----------------------------------------------------------------------------
# Generators
# ----------------------------------------------------------------------------


def random_element(alg: Algebra, rng: np.random.Generator, scale: float = 1.0) -> Element:
    return Element(alg, scale * rng.normal(size=alg.dim))


def random_frame(alg: Algebra, rng: np.random.Generator) -> tuple:
    """A Jordan frame taken from the spectral decomposition of a random element."""
    return spectral_decompose(random_element(alg, rng)).frame


def shared_frame_pair(alg: Algebra, rng: np.random.Generator, complementary: bool = True):
    """``x = sum a_i f_i``, ``y = sum b_i f_i`` on one random frame, ``a, b >= 0``.

    With ``complementary`` the supports are disjoint (a random split of the
    frame). Otherwise one side of each index is zeroed with probability 1/4
    each; never both, since ``sqrt`` near a zero eigenvalue only resolves
    rounding noise to about its square root.
    """
    frame = np.array([f.coords for f in random_frame(alg, rng)])
    r = alg.rank
    a = rng.exponential(size=r)
    b = rng.exponential(size=r)
    if complementary:
        in_x = rng.random(r) < 0.5
        a = np.where(in_x, a, 0.0)
        b = np.where(in_x, 0.0, b)
    else:
        side = rng.random(r)
        a = np.where(side < 0.25, 0.0, a)
        b = np.where(side > 0.75, 0.0, b)
    return Element(alg, a @ frame), Element(alg, b @ frame)


def random_operator(alg: Algebra, rng: np.random.Generator) -> LinearOperator:
    return LinearOperator(alg, rng.normal(size=(alg.dim, alg.dim)))


def random_problem(alg: Algebra, rng: np.random.Generator) -> PairProblem:
    """Gaussian ``A, B, q`` with ``w`` in the interior of the cone."""
    g = random_element(alg, rng)
    w = Element(alg, alg.mul(g.coords, g.coords)) + 0.1 * alg.e
    return PairProblem(random_operator(alg, rng), random_operator(alg, rng), w, random_element(alg, rng))


# ----------------------------------------------------------------------------
# Suites
# ----------------------------------------------------------------------------


def algebra_suite(alg: Algebra, rng: np.random.Generator, trials: int = 50) -> list:
    """Spectral, cone and multiplication-operator identities on random elements."""
    e = alg.e
    worst = dict.fromkeys(
        ["reconstruct", "frame", "plus_minus", "sqrt_abs", "trace_form", "lmat_sym"], 0.0
    )
    for _ in range(trials):
        x = random_element(alg, rng)
        y = random_element(alg, rng)
        dec = spectral_decompose(x)
        worst["reconstruct"] = max(
            worst["reconstruct"], norm(x - dec.reconstruct()) / (1.0 + norm(x))
        )
        total = alg.zero()
        for i, f in enumerate(dec.frame):
            total = total + f
            err = norm(jordan_product(f, f) - f)
            for g in dec.frame[i + 1 :]:
                err = max(err, norm(jordan_product(f, g)), abs(inner_product(f, g)))
            worst["frame"] = max(worst["frame"], err)
        worst["frame"] = max(worst["frame"], norm(total - e))
        xp, xm = spectral_map(x, "plus"), spectral_map(x, "minus")
        worst["plus_minus"] = max(
            worst["plus_minus"],
            abs(inner_product(xp, xm)),
            norm(jordan_product(xp, xm)),
            norm(xp - xm - x),
        )
        xx = jordan_product(x, x)
        ax = spectral_map(x, "abs")
        worst["sqrt_abs"] = max(
            worst["sqrt_abs"],
            norm(spectral_map(xx, "sqrt") - ax),
            norm(jordan_product(ax, ax) - xx),
        )
        worst["trace_form"] = max(
            worst["trace_form"],
            abs(inner_product(x, y) - float(np.sum(alg.eigvals(alg.mul(x.coords, y.coords))))),
        )
        lx = lyapunov_operator(x)
        worst["lmat_sym"] = max(worst["lmat_sym"], float(np.linalg.norm(lx - lx.T)))
    unit_err = float(np.linalg.norm(lyapunov_operator(e) - np.eye(alg.dim)))
    name = str(alg.descriptor)
    return [
        _bound(f"algebra[{name}] reconstruction", worst["reconstruct"], 1e-10),
        _bound(f"algebra[{name}] frame idempotent/orthogonal/sums to e", worst["frame"], 1e-10),
        _bound(f"algebra[{name}] x+ and x- orthogonal", worst["plus_minus"], 1e-10),
        _bound(f"algebra[{name}] sqrt(x^2) = |x|", worst["sqrt_abs"], 1e-10),
        _bound(f"algebra[{name}] inner product is the trace form", worst["trace_form"], 1e-9),
        _bound(f"algebra[{name}] L_x symmetric", worst["lmat_sym"], 1e-12),
        _bound(f"algebra[{name}] L_e = I", unit_err, 1e-12),
    ]


def min_map_suite(alg: Algebra, rng: np.random.Generator, trials: int = 50, tol: float = 1e-10) -> list:
    """Translation/scaling identities of the min map, frame-built complementarity,
    the weighted FB forward residual and interiority of factors of interior products."""
    worst = dict.fromkeys(["translate", "scale", "complementary", "weighted", "interior"], 0.0)
    least_gap = np.inf
    for _ in range(trials):
        u, x, y = (random_element(alg, rng) for _ in range(3))
        m = min_map(x, y)
        worst["translate"] = max(worst["translate"], norm(u + m - min_map(u + x, u + y)))
        lam = float(rng.exponential())
        worst["scale"] = max(worst["scale"], norm(lam * m - min_map(lam * x, lam * y)))
        least_gap = min(least_gap, norm(m))

        cx, cy = shared_frame_pair(alg, rng, complementary=True)
        err = max(norm(min_map(cx, cy)), norm(fb_map(cx, cy)), abs(inner_product(cx, cy)))
        if not operator_commute(cx, cy):
            err = np.inf
        worst["complementary"] = max(worst["complementary"], err)

        px, py = shared_frame_pair(alg, rng, complementary=False)
        w = jordan_product(px, py)
        worst["weighted"] = max(worst["weighted"], norm(weighted_fb_map(px, py, w)))

        # strictly positive coefficients on a shared frame: x o y is interior
        frame = np.array([f.coords for f in random_frame(alg, rng)])
        ix = Element(alg, (rng.exponential(size=alg.rank) + 0.05) @ frame)
        iy = Element(alg, (rng.exponential(size=alg.rank) + 0.05) @ frame)
        if min_eigenvalue(jordan_product(ix, iy)) > 0 and min(min_eigenvalue(ix), min_eigenvalue(iy)) <= 0:
            worst["interior"] = np.inf
    name = str(alg.descriptor)
    return [
        _bound(f"maps[{name}] u + x min y = (u+x) min (u+y)", worst["translate"], tol),
        _bound(f"maps[{name}] l (x min y) = lx min ly", worst["scale"], tol),
        _bound(f"maps[{name}] complementary pairs: min, FB, inner product vanish; commute", worst["complementary"], tol),
        _bound(f"maps[{name}] weighted FB vanishes at w = x o y", worst["weighted"], tol),
        _bound(f"maps[{name}] x o y interior implies x, y interior", worst["interior"], 0.0),
        _floor(f"maps[{name}] min map nonzero off complementarity", least_gap, 1e-6),
    ]


def homotopy_values(x: Element, y: Element) -> list:
    """``||t FB(x, y) + (1 - t) (x min y)||`` over the t-grid 0, 0.1, ..., 1."""
    fb = fb_map(x, y)
    m = min_map(x, y)
    return [norm(t * fb + (1.0 - t) * m) for t in HOMOTOPY_GRID]


def homotopy_suite(alg: Algebra, rng: np.random.Generator, trials: int = 50, tol: float = 1e-9) -> list:
    worst, least = 0.0, np.inf
    for _ in range(trials):
        x, y = shared_frame_pair(alg, rng, complementary=True)
        worst = max(worst, max(homotopy_values(x, y)))
        least = min(least, min(homotopy_values(random_element(alg, rng), random_element(alg, rng))))
    name = str(alg.descriptor)
    return [
        _bound(f"homotopy[{name}] FB/min combination vanishes on complementary pairs", worst, tol),
        _floor(f"homotopy[{name}] combination nonzero on random pairs", least, 1e-6),
    ]


def fd_jacobian(problem: PairProblem, x: Element, y: Element, mu: float, h: float = FD_STEP):
    """Central finite differences of the smoothed map."""
    alg = problem.algebra
    dim = alg.dim
    z = np.concatenate([x.coords, y.coords])
    cols = []
    for k in range(2 * dim):
        dz = np.zeros(2 * dim)
        dz[k] = h
        zp, zm = z + dz, z - dz
        fp = smoothed_map(Element(alg, zp[:dim]), Element(alg, zp[dim:]), problem, mu)
        fm = smoothed_map(Element(alg, zm[:dim]), Element(alg, zm[dim:]), problem, mu)
        cols.append((fp - fm) / (2.0 * h))
    return np.array(cols).T


def jacobian_deviation(problem: PairProblem, rng: np.random.Generator) -> float:
    """Max abs gap between the analytic and finite-difference Jacobian at a random point."""
    alg = problem.algebra
    x, y = random_element(alg, rng), random_element(alg, rng)
    mu = float(rng.uniform(0.5, 1.5))
    return float(np.max(np.abs(assemble_jacobian(x, y, problem, mu) - fd_jacobian(problem, x, y, mu))))


def jacobian_suite(problem: PairProblem, rng: np.random.Generator, trials: int = 20) -> list:
    worst = max(jacobian_deviation(problem, rng) for _ in range(trials))
    return [_bound("solver Jacobian matches central differences", worst, 1e-5)]


def _verify_solution(problem: PairProblem, x: Element, y: Element) -> float:
    # recomputed through the element-level API, not the solver's raw kernels
    comp = norm(jordan_product(x, y) - problem.w)
    lin = norm(problem.A(x) + problem.B(y) - problem.q)
    cone = max(0.0, -float(spectral_decompose(x).eigenvalues[-1]), -float(spectral_decompose(y).eigenvalues[-1]))
    return max(comp, lin, cone)


def solution_suite(problem: PairProblem, config: SolverConfig) -> list:
    """Solve the instance and verify any claimed solution independently.

    Non-convergence is only a failure when existence is guaranteed (nonzero
    degree on R^n); otherwise the check is skipped.
    """
    out = []
    report = solve(problem, config)
    guaranteed = False
    desc = problem.algebra.descriptor
    if desc.kind == "rn" and desc.n <= MAX_DEGREE_N:
        try:
            r0 = is_r0_pair(problem.A, problem.B)
            guaranteed = bool(r0) and hlcp_degree(problem.A, problem.B).degree != 0
        except JordanWLCPError:
            guaranteed = False
    if report.converged:
        gap = _verify_solution(problem, report.x, report.y)
        out.append(_bound("solve: returned pair verified independently", gap, 10 * config.tol))
        recomputed = residuals(report.x, report.y, problem)
        diff = max(
            abs(recomputed.comp_residual - report.residuals.comp_residual),
            abs(recomputed.lin_residual - report.residuals.lin_residual),
            abs(recomputed.cone_violation - report.residuals.cone_violation),
        )
        out.append(_bound("solve: reported residuals match recomputation", diff, 1e-12))
        if min_eigenvalue(problem.w) > 0:
            lam = min(min_eigenvalue(report.x), min_eigenvalue(report.y))
            out.append(_floor("solve: interior weight gives interior solution", lam, 1e-10))
    elif guaranteed:
        out.append(CheckResult("solve: converges when the degree is nonzero", False, note=report.status))
    else:
        out.append(CheckResult("solve", True, skipped=True, note=f"{report.status}; existence not guaranteed"))
    return out


def pair_suite(problem: PairProblem, config: SolverConfig, starts: int = 5) -> list:
    """R0 witness soundness, and for P-pairs uniqueness and degree +-1 (R^n only)."""
    desc = problem.algebra.descriptor
    if desc.kind != "rn":
        return [CheckResult("pair analysis", True, skipped=True, note="only on R^n")]
    if desc.n > MAX_DEGREE_N:
        return [CheckResult("pair analysis", True, skipped=True, note="n too large to enumerate")]
    a, b = problem.A.matrix, problem.B.matrix
    out = []
    r0 = is_r0_pair(a, b)
    if not r0:
        wx, wy = r0.witness
        gap = max(float(np.linalg.norm(np.minimum(wx, wy))), float(np.linalg.norm(a @ wx + b @ wy)))
        nonzero = float(max(np.max(wx), np.max(wy)))
        out.append(_bound("pairs: R0 witness solves the homogeneous problem", gap, 1e-9))
        out.append(_floor("pairs: R0 witness is nonzero", nonzero, 1e-9))
        return out
    if not is_p_pair(a, b):
        out.append(CheckResult("pairs: P-pair properties", True, skipped=True, note="not a P-pair"))
        return out
    deg = hlcp_degree(a, b).degree
    out.append(CheckResult("pairs: P-pair has degree +-1", abs(deg) == 1, note=f"degree {deg}"))
    count = len(brute_force_hlcp(a, b, problem.q.coords))
    out.append(CheckResult("pairs: P-pair has a unique unweighted solution", count == 1, note=f"{count} found"))
    multi = SolverConfig(**{**config.__dict__, "starts": starts})
    reports = solve_all_starts(problem, multi)
    good = [r for r in reports if r.converged]
    if not good:
        out.append(CheckResult("pairs: multi-start solutions agree", False, note="no start converged"))
        return out
    ref = np.concatenate([good[0].x.coords, good[0].y.coords])
    spread = max(float(np.max(np.abs(np.concatenate([r.x.coords, r.y.coords]) - ref))) for r in good)
    out.append(_bound("pairs: multi-start solutions agree", spread, 1e-6))
    return out


def run_checks(problem: PairProblem, seed: int = 0, trials: int = 50, config: SolverConfig = SolverConfig()) -> list:
    """Every suite against ``problem``; returns the combined results."""
    rng = np.random.default_rng(seed)
    alg = problem.algebra
    results = []
    results += algebra_suite(alg, rng, trials)
    results += min_map_suite(alg, rng, trials)
    results += homotopy_suite(alg, rng, trials)
    results += jacobian_suite(problem, rng, max(1, trials // 5))
    results += solution_suite(problem, config)
    results += pair_suite(problem, config)
    return results
