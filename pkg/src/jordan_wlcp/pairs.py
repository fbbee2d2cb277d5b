"""Classification of matrix pairs {A, B} on R^n.

Everything here works by enumerating complementary support patterns: a
pattern ``alpha`` says which coordinates are carried by ``x`` (the rest by
``y``), and turns ``Ax + By = q`` into the square system ``C_alpha z = q``
whose columns are ``A[:, i]`` for ``i in alpha`` and ``B[:, i]`` otherwise.

Degrees use the orientation in which the constraint rows ``Ax + By`` come
first and the complementarity rows second. This is the orientation under
which ``deg(I, -M)`` equals the classical LCP degree of ``M`` for every n
(the other ordering differs by ``(-1)^n``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .algebra import Element
from .errors import CapacityError, DegeneratePairError, InvalidInputError, NumericFailure
from .operators import LinearOperator
from .simplex import simplex_max

MAX_ENUM_N = 20
MAX_DEGREE_N = 16
MAX_STABLE_N = 30
EXACT_MINOR_N = 8

GENERICITY_TOL = 1e-7
DEFAULT_SAMPLES = 3
MAX_RESAMPLES = 20
R0_LP_TOL = 1e-9
SINGULAR_REL_TOL = 1e-12


@dataclass(frozen=True)
class SupportPattern:
    """``alpha``: coordinates where x is free and y = 0; y carries the rest."""

    alpha: frozenset
    n: int

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "SupportPattern":
        return cls(frozenset(i for i in range(n) if mask >> i & 1), n)

    @property
    def in_x(self) -> np.ndarray:
        return np.array([i in self.alpha for i in range(self.n)])

    def columns(self, A, B) -> np.ndarray:
        return np.where(self.in_x[None, :], A, B)

    def split(self, z):
        mask = self.in_x
        return np.where(mask, z, 0.0), np.where(mask, 0.0, z)

    def selection_rows(self) -> np.ndarray:
        """Derivative of ``x min y`` at a strictly complementary point of this pattern."""
        n = self.n
        sel = np.zeros((n, 2 * n))
        for i in range(n):
            # x_i > 0 = y_i: min(x_i, y_i) = y_i locally, otherwise x_i
            sel[i, n + i if i in self.alpha else i] = 1.0
        return sel


def all_patterns(n: int):
    """Every pattern, starting from "all coordinates in x"."""
    for mask in range((1 << n) - 1, -1, -1):
        yield SupportPattern.from_mask(mask, n)


@dataclass(frozen=True)
class R0Result:
    is_r0: bool
    witness: Optional[tuple] = None
    pattern: Optional[SupportPattern] = None

    def __bool__(self):
        return self.is_r0


@dataclass(frozen=True)
class DegreeReport:
    degree: int
    samples_used: int
    solutions_per_sample: tuple
    degenerate_retries: int

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "samples_used": self.samples_used,
            "solutions_per_sample": list(self.solutions_per_sample),
            "degenerate_retries": self.degenerate_retries,
        }


def _matrix(op, name="operator") -> np.ndarray:
    if isinstance(op, LinearOperator):
        if op.algebra.descriptor.kind != "rn":
            raise InvalidInputError(f"{name} must act on R^n, got {op.algebra.descriptor}")
        return np.array(op.matrix)
    m = np.array(op, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {m.shape}")
    return m


def _vector(v, n, name="vector") -> np.ndarray:
    arr = np.array(v.coords if isinstance(v, Element) else v, dtype=float).reshape(-1)
    if arr.shape != (n,):
        raise InvalidInputError(f"{name} must have length {n}, got {arr.shape}")
    return arr


def _pair(A, B, limit):
    a = _matrix(A, "A")
    b = _matrix(B, "B")
    if a.shape != b.shape:
        raise InvalidInputError(f"A and B shapes differ: {a.shape} vs {b.shape}")
    if a.shape[0] > limit:
        raise CapacityError(f"n = {a.shape[0]} exceeds the enumeration limit {limit}")
    return a, b


def _relatively_singular(c) -> bool:
    scale = float(np.prod(np.linalg.norm(c, axis=0)))
    if scale == 0.0:
        return True
    return abs(np.linalg.det(c)) <= SINGULAR_REL_TOL * scale


def brute_force_hlcp(A, B, q, strict_tol: float = 1e-9) -> list:
    """All solutions of HLCP(A, B, q) reachable through nonsingular patterns.

    A pattern is accepted when ``|det C_alpha| > strict_tol`` and every solved
    component is ``>= -strict_tol``; tiny negative components are clipped to
    zero. Returns a list of ``(x, y)`` arrays, deduplicated, in pattern order.
    """
    a, b = _pair(A, B, MAX_ENUM_N)
    n = a.shape[0]
    qv = _vector(q, n, "q")
    found = []
    for pat in all_patterns(n):
        c = pat.columns(a, b)
        if abs(np.linalg.det(c)) <= strict_tol:
            continue
        z = np.linalg.solve(c, qv)
        if np.min(z, initial=0.0) < -strict_tol:
            continue
        x, y = pat.split(np.maximum(z, 0.0))
        scale = 1.0 + float(np.max(np.abs(z), initial=0.0))
        if any(
            np.max(np.abs(np.r_[x - fx, y - fy]), initial=0.0) <= 1e-9 * scale for fx, fy in found
        ):
            continue
        found.append((x, y))
    return found


def is_r0_pair(A, B) -> R0Result:
    """Decide whether HLCP(A, B, 0) has only the zero solution.

    For each pattern, look for ``z >= 0, z != 0`` with ``C_alpha z = 0`` by
    maximising ``sum(z)`` over ``C_alpha z = 0, 0 <= z <= 1``. A positive
    optimum gives a nonzero witness ``(x, y)``. Patterns with nonsingular
    ``C_alpha`` have a trivial kernel and are skipped.
    """
    a, b = _pair(A, B, MAX_ENUM_N)
    n = a.shape[0]
    ones = np.ones(n)
    for pat in all_patterns(n):
        c = pat.columns(a, b)
        if not _relatively_singular(c):
            continue
        G = np.vstack([c, -c, np.eye(n)])
        h = np.concatenate([np.zeros(2 * n), ones])
        opt, z = simplex_max(ones, G, h)
        if opt > R0_LP_TOL:
            z = z / np.max(z)
            return R0Result(False, pat.split(z), pat)
    return R0Result(True)


class _Degenerate(Exception):
    pass


def _sampled_degree(n, local_indices, samples, seed, max_resamples) -> DegreeReport:
    """Sum local indices over solutions at generic right-hand sides.

    ``local_indices(p)`` returns the list of indices (+-1) at the solutions for
    right-hand side ``p`` or raises ``_Degenerate``.
    """
    rng = np.random.default_rng(seed)
    degrees, counts = [], []
    retries = 0
    while len(degrees) < samples:
        p = rng.normal(size=n)
        try:
            idx = local_indices(p)
        except _Degenerate:
            retries += 1
            if retries > max_resamples:
                raise DegeneratePairError(
                    f"degenerate solutions persisted over {max_resamples} resamples"
                ) from None
            continue
        degrees.append(int(sum(idx)))
        counts.append(len(idx))
    if len(set(degrees)) != 1:
        raise NumericFailure(f"degree samples disagree: {degrees}")
    return DegreeReport(degrees[0], len(degrees), tuple(counts), retries)


def hlcp_degree(
    A,
    B,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    genericity_tol: float = GENERICITY_TOL,
    max_resamples: int = MAX_RESAMPLES,
    check_r0: bool = True,
) -> DegreeReport:
    """Degree of an R0 pair via generic right-hand sides.

    For a generic ``p`` every solution of HLCP(A, B, p) is nondegenerate and
    the degree is the sum of ``sign det J`` over them, with
    ``J = [[A, B], [selection rows]]``.
    """
    a, b = _pair(A, B, MAX_DEGREE_N)
    n = a.shape[0]
    if samples < 1:
        raise InvalidInputError("samples must be >= 1")
    if check_r0 and not is_r0_pair(a, b):
        raise InvalidInputError("hlcp_degree needs an R0 pair")
    top = np.hstack([a, b])
    patterns = list(all_patterns(n))

    def local_indices(p):
        idx = []
        for pat in patterns:
            c = pat.columns(a, b)
            if _relatively_singular(c):
                continue
            z = np.linalg.solve(c, p)
            if np.all(z > genericity_tol):
                jac = np.vstack([top, pat.selection_rows()])
                idx.append(int(np.sign(np.linalg.det(jac))))
            elif np.min(z) >= -genericity_tol:
                raise _Degenerate
        return idx

    return _sampled_degree(n, local_indices, samples, seed, max_resamples)


def lcp_degree(
    M,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    genericity_tol: float = GENERICITY_TOL,
    max_resamples: int = MAX_RESAMPLES,
) -> DegreeReport:
    """Classical LCP degree of an R0 matrix: sum of ``sign det M[a, a]``
    over the solutions of LCP(M, p), ``a`` the support of x, for generic p."""
    m = _matrix(M, "M")
    n = m.shape[0]
    if n > MAX_DEGREE_N:
        raise CapacityError(f"n = {n} exceeds {MAX_DEGREE_N}")
    subsets = [
        np.array(s, dtype=int) for k in range(n + 1) for s in itertools.combinations(range(n), k)
    ]

    def local_indices(p):
        idx = []
        for s in subsets:
            rest = np.setdiff1d(np.arange(n), s)
            if s.size == 0:
                x_s = np.zeros(0)
                sign = 1
            else:
                mss = m[np.ix_(s, s)]
                if _relatively_singular(mss):
                    continue
                x_s = np.linalg.solve(mss, -p[s])
                sign = int(np.sign(np.linalg.det(mss)))
            w_rest = p[rest] + m[np.ix_(rest, s)] @ x_s
            vals = np.concatenate([x_s, w_rest])
            if np.all(vals > genericity_tol):
                idx.append(sign)
            elif np.min(vals) >= -genericity_tol:
                raise _Degenerate
        return idx

    return _sampled_degree(n, local_indices, samples, seed, max_resamples)


def _exact_det(rows) -> Fraction:
    """Determinant by Gaussian elimination over the rationals."""
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return det


def principal_minors(M):
    """Yield ``(subset, minor)`` for every nonempty principal submatrix.

    Exact rational arithmetic for ``n <= 8`` (floats convert to fractions
    without rounding), batched LU determinants above that.
    """
    m = _matrix(M, "M")
    n = m.shape[0]
    if n > MAX_ENUM_N:
        raise CapacityError(f"n = {n} exceeds {MAX_ENUM_N}")
    if n <= EXACT_MINOR_N:
        exact = [[Fraction(float(v)) for v in row] for row in m]
        for k in range(1, n + 1):
            for s in itertools.combinations(range(n), k):
                yield s, _exact_det([[exact[i][j] for j in s] for i in s])
        return
    for k in range(1, n + 1):
        subsets = list(itertools.combinations(range(n), k))
        for start in range(0, len(subsets), 20_000):
            chunk = np.array(subsets[start : start + 20_000])
            dets = np.linalg.det(m[chunk[:, :, None], chunk[:, None, :]])
            yield from zip(map(tuple, chunk), dets)


def is_p_matrix(M) -> bool:
    """True iff every principal minor of ``M`` is positive."""
    return all(minor > 0 for _, minor in principal_minors(M))


def _invertible(m) -> bool:
    return not _relatively_singular(m)


def is_p_pair(A, B) -> bool:
    """P-pair test on R^n: A, B invertible and ``-B^{-1} A`` a P-matrix."""
    a, b = _pair(A, B, MAX_ENUM_N)
    if not (_invertible(a) and _invertible(b)):
        return False
    return is_p_matrix(-np.linalg.solve(b, a))


def verify_r_pair_witness(A, B, p, strict_tol: float = 1e-9) -> bool:
    """Check that HLCP(A, B, p) has exactly one solution and that ``x + y > 0``.

    On R^n the nonsingularity condition on the derivative follows from the
    other two, so it is not checked separately.
    """
    a, b = _pair(A, B, MAX_DEGREE_N)
    if not is_r0_pair(a, b):
        raise InvalidInputError("R-pair witnesses are only defined for R0 pairs")
    sols = brute_force_hlcp(a, b, _vector(p, a.shape[0], "p"), strict_tol)
    if len(sols) != 1:
        return False
    x, y = sols[0]
    return bool(np.min(x + y) > strict_tol)


def is_positive_stable(A_mat) -> bool:
    """Solve ``A^T P + P A = I``; A is positive stable iff P exists, unique and P > 0."""
    a = _matrix(A_mat, "A_mat")
    n = a.shape[0]
    if n > MAX_STABLE_N:
        raise CapacityError(f"n = {n} exceeds {MAX_STABLE_N}")
    eye = np.eye(n)
    # column-major vec: vec(A^T P) = (I kron A^T) vec P, vec(P A) = (A^T kron I) vec P
    K = np.kron(eye, a.T) + np.kron(a.T, eye)
    if np.linalg.cond(K) > 1e12:
        return False
    P = np.linalg.solve(K, eye.reshape(-1, order="F")).reshape(n, n, order="F")
    if np.linalg.norm(P - P.T) > 1e-8 * (1.0 + np.linalg.norm(P)):
        return False
    return bool(np.min(np.linalg.eigvalsh(0.5 * (P + P.T))) > 0)


def whlcp_1d_oracle(a: float, b: float, w: float, q: float) -> list:
    """All solutions of ``a x + b y = q, x y = w, x, y >= 0`` for scalars.

    Raises InvalidInputError when the solution set is infinite.
    """
    if w < 0:
        raise InvalidInputError("w must be non-negative")
    sols = []
    if w > 0:
        if a != 0:
            disc = q * q - 4.0 * a * b * w
            if disc < -1e-14 * (q * q + abs(4.0 * a * b * w)):
                return []
            root = math.sqrt(max(disc, 0.0))
            xs = {(q + root) / (2.0 * a), (q - root) / (2.0 * a)}
        elif q != 0:
            xs = {b * w / q}
        elif b == 0:
            raise InvalidInputError("a = b = q = 0: infinitely many solutions")
        else:
            xs = set()
        sols = [(x, w / x) for x in xs if x > 0]
    else:
        # x = 0 branch: b y = q; y = 0 branch: a x = q
        if b == 0 and q == 0 or a == 0 and q == 0:
            raise InvalidInputError("infinitely many solutions")
        if b != 0 and q / b >= 0:
            sols.append((0.0, q / b))
        if a != 0 and q / a >= 0:
            sols.append((q / a, 0.0))
        sols = list(dict.fromkeys(sols))
    return sorted(sols)
