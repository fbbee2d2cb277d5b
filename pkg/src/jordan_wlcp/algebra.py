"""Euclidean Jordan algebras in coordinates.

Three simple kinds are supported, plus Cartesian products of them:

``rn``
    R^n with the componentwise product. Unit ``(1, ..., 1)``, rank ``n``.
``spin``
    The spin (Jordan spin / Lorentz) algebra L^n with
    ``x o y = (<x, y>_coord, x0*ybar + y0*xbar)``. Unit ``(1, 0, ..., 0)``,
    rank 2. The inner product is twice the coordinate dot product so that it
    coincides with the trace form (``<e, e> = rank``).
``sym``
    Real symmetric n x n matrices with ``X o Y = (XY + YX) / 2``. Coordinates
    are taken in the trace-orthonormal basis: the diagonal units ``E_ii`` first,
    then ``(E_ij + E_ji) / sqrt(2)`` for ``i < j`` in row-major order.
``product``
    Concatenation of the factor coordinates.

Every operation works on immutable :class:`Element` values. The numerical
kernels operate on raw coordinate arrays and live on the :class:`Algebra`
handles returned by :func:`build_algebra`; the solver uses those directly.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InvalidInputError, NumericFailure

KINDS = ("rn", "spin", "sym", "product")

# eigenvalues in [-SQRT_CLAMP, 0) are treated as zero by sqrt
SQRT_CLAMP = 1e-10

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class AlgebraDescriptor:
    """Names a Euclidean Jordan algebra.

    ``n`` is the ambient parameter of a simple factor (ignored for products,
    where it is set to the number of factors).
    """

    kind: str
    n: int = 0
    factors: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown algebra kind {self.kind!r}")
        if self.kind == "product":
            factors = tuple(self.factors)
            if len(factors) < 2:
                raise InvalidInputError("product algebra needs at least two factors")
            if not all(isinstance(f, AlgebraDescriptor) for f in factors):
                raise InvalidInputError("product factors must be AlgebraDescriptor")
            object.__setattr__(self, "factors", factors)
            object.__setattr__(self, "n", len(factors))
            return
        if self.factors:
            raise InvalidInputError(f"{self.kind} algebra takes no factors")
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidInputError(f"n must be a positive integer, got {self.n!r}")
        if self.kind == "spin" and self.n < 2:
            raise InvalidInputError("spin algebra needs n >= 2")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def rn(cls, n):
        return cls("rn", n)

    @classmethod
    def spin(cls, n):
        return cls("spin", n)

    @classmethod
    def sym(cls, n):
        return cls("sym", n)

    @classmethod
    def product(cls, *factors):
        return cls("product", 0, tuple(factors))

    @property
    def dim(self) -> int:
        if self.kind == "rn" or self.kind == "spin":
            return self.n
        if self.kind == "sym":
            return self.n * (self.n + 1) // 2
        return sum(f.dim for f in self.factors)

    @property
    def rank(self) -> int:
        if self.kind == "rn" or self.kind == "sym":
            return self.n
        if self.kind == "spin":
            return 2
        return sum(f.rank for f in self.factors)

    def to_dict(self) -> dict:
        if self.kind == "product":
            return {"kind": "product", "factors": [f.to_dict() for f in self.factors]}
        return {"kind": self.kind, "n": self.n}

    @classmethod
    def from_dict(cls, data) -> "AlgebraDescriptor":
        if not isinstance(data, dict) or "kind" not in data:
            raise InvalidInputError("algebra descriptor must be an object with a 'kind'")
        if data["kind"] == "product":
            return cls.product(*(cls.from_dict(f) for f in data.get("factors", [])))
        return cls(data["kind"], data.get("n", 0))

    def __str__(self):
        if self.kind == "rn":
            return f"R^{self.n}"
        if self.kind == "spin":
            return f"L^{self.n}"
        if self.kind == "sym":
            return f"Sym({self.n})"
        return " x ".join(str(f) for f in self.factors)


class ConeClass(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class Element:
    """A point of an algebra, stored as read-only coordinates."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: "Algebra", coords):
        c = np.array(coords, dtype=float)
        if c.ndim != 1 or c.shape[0] != algebra.dim:
            raise InvalidInputError(
                f"{algebra.descriptor} expects {algebra.dim} coordinates, got shape {c.shape}"
            )
        c.flags.writeable = False
        self.algebra = algebra
        self.coords = c

    @property
    def descriptor(self) -> AlgebraDescriptor:
        return self.algebra.descriptor

    def _coerce(self, other) -> np.ndarray:
        if not isinstance(other, Element):
            return NotImplemented
        _check_same(self, other)
        return other.coords

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return Element(self.algebra, self.coords + c)

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return Element(self.algebra, self.coords - c)

    def __neg__(self):
        return Element(self.algebra, -self.coords)

    def __mul__(self, scalar):
        if isinstance(scalar, Element):
            return NotImplemented
        return Element(self.algebra, float(scalar) * self.coords)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Element(self.algebra, self.coords / float(scalar))

    def __repr__(self):
        return f"Element({self.descriptor}, {np.array2string(self.coords, precision=6)})"


def _check_same(a: Element, b: Element):
    if a.algebra.descriptor != b.algebra.descriptor:
        raise InvalidInputError(
            f"algebra mismatch: {a.algebra.descriptor} vs {b.algebra.descriptor}"
        )


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    frame: tuple

    def reconstruct(self) -> Element:
        alg = self.frame[0].algebra
        coords = self.eigenvalues @ np.array([f.coords for f in self.frame])
        return Element(alg, coords)


# ----------------------------------------------------------------------------
# Kernels
# ----------------------------------------------------------------------------


def jacobi_eigh(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decompose a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, V)`` with ``a = V diag(eigenvalues) V^T`` (not
    sorted). Converges when the off-diagonal Frobenius mass drops to
    ``tol * ||a||_F``; raises :class:`NumericFailure` after ``max_sweeps``.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    # plain lists: per-element numpy indexing dominates at desk sizes
    m = a.tolist()
    v = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            row = m[p]
            for q in range(p + 1, n):
                off += row[q] * row[q]
        if math.sqrt(2.0 * off) <= tol * scale:
            return np.array([m[i][i] for i in range(n)]), np.array(v).reshape(n, n)
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p][q]
                if apq == 0.0:
                    continue
                theta = (m[q][q] - m[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for r in m:
                    rp, rq = r[p], r[q]
                    r[p] = c * rp - s * rq
                    r[q] = s * rp + c * rq
                mp, mq = m[p], m[q]
                for k in range(n):
                    xp, xq = mp[k], mq[k]
                    mp[k] = c * xp - s * xq
                    mq[k] = s * xp + c * xq
                mp[q] = mq[p] = 0.0
                for r in v:
                    rp, rq = r[p], r[q]
                    r[p] = c * rp - s * rq
                    r[q] = s * rp + c * rq
    raise NumericFailure(
        f"Jacobi eigensolver did not converge in {max_sweeps} sweeps", iterations=max_sweeps
    )


class Algebra:
    """Handle exposing the arithmetic of one algebra on coordinate arrays."""

    def __init__(self, descriptor: AlgebraDescriptor):
        self.descriptor = descriptor
        self.dim = descriptor.dim
        self.rank = descriptor.rank
        unit = self._unit()
        unit.flags.writeable = False
        self.unit = unit

    # kernel interface, overridden per kind
    def _unit(self) -> np.ndarray:
        raise NotImplementedError

    def mul(self, a, b) -> np.ndarray:
        raise NotImplementedError

    def inner(self, a, b) -> float:
        raise NotImplementedError

    def lmat(self, a) -> np.ndarray:
        raise NotImplementedError

    def eig(self, a):
        """Eigenvalues (descending) and frame rows, shape ``(rank, dim)``."""
        raise NotImplementedError

    def eigvals(self, a) -> np.ndarray:
        return self.eig(a)[0]

    def apply(self, a, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        vals, frame = self.eig(a)
        return fn(vals) @ frame

    # conveniences
    def element(self, coords) -> Element:
        return Element(self, coords)

    @property
    def e(self) -> Element:
        return Element(self, self.unit)

    def zero(self) -> Element:
        return Element(self, np.zeros(self.dim))

    def basis(self, k: int) -> Element:
        c = np.zeros(self.dim)
        c[k] = 1.0
        return Element(self, c)

    def norm(self, a) -> float:
        return math.sqrt(max(self.inner(a, a), 0.0))

    def __repr__(self):
        return f"Algebra({self.descriptor})"


class _Rn(Algebra):
    def _unit(self):
        return np.ones(self.dim)

    def mul(self, a, b):
        return a * b

    def inner(self, a, b):
        return float(np.dot(a, b))

    def lmat(self, a):
        return np.diag(np.asarray(a, dtype=float))

    def eig(self, a):
        order = np.argsort(-a, kind="stable")
        return a[order].copy(), np.eye(self.dim)[order]

    def eigvals(self, a):
        return np.asarray(a, dtype=float)

    def apply(self, a, fn):
        return fn(np.asarray(a, dtype=float))


class _Spin(Algebra):
    def _unit(self):
        u = np.zeros(self.dim)
        u[0] = 1.0
        return u

    def mul(self, a, b):
        out = np.empty(self.dim)
        out[0] = np.dot(a, b)
        out[1:] = a[0] * b[1:] + b[0] * a[1:]
        return out

    def inner(self, a, b):
        return 2.0 * float(np.dot(a, b))

    def lmat(self, a):
        m = a[0] * np.eye(self.dim)
        m[0, 1:] = a[1:]
        m[1:, 0] = a[1:]
        return m

    def _split(self, a):
        bar = a[1:]
        r = float(np.linalg.norm(bar))
        if r > 0.0:
            u = bar / r
        else:
            u = np.zeros(self.dim - 1)
            u[0] = 1.0
        return r, u

    def eig(self, a):
        r, u = self._split(a)
        vals = np.array([a[0] + r, a[0] - r])
        frame = np.empty((2, self.dim))
        frame[:, 0] = 0.5
        frame[0, 1:] = 0.5 * u
        frame[1, 1:] = -0.5 * u
        return vals, frame

    def eigvals(self, a):
        r = float(np.linalg.norm(a[1:]))
        return np.array([a[0] + r, a[0] - r])


class _Sym(Algebra):
    def __init__(self, descriptor):
        n = descriptor.n
        iu = np.triu_indices(n, 1)
        self.size = n
        self._rows = np.concatenate([np.arange(n), iu[0]])
        self._cols = np.concatenate([np.arange(n), iu[1]])
        self._scale = np.concatenate([np.ones(n), np.full(len(iu[0]), _SQRT2)])
        super().__init__(descriptor)
        self._basis_mats = np.array([self.to_matrix(np.eye(self.dim)[k]) for k in range(self.dim)])

    def to_matrix(self, c) -> np.ndarray:
        m = np.zeros((self.size, self.size))
        vals = np.asarray(c, dtype=float) / self._scale
        m[self._rows, self._cols] = vals
        m[self._cols, self._rows] = vals
        return m

    def to_coords(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        sym = 0.5 * (m + m.T)
        return sym[self._rows, self._cols] * self._scale

    def _unit(self):
        return self.to_coords(np.eye(self.size))

    def mul(self, a, b):
        p = self.to_matrix(a) @ self.to_matrix(b)
        # for symmetric X, Y: YX = (XY)^T, so to_coords' symmetrisation gives (XY+YX)/2
        return self.to_coords(p)

    def inner(self, a, b):
        return float(np.dot(a, b))

    def lmat(self, a):
        p = self.to_matrix(a) @ self._basis_mats
        s = 0.5 * (p + p.transpose(0, 2, 1))
        return (s[:, self._rows, self._cols] * self._scale).T

    def eig(self, a):
        vals, vecs = jacobi_eigh(self.to_matrix(a))
        order = np.argsort(-vals, kind="stable")
        vals = vals[order]
        vecs = vecs[:, order]
        outer = vecs.T[:, :, None] * vecs.T[:, None, :]
        frame = outer[:, self._rows, self._cols] * self._scale
        return vals, frame

    def apply(self, a, fn):
        vals, vecs = jacobi_eigh(self.to_matrix(a))
        return self.to_coords((vecs * fn(vals)) @ vecs.T)


class _Product(Algebra):
    def __init__(self, descriptor):
        self.parts = [build_algebra(f) for f in descriptor.factors]
        offsets = np.cumsum([0] + [p.dim for p in self.parts])
        self.slices = [slice(int(offsets[i]), int(offsets[i + 1])) for i in range(len(self.parts))]
        super().__init__(descriptor)

    def _unit(self):
        return np.concatenate([p.unit for p in self.parts])

    def mul(self, a, b):
        return np.concatenate([p.mul(a[s], b[s]) for p, s in zip(self.parts, self.slices)])

    def inner(self, a, b):
        return sum(p.inner(a[s], b[s]) for p, s in zip(self.parts, self.slices))

    def lmat(self, a):
        m = np.zeros((self.dim, self.dim))
        for p, s in zip(self.parts, self.slices):
            m[s, s] = p.lmat(a[s])
        return m

    def eig(self, a):
        vals, rows = [], []
        for p, s in zip(self.parts, self.slices):
            v, f = p.eig(a[s])
            full = np.zeros((p.rank, self.dim))
            full[:, s] = f
            vals.append(v)
            rows.append(full)
        vals = np.concatenate(vals)
        frame = np.vstack(rows)
        order = np.argsort(-vals, kind="stable")
        return vals[order], frame[order]

    def eigvals(self, a):
        return np.concatenate([p.eigvals(a[s]) for p, s in zip(self.parts, self.slices)])

    def apply(self, a, fn):
        return np.concatenate([p.apply(a[s], fn) for p, s in zip(self.parts, self.slices)])


_KERNELS = {"rn": _Rn, "spin": _Spin, "sym": _Sym, "product": _Product}


@functools.lru_cache(maxsize=None)
def _build(descriptor: AlgebraDescriptor) -> Algebra:
    return _KERNELS[descriptor.kind](descriptor)


def build_algebra(descriptor: AlgebraDescriptor) -> Algebra:
    """Return the (cached) algebra handle for ``descriptor``."""
    if not isinstance(descriptor, AlgebraDescriptor):
        raise InvalidInputError(f"expected AlgebraDescriptor, got {type(descriptor).__name__}")
    return _build(descriptor)


def rn(n) -> Algebra:
    return build_algebra(AlgebraDescriptor.rn(n))


def spin(n) -> Algebra:
    return build_algebra(AlgebraDescriptor.spin(n))


def sym(n) -> Algebra:
    return build_algebra(AlgebraDescriptor.sym(n))


def product(*factors: Algebra) -> Algebra:
    return build_algebra(AlgebraDescriptor.product(*(f.descriptor for f in factors)))


# ----------------------------------------------------------------------------
# Element-level operations
# ----------------------------------------------------------------------------


def jordan_product(a: Element, b: Element) -> Element:
    _check_same(a, b)
    return Element(a.algebra, a.algebra.mul(a.coords, b.coords))


def inner_product(a: Element, b: Element) -> float:
    _check_same(a, b)
    return a.algebra.inner(a.coords, b.coords)


def norm(x: Element) -> float:
    """Norm induced by the trace inner product."""
    return x.algebra.norm(x.coords)


def spectral_decompose(x: Element) -> SpectralDecomposition:
    vals, frame = x.algebra.eig(x.coords)
    vals = np.array(vals)
    vals.flags.writeable = False
    return SpectralDecomposition(vals, tuple(Element(x.algebra, f) for f in frame))


def min_eigenvalue(x: Element) -> float:
    return float(np.min(x.algebra.eigvals(x.coords)))


def _plus(v):
    return np.maximum(v, 0.0)


def _minus(v):
    return np.maximum(-v, 0.0)


def _sqrt_checked(v):
    low = np.min(v)
    if low < -SQRT_CLAMP:
        raise DomainError(f"sqrt of element with eigenvalue {low:.3e} < -{SQRT_CLAMP:g}")
    return np.sqrt(np.maximum(v, 0.0))


def sqrt_clamped(v):
    """Square root clipping every negative eigenvalue to zero."""
    return np.sqrt(np.maximum(v, 0.0))


SPECTRAL_FUNCTIONS = {
    "plus": _plus,
    "minus": _minus,
    "abs": np.abs,
    "sqrt": _sqrt_checked,
}


def spectral_map(x: Element, f: str) -> Element:
    """Apply ``f`` in {plus, minus, abs, sqrt} to the eigenvalues of ``x``.

    ``minus`` is ``x^- = x^+ - x``. ``sqrt`` treats eigenvalues in
    ``[-1e-10, 0)`` as zero and raises :class:`DomainError` below that.
    """
    try:
        fn = SPECTRAL_FUNCTIONS[f]
    except KeyError:
        raise InvalidInputError(f"unknown spectral function {f!r}") from None
    return Element(x.algebra, x.algebra.apply(x.coords, fn))


def cone_membership(x: Element, tol: float) -> ConeClass:
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    lam = min_eigenvalue(x)
    if lam > tol:
        return ConeClass.INTERIOR
    if lam < -tol:
        return ConeClass.OUTSIDE
    return ConeClass.BOUNDARY


def lyapunov_operator(x: Element) -> np.ndarray:
    """Matrix of ``h -> x o h`` in the coordinate basis (symmetric)."""
    return x.algebra.lmat(x.coords)


def operator_commute(x: Element, y: Element, tol: float = 1e-9) -> bool:
    _check_same(x, y)
    lx = lyapunov_operator(x)
    ly = lyapunov_operator(y)
    gap = np.linalg.norm(lx @ ly - ly @ lx)
    return bool(gap <= tol * (1.0 + np.linalg.norm(lx)) * (1.0 + np.linalg.norm(ly)))


def same_algebra(*elements: Element) -> Algebra:
    """Return the common algebra of ``elements`` or raise InvalidInputError."""
    first = elements[0]
    for other in elements[1:]:
        _check_same(first, other)
    return first.algebra


def as_elements(algebra: Algebra, vectors: Sequence) -> list:
    return [Element(algebra, v) for v in vectors]
