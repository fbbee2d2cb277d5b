"""Linear transformations on an algebra, stored as dense coordinate matrices."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .algebra import Algebra, Element, build_algebra, AlgebraDescriptor, min_eigenvalue, norm
from .errors import InvalidInputError

# w may sit this far outside the cone (relative to 1 + ||w||)
W_CONE_TOL = 1e-9


class LinearOperator:
    """A linear map ``V -> V`` given by its matrix in the algebra's basis."""

    __slots__ = ("algebra", "matrix")

    def __init__(self, algebra: Algebra, matrix):
        m = np.array(matrix, dtype=float)
        if m.shape != (algebra.dim, algebra.dim):
            raise InvalidInputError(
                f"operator on {algebra.descriptor} needs shape {(algebra.dim, algebra.dim)}, "
                f"got {m.shape}"
            )
        m.flags.writeable = False
        self.algebra = algebra
        self.matrix = m

    @classmethod
    def identity(cls, algebra: Algebra) -> "LinearOperator":
        return cls(algebra, np.eye(algebra.dim))

    @classmethod
    def zero(cls, algebra: Algebra) -> "LinearOperator":
        return cls(algebra, np.zeros((algebra.dim, algebra.dim)))

    @classmethod
    def from_action(cls, algebra: Algebra, action: Callable[[np.ndarray], np.ndarray]):
        """Materialise ``action`` (acting on coordinates) column by column."""
        cols = [np.asarray(action(np.eye(algebra.dim)[k]), dtype=float) for k in range(algebra.dim)]
        return cls(algebra, np.column_stack(cols))

    def __call__(self, x: Element) -> Element:
        return apply(self, x)

    def __neg__(self):
        return LinearOperator(self.algebra, -self.matrix)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        _check_alg(self.algebra, other.algebra)
        return LinearOperator(self.algebra, self.matrix @ other.matrix)

    def __repr__(self):
        return f"LinearOperator({self.algebra.descriptor}, {self.matrix.tolist()})"


def _check_alg(a: Algebra, b: Algebra):
    if a.descriptor != b.descriptor:
        raise InvalidInputError(f"algebra mismatch: {a.descriptor} vs {b.descriptor}")


def apply(T: LinearOperator, x: Element) -> Element:
    _check_alg(T.algebra, x.algebra)
    return Element(x.algebra, T.matrix @ x.coords)


def _square(mat, name) -> np.ndarray:
    m = np.array(mat, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvalidInputError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    return m


def lyapunov_transform(A_mat) -> LinearOperator:
    """The operator ``X -> A X + X A^T`` on Sym(n)."""
    a = _square(A_mat, "A_mat")
    alg = build_algebra(AlgebraDescriptor.sym(a.shape[0]))

    def action(c):
        x = alg.to_matrix(c)
        return alg.to_coords(a @ x + x @ a.T)

    return LinearOperator.from_action(alg, action)


def stein_transform(B_mat) -> LinearOperator:
    """The operator ``X -> X - B X B^T`` on Sym(n)."""
    b = _square(B_mat, "B_mat")
    alg = build_algebra(AlgebraDescriptor.sym(b.shape[0]))

    def action(c):
        x = alg.to_matrix(c)
        return alg.to_coords(x - b @ x @ b.T)

    return LinearOperator.from_action(alg, action)


def w_in_cone(w: Element) -> bool:
    return min_eigenvalue(w) >= -W_CONE_TOL * (1.0 + norm(w))


class PairProblem:
    """Data of wHLCP(A, B, w, q): find x, y >= 0 with x o y = w and Ax + By = q."""

    __slots__ = ("A", "B", "w", "q")

    def __init__(self, A: LinearOperator, B: LinearOperator, w: Element, q: Element):
        alg = A.algebra
        for part in (B, w, q):
            _check_alg(alg, part.algebra)
        if not w_in_cone(w):
            raise InvalidInputError(
                f"weight w is outside the cone (min eigenvalue {min_eigenvalue(w):.3e})"
            )
        self.A = A
        self.B = B
        self.w = w
        self.q = q

    @property
    def algebra(self) -> Algebra:
        return self.A.algebra

    def with_weight(self, w: Element) -> "PairProblem":
        return PairProblem(self.A, self.B, w, self.q)

    def __repr__(self):
        return f"PairProblem({self.algebra.descriptor}, w={self.w.coords}, q={self.q.coords})"


def lcp_embedding(M: LinearOperator, w: Element, q: Element, convention: str = "graph") -> PairProblem:
    """Embed the weighted LCP of ``M`` as a pair problem.

    ``convention="graph"`` (default) gives ``(A, B) = (-M, I)`` so that
    ``Ax + By = q`` reads ``y = Mx + q``. ``convention="standard"`` gives
    ``(I, -M)``, i.e. ``x - My = q``.
    """
    ident = LinearOperator.identity(M.algebra)
    if convention == "graph":
        return PairProblem(-M, ident, w, q)
    if convention == "standard":
        return PairProblem(ident, -M, w, q)
    raise InvalidInputError(f"unknown convention {convention!r}")
