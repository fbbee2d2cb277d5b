"""Complementarity maps (min, Fischer-Burmeister, weighted FB) and residuals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, Element, same_algebra, sqrt_clamped
from .errors import InvalidInputError
from .operators import PairProblem, w_in_cone


@dataclass(frozen=True)
class ResidualTriple:
    """Violations of the three conditions x,y >= 0; x o y = w; Ax + By = q."""

    comp_residual: float
    lin_residual: float
    cone_violation: float

    def max(self) -> float:
        return max(self.comp_residual, self.lin_residual, self.cone_violation)

    def within(self, tol: float) -> bool:
        return self.max() <= tol

    def to_dict(self) -> dict:
        return {"comp": self.comp_residual, "lin": self.lin_residual, "cone": self.cone_violation}


def _plus(v):
    return np.maximum(v, 0.0)


def min_map(x: Element, y: Element) -> Element:
    """``x - (x - y)^+``; the componentwise minimum on R^n."""
    alg = same_algebra(x, y)
    d = x.coords - y.coords
    return Element(alg, x.coords - alg.apply(d, _plus))


def _fb(alg: Algebra, x, y, extra=None):
    u = alg.mul(x, x) + alg.mul(y, y)
    if extra is not None:
        u = u + extra
    return x + y - alg.apply(u, sqrt_clamped)


def fb_map(x: Element, y: Element) -> Element:
    """Fischer-Burmeister map ``x + y - sqrt(x^2 + y^2)``."""
    alg = same_algebra(x, y)
    return Element(alg, _fb(alg, x.coords, y.coords))


def weighted_fb_map(x: Element, y: Element, w: Element) -> Element:
    """``x + y - sqrt(x^2 + y^2 + 2w)``; vanishes iff x, y >= 0 and x o y = w."""
    alg = same_algebra(x, y, w)
    if not w_in_cone(w):
        raise InvalidInputError("weight w is outside the symmetric cone")
    return Element(alg, _fb(alg, x.coords, y.coords, 2.0 * w.coords))


def residual_triple(alg: Algebra, A, B, w, q, x, y) -> ResidualTriple:
    """Residuals on raw coordinates (``A``, ``B`` as matrices)."""
    comp = alg.norm(alg.mul(x, y) - w)
    lin = alg.norm(A @ x + B @ y - q)
    cone = max(0.0, -float(np.min(alg.eigvals(x))), -float(np.min(alg.eigvals(y))))
    return ResidualTriple(float(comp), float(lin), cone)


def residuals(x: Element, y: Element, problem: PairProblem) -> ResidualTriple:
    """Residuals of (x, y) for ``problem``; norms are trace-form norms."""
    alg = same_algebra(x, y, problem.w)
    return residual_triple(
        alg, problem.A.matrix, problem.B.matrix, problem.w.coords, problem.q.coords,
        x.coords, y.coords,
    )
