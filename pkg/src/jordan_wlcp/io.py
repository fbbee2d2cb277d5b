"""JSON instance and report files, and seeded instance generation.

Instance schema::

    {
      "algebra": {"kind": "rn", "n": 3},        # or spin / sym / product+factors
      "A": [[...], ...] | {"builder": ..., ...},
      "B": ...,
      "w": [...], "q": [...],
      "metadata": {"key": "value"}              # optional
    }

Operators are dim x dim row-major matrices or builders:
``{"builder": "lyapunov", "matrix": n x n}``, ``{"builder": "stein", ...}``,
``{"builder": "identity"}`` and ``{"builder": "negated", "matrix": ...}`` /
``{"builder": "negated", "of": <operator>}``. Coordinates follow the algebra
basis (Sym: diagonal first, then off-diagonals row-major scaled by sqrt 2).
"""

from __future__ import annotations

import json
import math

import numpy as np

from .algebra import AlgebraDescriptor, Element, build_algebra, min_eigenvalue
from .errors import GenerationFailure, InvalidInputError, ParseError, ValidationError
from .maps import ResidualTriple
from .operators import LinearOperator, PairProblem, lyapunov_transform, stein_transform, w_in_cone
from .pairs import is_p_matrix, is_r0_pair
from .solver import SolveReport

GENERATOR_KINDS = ("ppair", "r0", "random")
GENERATION_BUDGET = 100


def _number(v, path) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"expected a number, got {type(v).__name__}", path)
    if not math.isfinite(v):
        raise ParseError("non-finite number", path)
    return float(v)


def _vector(v, length, path) -> np.ndarray:
    if not isinstance(v, list):
        raise ParseError("expected an array", path)
    if len(v) != length:
        raise ParseError(f"expected {length} entries, got {len(v)}", path)
    return np.array([_number(x, f"{path}[{i}]") for i, x in enumerate(v)])


def _matrix(v, rows, path) -> np.ndarray:
    if not isinstance(v, list):
        raise ParseError("expected an array of rows", path)
    if len(v) != rows:
        raise ParseError(f"expected {rows} rows, got {len(v)}", path)
    return np.array([_vector(r, rows, f"{path}[{i}]") for i, r in enumerate(v)])


def _operator(spec, alg, path) -> LinearOperator:
    if isinstance(spec, list):
        return LinearOperator(alg, _matrix(spec, alg.dim, path))
    if not isinstance(spec, dict) or "builder" not in spec:
        raise ParseError("expected a matrix or a builder object", path)
    kind = spec["builder"]
    if kind == "identity":
        return LinearOperator.identity(alg)
    if kind == "negated":
        if "of" in spec:
            return -_operator(spec["of"], alg, f"{path}.of")
        if "matrix" in spec:
            return LinearOperator(alg, -_matrix(spec["matrix"], alg.dim, f"{path}.matrix"))
        raise ParseError("negated builder needs 'matrix' or 'of'", path)
    if kind in ("lyapunov", "stein"):
        if alg.descriptor.kind != "sym":
            raise ParseError(f"{kind} builder needs a sym algebra", path)
        mat = _matrix(spec.get("matrix"), alg.descriptor.n, f"{path}.matrix")
        return lyapunov_transform(mat) if kind == "lyapunov" else stein_transform(mat)
    raise ParseError(f"unknown builder {kind!r}", f"{path}.builder")


def load_instance(data) -> tuple:
    """Validate a decoded instance object; returns ``(problem, metadata)``."""
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    for key in ("algebra", "A", "B", "w", "q"):
        if key not in data:
            raise ParseError("missing field", key)
    try:
        desc = AlgebraDescriptor.from_dict(data["algebra"])
    except (InvalidInputError, TypeError) as exc:
        raise ParseError(str(exc), "algebra") from None
    alg = build_algebra(desc)
    A = _operator(data["A"], alg, "A")
    B = _operator(data["B"], alg, "B")
    w = Element(alg, _vector(data["w"], alg.dim, "w"))
    q = Element(alg, _vector(data["q"], alg.dim, "q"))
    meta = data.get("metadata", {})
    if not isinstance(meta, dict) or not all(isinstance(v, str) for v in meta.values()):
        raise ParseError("metadata must map strings to strings", "metadata")
    if not w_in_cone(w):
        raise ValidationError(f"w is outside the cone (min eigenvalue {min_eigenvalue(w):.3e})")
    return PairProblem(A, B, w, q), dict(meta)


def parse_instance(text: str) -> PairProblem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return load_instance(data)[0]


def instance_to_dict(problem: PairProblem, metadata=None) -> dict:
    out = {
        "algebra": problem.algebra.descriptor.to_dict(),
        "A": problem.A.matrix.tolist(),
        "B": problem.B.matrix.tolist(),
        "w": problem.w.coords.tolist(),
        "q": problem.q.coords.tolist(),
    }
    if metadata:
        out["metadata"] = dict(metadata)
    return out


def dumps(obj) -> str:
    # float repr is the shortest string that round-trips, so parse(dumps(x)) is bit-exact
    return json.dumps(obj, indent=2) + "\n"


def serialize_instance(problem: PairProblem, metadata=None) -> str:
    return dumps(instance_to_dict(problem, metadata))


def report_to_dict(report: SolveReport, classification=None) -> dict:
    out = {
        "status": report.status,
        "algebra": report.x.descriptor.to_dict(),
        "x": report.x.coords.tolist(),
        "y": report.y.coords.tolist(),
        "residuals": report.residuals.to_dict(),
        "iterations": report.iterations,
    }
    if classification is not None:
        out["classification"] = classification
    return out


def residuals_from_dict(data) -> ResidualTriple:
    return ResidualTriple(float(data["comp"]), float(data["lin"]), float(data["cone"]))


def generate_instance(kind: str, n: int, seed: int) -> dict:
    """Seeded random rn instance of class ``kind`` in {ppair, r0, random}.

    ``ppair``: ``B = I``, ``A = -M`` with ``M = D^T D + n I + (K - K^T)``,
    which is positive definite in its symmetric part and hence a P-matrix.
    ``r0``: Gaussian pairs, rejection-sampled until R0. ``random``: Gaussian
    pairs. ``w`` is half-normal (componentwise positive), ``q`` Gaussian.
    """
    if kind not in GENERATOR_KINDS:
        raise InvalidInputError(f"kind must be one of {GENERATOR_KINDS}")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidInputError("n must be a positive integer")
    if seed < 0:
        raise InvalidInputError("seed must be non-negative")
    rng = np.random.default_rng([seed, n, GENERATOR_KINDS.index(kind)])
    if kind == "ppair":
        D = rng.normal(size=(n, n))
        K = rng.normal(size=(n, n))
        M = D.T @ D + n * np.eye(n) + (K - K.T)
        if not is_p_matrix(M):
            raise GenerationFailure("generated matrix failed the P-matrix check")
        A, B = -M, np.eye(n)
    elif kind == "r0":
        for _ in range(GENERATION_BUDGET):
            A = rng.normal(size=(n, n))
            B = rng.normal(size=(n, n))
            if is_r0_pair(A, B):
                break
        else:
            raise GenerationFailure(f"no R0 pair within {GENERATION_BUDGET} draws")
    else:
        A = rng.normal(size=(n, n))
        B = rng.normal(size=(n, n))
    w = np.abs(rng.normal(size=n))
    q = rng.normal(size=n)
    return {
        "algebra": {"kind": "rn", "n": n},
        "A": A.tolist(),
        "B": B.tolist(),
        "w": w.tolist(),
        "q": q.tolist(),
        "metadata": {"generator": kind, "n": str(n), "seed": str(seed)},
    }
