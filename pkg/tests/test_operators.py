import numpy as np
import pytest

from jordan_wlcp import (
    Element,
    InvalidInputError,
    LinearOperator,
    PairProblem,
    apply,
    brute_force_hlcp,
    lcp_embedding,
    lyapunov_transform,
    rn,
    spin,
    stein_transform,
    sym,
)


def el(alg, *coords):
    return Element(alg, np.array(coords, dtype=float))


def sym_el(n, m):
    a = sym(n)
    return Element(a, a.to_coords(np.array(m, dtype=float)))


def as_matrix(x):
    return x.algebra.to_matrix(x.coords)


class TestApply:
    def test_identity(self, rng):
        a = spin(4)
        x = Element(a, rng.normal(size=4))
        assert np.array_equal(apply(LinearOperator.identity(a), x).coords, x.coords)

    def test_swap(self):
        a = rn(2)
        op = LinearOperator(a, [[0, 1], [1, 0]])
        assert apply(op, el(a, 3, 4)).coords.tolist() == [4, 3]

    def test_zero(self):
        a = rn(3)
        assert apply(LinearOperator.zero(a), a.e).coords.tolist() == [0, 0, 0]

    def test_mismatch(self):
        with pytest.raises(InvalidInputError):
            apply(LinearOperator.identity(rn(3)), spin(3).e)

    def test_shape_checked(self):
        with pytest.raises(InvalidInputError):
            LinearOperator(rn(3), np.eye(2))


class TestLyapunov:
    def test_identity(self):
        out = apply(lyapunov_transform(np.eye(2)), sym(2).e)
        assert np.allclose(as_matrix(out), 2 * np.eye(2))

    def test_diagonal(self):
        out = apply(lyapunov_transform(np.diag([1.0, 2.0])), sym_el(2, np.diag([3.0, 5.0])))
        assert np.allclose(as_matrix(out), np.diag([6.0, 20.0]))

    def test_zero(self):
        assert np.array_equal(lyapunov_transform(np.zeros((3, 3))).matrix, np.zeros((6, 6)))

    def test_matches_action_on_basis(self, rng):
        a_mat = rng.normal(size=(3, 3))
        op = lyapunov_transform(a_mat)
        alg = sym(3)
        for k in range(alg.dim):
            x = alg.to_matrix(alg.basis(k).coords)
            expected = alg.to_coords(a_mat @ x + x @ a_mat.T)
            assert np.allclose(op.matrix[:, k], expected, atol=1e-12)

    def test_not_square(self):
        with pytest.raises(InvalidInputError):
            lyapunov_transform(np.zeros((2, 3)))


class TestStein:
    def test_zero_is_identity(self):
        assert np.allclose(stein_transform(np.zeros((2, 2))).matrix, np.eye(3))

    def test_identity_is_zero(self):
        assert np.allclose(stein_transform(np.eye(2)).matrix, 0)

    def test_half(self):
        out = apply(stein_transform(0.5 * np.eye(2)), sym(2).e)
        assert np.allclose(as_matrix(out), 0.75 * np.eye(2))

    def test_output_symmetric(self, rng):
        b = rng.normal(size=(3, 3))
        op = stein_transform(b)
        alg = sym(3)
        for k in range(alg.dim):
            x = alg.to_matrix(alg.basis(k).coords)
            out = x - b @ x @ b.T
            assert np.allclose(out, out.T)
            assert np.allclose(alg.to_matrix(op.matrix[:, k]), out, atol=1e-12)


class TestEmbedding:
    def test_identity_zero_rhs(self):
        a = rn(2)
        p = lcp_embedding(LinearOperator.identity(a), a.zero(), a.zero())
        sols = brute_force_hlcp(p.A, p.B, p.q)
        assert len(sols) == 1 and np.allclose(sols[0], 0)

    def test_graph_convention(self):
        a = rn(2)
        p = lcp_embedding(LinearOperator.identity(a), a.zero(), el(a, 1, -1))
        (x, y), = brute_force_hlcp(p.A, p.B, p.q)
        assert x.tolist() == [0, 1] and y.tolist() == [1, 0]

    def test_standard_convention(self):
        a = rn(2)
        p = lcp_embedding(LinearOperator.identity(a), a.zero(), el(a, 1, -1), convention="standard")
        (x, y), = brute_force_hlcp(p.A, p.B, p.q)
        assert x.tolist() == [1, 0] and y.tolist() == [0, 1]

    def test_unknown_convention(self):
        a = rn(1)
        with pytest.raises(InvalidInputError):
            lcp_embedding(LinearOperator.identity(a), a.zero(), a.zero(), convention="other")


class TestPairProblem:
    def test_weight_outside_cone(self):
        a = rn(1)
        ident = LinearOperator.identity(a)
        with pytest.raises(InvalidInputError):
            PairProblem(ident, ident, el(a, -1), a.e)

    def test_boundary_weight_tolerated(self):
        a = rn(1)
        ident = LinearOperator.identity(a)
        PairProblem(ident, ident, el(a, -1e-10), a.e)

    def test_algebra_mismatch(self):
        ident = LinearOperator.identity(rn(2))
        with pytest.raises(InvalidInputError):
            PairProblem(ident, ident, spin(2).e, rn(2).e)


def commuting_pair(rng, n):
    """Two polynomials in one random matrix."""
    g = rng.normal(size=(n, n))
    c = rng.normal(size=3)
    d = rng.normal(size=3)
    x = c[0] * np.eye(n) + c[1] * g + c[2] * g @ g
    y = d[0] * np.eye(n) + d[1] * g + d[2] * g @ g
    return x, y


def block_det_error(rng, n):
    a, b = rng.normal(size=(2, n, n))
    x, y = commuting_pair(rng, n)
    lhs = np.linalg.det(np.block([[a, -b], [x, y]]))
    rhs = np.linalg.det(a @ y + b @ x)
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


def test_block_determinant_formula(rng):
    errs = [block_det_error(rng, n) for n in range(2, 7) for _ in range(10)]
    assert max(errs) <= 1e-8
