import math

import numpy as np
import pytest

from jordan_wlcp import (
    Element,
    InvalidInputError,
    LinearOperator,
    PairProblem,
    fb_map,
    min_map,
    product,
    residuals,
    rn,
    spin,
    sym,
    weighted_fb_map,
)
from jordan_wlcp.checks import homotopy_suite, min_map_suite, random_element

ALGEBRAS = [rn(5), spin(5), sym(4), product(rn(2), spin(3))]


def el(alg, *coords):
    return Element(alg, np.array(coords, dtype=float))


def scalar_problem(a=1.0, b=1.0, w=1.0, q=2.0):
    alg = rn(1)
    return PairProblem(
        LinearOperator(alg, [[a]]), LinearOperator(alg, [[b]]), el(alg, w), el(alg, q)
    )


class TestMinMap:
    def test_componentwise(self):
        a = rn(2)
        assert min_map(el(a, 1, 3), el(a, 2, 1)).coords.tolist() == [1, 1]

    @pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
    def test_self(self, alg, rng):
        x = random_element(alg, rng)
        assert np.allclose(min_map(x, x).coords, x.coords)

    def test_unit_against_zero(self):
        a = spin(3)
        assert np.allclose(min_map(a.e, a.zero()).coords, 0)

    def test_mismatch(self):
        with pytest.raises(InvalidInputError):
            min_map(rn(2).e, spin(2).e)


class TestFischerBurmeister:
    def test_zero_second_argument(self):
        a = rn(2)
        assert fb_map(el(a, 1, 2), a.zero()).coords.tolist() == [0, 0]

    def test_negative(self):
        assert fb_map(el(rn(1), -1), el(rn(1), 0)).coords.tolist() == [-2]

    def test_orthogonal_projections(self):
        a = sym(2)
        e11 = Element(a, a.to_coords(np.diag([1.0, 0.0])))
        e22 = Element(a, a.to_coords(np.diag([0.0, 1.0])))
        assert np.allclose(fb_map(e11, e22).coords, 0)


class TestWeightedFB:
    def test_exact_weight(self):
        a = rn(2)
        assert np.allclose(weighted_fb_map(el(a, 2, 1), el(a, 3, 4), el(a, 6, 4)).coords, 0)

    @pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
    def test_zero_weight_is_fb(self, alg, rng):
        x, y = random_element(alg, rng), random_element(alg, rng)
        assert np.allclose(weighted_fb_map(x, y, alg.zero()).coords, fb_map(x, y).coords)

    def test_scalar(self):
        a = rn(1)
        out = weighted_fb_map(a.e, a.e, a.zero())
        assert out.coords[0] == pytest.approx(2 - math.sqrt(2))

    def test_weight_outside_cone(self):
        a = rn(1)
        with pytest.raises(InvalidInputError):
            weighted_fb_map(a.e, a.e, el(a, -1))


class TestResiduals:
    def test_exact(self):
        p = scalar_problem()
        r = residuals(p.algebra.e, p.algebra.e, p)
        assert (r.comp_residual, r.lin_residual, r.cone_violation) == (0, 0, 0)

    def test_off_solution(self):
        p = scalar_problem()
        two = el(p.algebra, 2)
        r = residuals(two, two, p)
        assert (r.comp_residual, r.lin_residual, r.cone_violation) == (3, 2, 0)

    def test_cone_violation(self):
        p = scalar_problem()
        r = residuals(el(p.algebra, -0.5), el(p.algebra, 2), p)
        assert r.cone_violation == 0.5

    def test_dict_keys(self):
        p = scalar_problem()
        assert set(residuals(p.algebra.e, p.algebra.e, p).to_dict()) == {"comp", "lin", "cone"}


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_min_map_suite(alg, rng):
    failed = [r.line() for r in min_map_suite(alg, rng, trials=40) if not r.passed]
    assert not failed


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_homotopy_suite(alg, rng):
    failed = [r.line() for r in homotopy_suite(alg, rng, trials=40) if not r.passed]
    assert not failed
