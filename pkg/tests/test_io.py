import json

import numpy as np
import pytest

from jordan_wlcp import (
    GenerationFailure,
    InvalidInputError,
    ParseError,
    ValidationError,
    generate_instance,
    is_p_pair,
    is_r0_pair,
    lyapunov_transform,
    parse_instance,
    report_to_dict,
    residuals,
    serialize_instance,
    solve,
    stein_transform,
)
from jordan_wlcp.io import load_instance, residuals_from_dict
from jordan_wlcp.checks import random_problem
from jordan_wlcp.algebra import product, rn, spin, sym

SCALAR = {"algebra": {"kind": "rn", "n": 1}, "A": [[1]], "B": [[1]], "w": [1], "q": [2]}


def sym2(**over):
    inst = {
        "algebra": {"kind": "sym", "n": 2},
        "A": {"builder": "lyapunov", "matrix": [[1, 0], [0, 2]]},
        "B": {"builder": "identity"},
        "w": [1, 1, 0],
        "q": [0, 0, 0],
    }
    inst.update(over)
    return inst


class TestParse:
    def test_scalar_solves(self):
        rep = solve(parse_instance(json.dumps(SCALAR)))
        assert rep.converged
        assert rep.x.coords[0] == pytest.approx(1, abs=1e-8)

    def test_lyapunov_builder(self):
        p = parse_instance(json.dumps(sym2()))
        assert np.array_equal(p.A.matrix, lyapunov_transform(np.diag([1.0, 2.0])).matrix)

    def test_stein_builder(self):
        p = parse_instance(json.dumps(sym2(A={"builder": "stein", "matrix": [[0.5, 0], [0, 0.5]]})))
        assert np.array_equal(p.A.matrix, stein_transform(0.5 * np.eye(2)).matrix)

    def test_negated_nested(self):
        p = parse_instance(json.dumps(sym2(A={"builder": "negated", "of": {"builder": "lyapunov", "matrix": [[1, 0], [0, 2]]}})))
        assert np.array_equal(p.A.matrix, -lyapunov_transform(np.diag([1.0, 2.0])).matrix)

    def test_negated_matrix(self):
        p = parse_instance(json.dumps({**SCALAR, "A": {"builder": "negated", "matrix": [[3]]}}))
        assert p.A.matrix.tolist() == [[-3]]

    def test_negative_weight(self):
        with pytest.raises(ValidationError):
            parse_instance(json.dumps({**SCALAR, "w": [-1]}))

    @pytest.mark.parametrize(
        "patch,path",
        [
            ({"A": [[1, 2]]}, "A[0]"),
            ({"A": [["x"]]}, "A[0][0]"),
            ({"q": [1, 2]}, "q"),
            ({"w": "one"}, "w"),
            ({"B": {"builder": "rotation"}}, "B.builder"),
            ({"B": {"builder": "lyapunov", "matrix": [[1]]}}, "B"),
            ({"algebra": {"kind": "spin", "n": 1}}, "algebra"),
            ({"metadata": {"k": 3}}, "metadata"),
            ({"w": [True]}, "w[0]"),
        ],
    )
    def test_schema_errors_carry_path(self, patch, path):
        with pytest.raises(ParseError) as info:
            parse_instance(json.dumps({**SCALAR, **patch}))
        assert info.value.path == path

    def test_missing_field(self):
        inst = dict(SCALAR)
        del inst["q"]
        with pytest.raises(ParseError) as info:
            parse_instance(json.dumps(inst))
        assert info.value.path == "q"

    def test_invalid_json(self):
        with pytest.raises(ParseError):
            parse_instance("{not json")

    def test_metadata_kept(self):
        _, meta = load_instance({**SCALAR, "metadata": {"source": "unit"}})
        assert meta == {"source": "unit"}


class TestRoundTrip:
    @pytest.mark.parametrize("alg", [rn(3), spin(4), sym(3), product(rn(1), sym(2))], ids=str)
    def test_bit_exact(self, alg, rng):
        p = random_problem(alg, rng)
        back = parse_instance(serialize_instance(p, {"note": "x"}))
        for name in "ABwq":
            orig = getattr(p, name)
            new = getattr(back, name)
            a = orig.matrix if hasattr(orig, "matrix") else orig.coords
            b = new.matrix if hasattr(new, "matrix") else new.coords
            assert a.tobytes() == b.tobytes()
        assert back.algebra.descriptor == alg.descriptor


class TestReport:
    def test_fields(self):
        rep = solve(parse_instance(json.dumps(SCALAR)))
        d = report_to_dict(rep, {"r0": True, "degree": None, "p_pair": False})
        assert d["status"] == "converged"
        assert set(d["residuals"]) == {"comp", "lin", "cone"}
        assert d["classification"]["degree"] is None

    def test_residuals_match_recomputation(self, rng):
        from jordan_wlcp import Element

        p = random_problem(sym(2), rng)
        rep = solve(p)
        d = json.loads(json.dumps(report_to_dict(rep)))
        alg = p.algebra
        again = residuals(Element(alg, d["x"]), Element(alg, d["y"]), p)
        stored = residuals_from_dict(d["residuals"])
        assert abs(again.comp_residual - stored.comp_residual) <= 1e-12
        assert abs(again.lin_residual - stored.lin_residual) <= 1e-12
        assert abs(again.cone_violation - stored.cone_violation) <= 1e-12


class TestGenerate:
    def test_ppair_scalar(self):
        inst = generate_instance("ppair", 1, 5)
        assert inst["A"][0][0] < 0 and inst["B"] == [[1.0]]

    @pytest.mark.parametrize("seed", range(10))
    def test_ppair_is_p_pair(self, seed):
        inst = generate_instance("ppair", 4, seed)
        assert is_p_pair(np.array(inst["A"]), np.array(inst["B"]))

    @pytest.mark.parametrize("seed", range(10))
    def test_r0_is_r0(self, seed):
        inst = generate_instance("r0", 3, seed)
        assert is_r0_pair(np.array(inst["A"]), np.array(inst["B"]))

    def test_deterministic(self):
        assert generate_instance("random", 3, 4) == generate_instance("random", 3, 4)
        assert generate_instance("random", 3, 4) != generate_instance("random", 3, 5)

    def test_weight_nonnegative(self):
        for seed in range(5):
            assert min(generate_instance("random", 5, seed)["w"]) >= 0

    def test_parses(self):
        parse_instance(json.dumps(generate_instance("r0", 2, 0)))

    def test_bad_kind(self):
        with pytest.raises(InvalidInputError):
            generate_instance("psd", 2, 0)

    def test_budget_exhausted(self, monkeypatch):
        import jordan_wlcp.io as io_mod

        monkeypatch.setattr(io_mod, "is_r0_pair", lambda a, b: False)
        with pytest.raises(GenerationFailure):
            generate_instance("r0", 2, 0)
