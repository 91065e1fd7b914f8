import dataclasses
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from bochner_vop import catalog, classical
from bochner_vop.errors import RodriguesMismatch, SpecError
from bochner_vop.exact import Poly
from bochner_vop.family import (
    Family,
    FamilySpec,
    Kind,
    build_operators,
    check_eigen,
    check_ladder,
    check_operator_identities,
    check_rodrigues,
    generate,
    rodrigues,
    verify_family,
)
from bochner_vop.opalg import DIFF, OperatorExpr, apply

from conftest import polys_of_degree, small_rationals

C, D = Kind.CONTINUOUS, Kind.DISCRETE


def spec(kind, R, q, max_n=8):
    return FamilySpec(kind, Poly(R), Poly(q), max_n)


def diff_op(*coeffs_by_order):
    return OperatorExpr(DIFF, tuple((k, Poly(c)) for k, c in enumerate(coeffs_by_order)))


class TestSpec:
    @pytest.mark.parametrize(
        "R, q, max_n",
        [
            ([], [0, 1], 3),  # R == 0
            ([1], [], 3),  # q == 0
            ([1], [5], 3),  # constant q
            ([1], [1, 1], 3),  # q(0) != 0
            ([1], [0, 1], -1),
        ],
    )
    def test_rejected(self, R, q, max_n):
        with pytest.raises(SpecError):
            spec(C, R, q, max_n)

    def test_bool_max_n_rejected(self):
        with pytest.raises(SpecError):
            FamilySpec(C, Poly([1]), Poly([0, 1]), True)

    def test_kind_from_string(self):
        assert FamilySpec("discrete", Poly([1]), Poly([0, 1]), 2).kind is D

    def test_json_roundtrip(self):
        s = spec(D, [Fraction(1, 2), 1], [0, 0, Fraction(-1, 3)], 5)
        assert FamilySpec.from_json(s.to_json()) == s

    @pytest.mark.parametrize(
        "data",
        [
            {"R": ["1"], "q": ["0", "1"], "max_n": 3},
            {"realization": "lattice", "R": ["1"], "q": ["0", "1"], "max_n": 3},
            {"realization": "continuous", "q": ["0", "1"], "max_n": 3},
            {"realization": "continuous", "R": ["1/0"], "q": ["0", "1"], "max_n": 3},
            {"realization": "continuous", "R": ["1"], "q": ["2", "1"], "max_n": 3},
            {"realization": "continuous", "R": ["x"], "q": ["0", "1"], "max_n": 3},
        ],
    )
    def test_bad_json(self, data):
        with pytest.raises(SpecError):
            FamilySpec.from_json(data)


class TestOperators:
    def test_hermite_L(self):
        ops = build_operators(spec(C, [1], [0, 0, Fraction(-1, 2)]))
        # -d^2 + x d
        assert ops.L == diff_op([], [0, 1], [-1])

    def test_laguerre_L(self):
        alpha = Fraction(3, 2)
        ops = build_operators(spec(C, [-(alpha + 1), -1], [0, 1]))
        # -x d^2 - (alpha + 1 - x) d
        assert ops.L == diff_op([], [-(alpha + 1), 1], [0, -1])

    def test_ex3_1_L(self):
        a, b = Fraction(1), Fraction(2)
        ops = build_operators(spec(C, [b, a, 1], [0, 1]))
        # (H^2 + a H + b) d + H = x^2 d^3 + (1 + a) x d^2 + (x + b) d
        assert ops.L == diff_op([], [b, 1], [0, 1 + a], [0, 0, 1])

    def test_continuous_sigma_x_is_M(self):
        ops = build_operators(spec(C, [1, 1], [0, 1]))
        assert ops.sigma_x == ops.M


class TestGenerate:
    def test_hermite_values(self):
        fam = generate(spec(C, [1], [0, 0, Fraction(-1, 2)], 4))
        assert fam.polys[3] == Poly([0, -3, 0, 1])
        assert fam.polys[4] == Poly([3, 0, -6, 0, 1])

    def test_charlier_p1(self):
        a = Fraction(5, 2)
        fam = generate(spec(D, [-a], [0, 1], 3))
        assert fam.polys[1] == Poly([-a, 1])

    def test_single_term(self):
        fam = generate(spec(D, [1], [0, 1], 0))
        assert fam.N == 0 and fam.polys == (Poly([1]),)
        assert verify_family(fam).passed

    def test_discrete_falling_factorial_view(self):
        fam = generate(spec(D, [-1], [0, 1], 3))
        # C_1 = x - a in either basis
        assert fam.falling_factorial(1) == Poly([-1, 1])
        rows = fam.to_json()["polynomials"]
        assert "falling_factorial" in rows[2]

    def test_jobs_agree(self):
        s = spec(D, [1, 2], [0, 0, Fraction(1, 2)], 10)
        assert generate(s, jobs=2).polys == generate(s).polys

    @pytest.mark.parametrize(
        "name, oracle",
        [
            ("hermite", lambda v, n: classical.hermite(n)),
            ("laguerre", lambda v, n: classical.laguerre(n, v["alpha"])),
            ("charlier", lambda v, n: classical.charlier(n, v["a"])),
            ("meixner_kls", lambda v, n: classical.meixner(n, v["beta"], v["c"])),
            ("kravchuk_kls", lambda v, n: classical.kravchuk(n, v["p"], int(v["N"]))),
        ],
    )
    @pytest.mark.parametrize("params", [None, "alt"])
    def test_classical_oracles(self, name, oracle, params):
        alt = {
            "hermite": {},
            "laguerre": {"alpha": "-1/3"},
            "charlier": {"a": "7/2"},
            "meixner_kls": {"beta": "3/2", "c": "1/3"},
            "kravchuk_kls": {"N": "7", "p": "2/5"},
        }
        chosen = None if params is None else alt[name]
        values = catalog.get(name).resolve(chosen)
        fam = generate(catalog.instantiate(name, chosen, max_n=7))
        for n, p in enumerate(fam.polys):
            assert p == oracle(values, n)


class TestVerification:
    @pytest.mark.parametrize("name", catalog.names())
    def test_catalog_defaults_verify(self, name):
        fam = generate(catalog.instantiate(name))
        report = verify_family(fam)
        assert report.passed, report.to_json()

    def test_discrete_sigma_x(self):
        fam = generate(spec(D, [1, 1], [0, 0, 1], 8))
        for n in range(fam.N):
            assert apply(fam.ops.sigma_x, fam.polys[n]) == fam.polys[n + 1] + fam.polys[n].scale(n)
        assert check_operator_identities(fam).passed

    def test_report_shape(self):
        fam = generate(spec(C, [1], [0, 1], 3))
        data = verify_family(fam).to_json()
        names = [c["name"] for c in data["checks"]]
        assert {"eigen", "lowering", "raising", "rodrigues", "sigma_H"} <= set(names)
        assert data["passed"] is True

    def test_rodrigues_limit(self):
        fam = generate(spec(C, [1], [0, 1], 6))
        assert check_rodrigues(fam, upto=3)["rodrigues"].checked == 4
        assert rodrigues(fam, 6) == fam.polys[6]
        with pytest.raises(ValueError):
            rodrigues(fam, 7)


class TestTampering:
    @pytest.fixture
    def tampered(self) -> Family:
        fam = generate(spec(C, [1], [0, 0, Fraction(-1, 2)], 6))
        polys = list(fam.polys)
        polys[3] = polys[3] + Poly([1])
        return dataclasses.replace(fam, polys=tuple(polys))

    def test_eigen_detects(self, tampered):
        res = check_eigen(tampered)["eigen"]
        assert not res.passed and res.first_failure == 3

    def test_ladder_detects(self, tampered):
        rep = check_ladder(tampered)
        # d kills the added constant, so G P_3 is still right; G P_4 = 4 P_3 is not
        assert rep["lowering"].first_failure == 4
        assert rep["raising"].first_failure == 2

    def test_rodrigues_detects(self, tampered):
        assert check_rodrigues(tampered)["rodrigues"].first_failure == 3
        with pytest.raises(RodriguesMismatch):
            rodrigues(tampered, 3)

    def test_overall(self, tampered):
        assert not verify_family(tampered).passed


@st.composite
def random_specs(draw, kind):
    d = draw(st.integers(0, 3))
    l = draw(st.integers(1, 3))
    R = draw(polys_of_degree(d))
    q_body = draw(st.lists(small_rationals(), min_size=l - 1, max_size=l - 1))
    q_top = draw(small_rationals(nonzero=True))
    return FamilySpec(kind, R, Poly([0] + q_body + [q_top]), 20)


class TestRandomFamilies:
    @pytest.mark.parametrize("kind", [C, D])
    def test_verify(self, kind):
        @given(random_specs(kind))
        @settings(max_examples=6, deadline=None, suppress_health_check=[HealthCheck.too_slow])
        def inner(s):
            fam = generate(s)
            assert all(p.degree == n and p.is_monic() for n, p in enumerate(fam.polys))
            assert verify_family(fam).passed

        inner()
