from fractions import Fraction

import pytest
import sympy

from bochner_vop import catalog, classical
from bochner_vop.catalog import ParamSpec, Preset
from bochner_vop.errors import InvalidParam, MissingParam, UnknownPreset
from bochner_vop.exact import Poly, newton_interpolate
from bochner_vop.family import Kind, generate, verify_family
from bochner_vop.recurrence import extract, fit, infer_d

from conftest import SX, sympy_family, sympy_to_poly

n_ = Poly.x()


def form_of(name, params=None, max_n=None):
    spec = catalog.instantiate(name, params, max_n)
    fam = generate(spec)
    return spec, fam, fit(extract(fam))


def as_dict(form):
    return {j: p for j, p in enumerate(form.gamma_polys) if not p.is_zero()}


def nonzero(rec):
    return {j: p for j, p in rec.items() if not p.is_zero()}


class TestInstantiate:
    def test_hermite(self):
        spec = catalog.instantiate("hermite")
        assert spec.kind is Kind.CONTINUOUS
        assert spec.R == Poly([1]) and spec.q == Poly([0, 0, Fraction(-1, 2)])

    def test_gould_hopper(self):
        spec = catalog.instantiate("gould_hopper", {"rho": "1/3", "l": 3})
        assert spec.R == Poly([1]) and spec.q == Poly.monomial(3, Fraction(1, 3))

    def test_meixner(self):
        spec = catalog.instantiate("meixner", {"beta": 2, "c": "1/2"})
        # mu = c/(1-c) = 1
        assert spec.kind is Kind.DISCRETE
        assert spec.R == Poly([2, 1]) and spec.q == Poly([0, 1])

    def test_appell_coefficients(self):
        spec = catalog.instantiate("appell", {"q1": 1, "q3": "-1/3"})
        assert spec.q == Poly([0, 1, 0, Fraction(-1, 3)])
        assert catalog.instantiate("appell").q == Poly([0, 0, Fraction(-1, 2)])

    def test_kravchuk_cap(self):
        assert catalog.instantiate("kravchuk", max_n=20).max_n == 6
        assert catalog.instantiate("kravchuk_kls", {"N": 4}).max_n == 4

    def test_default_size_is_fit_ready(self):
        for name in catalog.names():
            assert catalog.instantiate(name).max_n >= 4

    def test_explicit_size(self):
        assert catalog.instantiate("hermite", max_n=0).max_n == 0

    def test_name_recorded(self):
        assert catalog.instantiate("m2").name == "m2"


class TestErrors:
    def test_unknown(self):
        with pytest.raises(UnknownPreset) as info:
            catalog.instantiate("jacobi")
        assert str(info.value).startswith("unknown preset 'jacobi'")

    @pytest.mark.parametrize(
        "name, params",
        [
            ("meixner", {"c": 1}),
            ("meixner", {"c": 0}),
            ("meixner_kls", {"c": 1}),
            ("laguerre", {"beta": 1}),
            ("laguerre", {"alpha": 0.5}),
            ("laguerre", {"alpha": "x"}),
            ("kravchuk", {"N": "5/2"}),
            ("kravchuk", {"N": 0}),
            ("kravchuk", {"p": 1}),
            ("kravchuk_kls", {"p": 0}),
            ("gould_hopper", {"rho": 0}),
            ("gould_hopper", {"l": 0}),
            ("charlier", {"a": 0}),
            ("appell", {"q0": 1}),
            ("appell", {"q2": 0}),
        ],
    )
    def test_invalid(self, name, params):
        with pytest.raises(InvalidParam):
            catalog.instantiate(name, params)

    def test_missing(self):
        preset = Preset(
            name="bare",
            kind=Kind.CONTINUOUS,
            params=(ParamSpec("a"),),
            build=lambda v: (Poly([1]), Poly([0, v["a"]])),
            provenance="test only",
        )
        with pytest.raises(MissingParam):
            preset.resolve({})
        assert preset.resolve({"a": "2"}) == {"a": 2}


class TestDefaults:
    @pytest.mark.parametrize("name", catalog.names())
    def test_pipeline(self, name):
        spec, fam, form = form_of(name)
        assert verify_family(fam).passed
        assert infer_d(form, spec) >= 0

    @pytest.mark.parametrize(
        "name", [n for n in catalog.names() if catalog.get(n).reference_recurrence is not None]
    )
    def test_reference_recurrence(self, name):
        _, _, form = form_of(name)
        assert as_dict(form) == nonzero(catalog.reference_recurrence(name))

    @pytest.mark.parametrize(
        "name, params",
        [
            ("laguerre", {"alpha": "5/3"}),
            ("ex2_2", {"beta": "-1/2"}),
            ("ex3_1", {"alpha": -1, "beta": "1/2"}),
            ("meixner", {"beta": 3, "c": "1/4"}),
            ("kravchuk_kls", {"N": 12, "p": "3/4"}),
            ("discrete_hermite", {"a": "-2/3"}),
            ("gould_hopper", {"rho": 2, "l": 2}),
        ],
    )
    def test_reference_recurrence_off_default(self, name, params):
        _, _, form = form_of(name, params)
        assert as_dict(form) == nonzero(catalog.reference_recurrence(name, params))

    def test_listing(self):
        rows = catalog.listing()
        assert [r["name"] for r in rows] == catalog.names()
        assert all(r["provenance"] for r in rows)

    def test_show(self):
        data = catalog.show("laguerre", {"alpha": 2}, 5)
        assert data["spec"]["R"] == ["-3", "-1"] and data["spec"]["max_n"] == 5
        assert data["preset"]["parameters"][0]["name"] == "alpha"


class TestLaguerreInAlpha:
    def test_coefficients_linear_in_alpha(self):
        alphas = [Fraction(0), Fraction(1, 2), Fraction(2)]
        forms = [form_of("laguerre", {"alpha": a}, 25)[2] for a in alphas]
        width = max(len(f.gamma_polys) for f in forms)
        for j in range(width):
            deg = max(f.gamma(j).degree for f in forms)
            for k in range(deg + 1):
                pts = [(a, f.gamma(j).coeff(k)) for a, f in zip(alphas, forms)]
                # the line through two alphas predicts the third
                line = newton_interpolate(pts[:2])
                assert line.degree <= 1 and line(alphas[2]) == pts[2][1]
        # gamma_0 = 2n + alpha + 1, gamma_1 = n(n + alpha)
        assert forms[1].gamma(0) == n_.scale(2) + Fraction(3, 2)
        assert forms[2].gamma(1) == n_ * (n_ + 2)


class TestPublishedDisplays:
    def test_ex2_2_gamma1(self):
        _, _, form = form_of("ex2_2", {"beta": 1})
        published = catalog.published_recurrence("ex2_2", {"beta": 1})
        assert form.gamma(1) != published[1]
        assert form.gamma(3) == published[3]
        assert form.gamma(1) == -(n_ * n_ * (n_.scale(2)))

    def test_ex2_2_agrees_at_beta_zero(self):
        _, _, form = form_of("ex2_2", {"beta": 0})
        assert as_dict(form) == nonzero(catalog.published_recurrence("ex2_2", {"beta": 0}))

    def test_m2(self):
        spec, _, form = form_of("m2")
        published = catalog.published_recurrence("m2")
        assert 4 in published and infer_d(form, spec) == 3
        assert form.gamma(0) == n_
        assert form.gamma(1) == -(n_ * n_ * n_).scale(2)
        sq = (n_ * (n_ - 1)) ** 2
        assert form.gamma(2) == -sq
        assert form.gamma(3) == sq * (n_ - 2) ** 2

    def test_discrete_hermite(self):
        _, _, form = form_of("discrete_hermite", {"a": 1})
        published = catalog.published_recurrence("discrete_hermite", {"a": 1})
        assert form.gamma(0) == published[0] and form.gamma(2) == published[2]
        assert form.gamma(1) == n_.scale(-2) != published[1]

    def test_kravchuk_literal_degeneracy(self):
        _, _, form = form_of("kravchuk")
        assert form.gamma(0) == Poly([6, -1])
        assert form.gamma(1).is_zero()


class TestComputedValues:
    def test_ex2_2(self):
        # computed P_2 = x^2 + beta(1 + beta), half the published constant
        for beta in (Fraction(1), Fraction(3, 2)):
            fam = generate(catalog.instantiate("ex2_2", {"beta": beta}, 4))
            ref = sympy_family("continuous", [beta, 1], [0, 0, "1/2"], 4)
            assert [sympy_to_poly(e) for e in ref] == list(fam.polys)
            assert fam.polys[2] == Poly([beta * (1 + beta), 0, 1])

    def test_ex3_2(self):
        fam = generate(catalog.instantiate("ex3_2", max_n=4))
        assert fam.polys[2] == Poly([4, 0, 1])
        assert fam.polys[3] == Poly([0, 108, 0, 1])
        assert fam.polys[4] == Poly([1728, 0, 864, 0, 1])
        ref = sympy_family("continuous", [1, 2, 1], [0, 0, "1/2"], 4)
        assert [sympy_to_poly(e) for e in ref] == list(fam.polys)

    def test_m2(self):
        fam = generate(catalog.instantiate("m2", max_n=4))
        assert fam.falling_factorial(3) == Poly([0, 18, 0, 1])
        assert fam.falling_factorial(4) == Poly([72, 0, 72, 0, 1])
        ref = sympy_family("discrete", [1, 1], [0, 0, "1/2"], 4)
        assert [sympy_to_poly(e) for e in ref] == list(fam.polys)

    def test_charlier_variants(self):
        a = Fraction(3, 2)
        plain = generate(catalog.instantiate("charlier", {"a": a}, 6))
        neg = generate(catalog.instantiate("charlier_neg", {"a": a}, 6))
        assert plain.polys == neg.polys
        signed = catalog.signed_polys("charlier_neg", neg.polys)
        rising = sympy_family("discrete", [-a], [0, 1], 6, basis=lambda n: sympy.rf(-SX, n))
        assert [sympy_to_poly(e) for e in rising] == signed
        assert catalog.signed_polys("charlier", plain.polys) == list(plain.polys)
        assert list(plain.polys) == [classical.charlier(n, a) for n in range(7)]

    def test_meixner_conventions(self):
        beta, c = Fraction(2), Fraction(1, 3)
        kls = generate(catalog.instantiate("meixner_kls", {"beta": beta, "c": c}, 6))
        lit = generate(catalog.instantiate("meixner", {"beta": beta, "c": c}, 6))
        target = [classical.meixner(n, beta, c) for n in range(7)]
        assert list(kls.polys) == target
        assert list(lit.polys) != target

    def test_kravchuk_kls(self):
        fam = generate(catalog.instantiate("kravchuk_kls", {"N": 8, "p": "1/4"}))
        assert list(fam.polys) == [classical.kravchuk(n, Fraction(1, 4), 8) for n in range(9)]

    def test_shifted_monomials(self):
        fam = generate(catalog.instantiate("shifted_monomials", {"a": -2}, 6))
        assert list(fam.polys) == [Poly([-2, 1]) ** n for n in range(7)]
