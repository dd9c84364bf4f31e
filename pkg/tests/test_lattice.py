from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from divisor_workbench import surface
from divisor_workbench.lattice import (ClassVector, Lattice, LatticeMismatch, MissingStructure, class_from_terms,
                                       classes_equivalent, conjugate, pair, validate_lattice)

S5 = surface.build_S_elliptic(5)
K3 = surface.build_S_K3()
MODELS = {"S5": S5, "S8": surface.build_S_elliptic(8), "K3": K3}


def classes(model, lo=-3, hi=3):
    rank = model.lattice.rank
    return st.lists(st.integers(lo, hi), min_size=rank, max_size=rank).map(
        lambda c: ClassVector(model.lattice, tuple(c)))


class TestValidate:
    @pytest.mark.parametrize("name", sorted(MODELS))
    def test_builders_valid(self, name):
        report = validate_lattice(MODELS[name].lattice)
        assert report.ok, report.failures

    def test_perturbed_relation_names_basis_element(self):
        lat = S5.lattice
        r = list(lat.relations[0])
        r[lat.index("C1")] += 1
        report = validate_lattice(replace(lat, relations=(tuple(r),)))
        assert not report.ok
        assert any("C1" in f for f in report.failures)

    def test_asymmetric(self):
        lat = Lattice("bad", ("x", "y"), ((0, 1), (2, 0)))
        report = validate_lattice(lat)
        assert not report.ok and "symmetric" in report.failures[0]

    def test_bad_conjugation(self):
        lat = Lattice("q", ("x", "y"), ((0, 1), (1, 0)), conjugation=((1, 1), (1, 1)))
        assert not validate_lattice(lat).ok
        lat = Lattice("q", ("x", "y"), ((0, 1), (1, -1)), conjugation=((1, 1), (0, 1)))
        assert any("pairing" in f for f in validate_lattice(lat).failures)

    def test_canonical_must_be_fixed(self):
        lat = Lattice("q", ("x", "y"), ((0, 1), (1, 0)), canonical=(-2, -1), conjugation=((1, 1), (0, 1)))
        assert any("canonical" in f for f in validate_lattice(lat).failures)

    def test_duplicate_labels(self):
        assert not validate_lattice(Lattice("d", ("x", "x"), ((0, 0), (0, 0)))).ok


class TestPair:
    @pytest.mark.parametrize("n", range(5, 13))
    def test_kinv_c0(self, n):
        s = surface.build_S_elliptic(n)
        assert pair(s.anticanonical, s.cls("C0")) == 4 - n

    @pytest.mark.parametrize("n", range(5, 9))
    @pytest.mark.parametrize("m", [2, 3])
    def test_fixed_component_residual(self, n, m):
        s = surface.build_S_elliptic(n)
        residual = s.cls({"Kinv": 2 * m - 1, "C0": -1, "C1..4": -1, "Cbar0": -1, "Cbar1..4": -1})
        value = pair(residual, s.cls("C0"))
        assert value == 2 * ((1 - m) * n + (4 * m - 5))
        assert value < 0

    def test_zero(self):
        assert pair(S5.cls("C0"), S5.lattice.zero()) == 0

    def test_mismatch(self):
        with pytest.raises(LatticeMismatch):
            pair(S5.cls("C0"), K3.cls("C"))

    @given(st.data())
    def test_symmetric_bilinear(self, data):
        model = MODELS[data.draw(st.sampled_from(sorted(MODELS)))]
        a, b, c = (data.draw(classes(model)) for _ in range(3))
        k = data.draw(st.integers(-5, 5))
        assert pair(a, b) == pair(b, a)
        assert pair(a + k * b, c) == pair(a, c) + k * pair(b, c)

    @given(st.data())
    def test_relations_orthogonal(self, data):
        model = MODELS[data.draw(st.sampled_from(sorted(MODELS)))]
        x = data.draw(classes(model))
        for r in model.lattice.relation_classes():
            assert pair(r, x) == 0
            assert classes_equivalent(x + r, x)


class TestEquivalence:
    @pytest.mark.parametrize("n", range(5, 13))
    def test_C1_4_from_Kinv(self, n):
        s = surface.build_S_elliptic(n)
        assert classes_equivalent(s.cls({"f": 1, "C5..n": -2, "C0": -2}), s.cls("C1..4"))

    def test_k3(self):
        assert classes_equivalent(2 * K3.anticanonical, K3.cls({"C": 1, "Cbar": 1}))

    def test_reflexive_and_strict(self):
        d = S5.cls("C0")
        assert classes_equivalent(d, d)
        assert not classes_equivalent(d, S5.cls("Cbar0"))

    @given(st.data())
    def test_compatible_with_addition(self, data):
        model = S5
        a, b, c = (data.draw(classes(model)) for _ in range(3))
        k = data.draw(st.integers(-3, 3))
        rel = model.lattice.relation_classes()[0]
        a2 = a + k * rel
        assert classes_equivalent(a2, a) and classes_equivalent(a, a2)
        assert classes_equivalent(a2 + b, a + b)
        assert classes_equivalent(a + c, b + c) == classes_equivalent(a, b)


class TestConjugate:
    def test_examples(self):
        assert conjugate(S5.cls("C5")) == S5.cls("Cbar5")
        assert conjugate(conjugate(S5.cls({"C0": 2, "Cbar3": -1}))) == S5.cls({"C0": 2, "Cbar3": -1})
        assert classes_equivalent(conjugate(S5.K), S5.K)

    def test_missing(self):
        lat = Lattice("plain", ("x",), ((1,),))
        with pytest.raises(MissingStructure):
            conjugate(lat.basis_class("x"))

    @given(st.data())
    def test_preserves_pairing(self, data):
        model = MODELS[data.draw(st.sampled_from(sorted(MODELS)))]
        a, b = data.draw(classes(model)), data.draw(classes(model))
        assert pair(conjugate(a), conjugate(b)) == pair(a, b)
        assert conjugate(conjugate(a)) == a


def test_class_from_terms_forms():
    lat = S5.lattice
    assert class_from_terms(lat, "C0") == lat.basis_class("C0")
    assert class_from_terms(lat, [1] + [0] * (lat.rank - 1)) == lat.basis_class("C0")
    with pytest.raises(KeyError):
        class_from_terms(lat, "nope")
    assert str(S5.cls({"C0": 2, "C1": -1})) == "2C0 - C1"
