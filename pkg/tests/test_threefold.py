from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from divisor_workbench import surface, threefold as tf
from divisor_workbench.lattice import classes_equivalent, pair, validate_lattice
from divisor_workbench.surface import Unsupported
from generators import curve_tower
from oracles import chi_curve_blowup, twistor_triple


def neg_alpha(r):
    return r.cls({f"a{i}": -1 for i in range(5, r.twistor.n + 1)})


class TestTwistorRing:
    @pytest.mark.parametrize("n", [5, 7, 12])
    def test_rules(self, n):
        z = tf.build_twistor_ring(n)
        assert z.triple(z.cls("F"), z.cls("F"), z.cls("F")) == 8 - 2 * n
        assert z.triple(z.cls("a5"), z.cls("a5"), z.cls("F")) == -2
        assert z.triple(z.cls("a5"), z.cls("a5"), z.c1_class) == -4
        assert z.triple(z.cls("a5"), z.cls("F"), z.cls("F")) == 0
        if n >= 7:
            assert z.triple(z.cls("a5"), z.cls("a6"), z.cls("a7")) == 0
        assert z.c2_dot(z.cls("F")) == 12 and z.c2_dot(z.cls("a1")) == 0
        assert tf.c1c2(z) == 24

    def test_needs_positive_n(self):
        with pytest.raises(ValueError):
            tf.build_twistor_ring(0)

    @given(st.integers(1, 6), st.data())
    def test_symmetric_and_matches_oracle(self, n, data):
        z = tf.build_twistor_ring(n)
        vec = st.lists(st.integers(-4, 4), min_size=n + 1, max_size=n + 1)
        x, y, w = (data.draw(vec) for _ in range(3))
        values = {z.triple(*p) for p in permutations((x, y, w))}
        assert values == {twistor_triple(n, x, y, w)}

    def test_rr3_examples(self):
        for n in range(5, 13):
            z = tf.build_twistor_ring(n)
            assert tf.rr3_chi(z, neg_alpha(z)) == 5 - n
            assert tf.rr3_chi(z, z.zero()) == 1
            assert tf.rr3_chi(z, z.cls("F")) == 10 - 2 * n
            assert isinstance(tf.rr3_chi(z, z.cls("F")), Fraction)


class TestBlowup:
    @pytest.mark.parametrize("n", range(5, 13))
    @pytest.mark.parametrize("branch", ["F0", "F2"])
    def test_products(self, n, branch):
        z = tf.build_twistor_ring(n)
        z1 = tf.blowup_along_curve(z, tf.curve_C0(n), tf.splittings_C0(n)[branch], "E0")
        e = z1.cls("E0")
        assert z1.triple(e, e, e) == 2 * (n - 3)
        assert z1.triple(e, e, z1.cls("F")) == n - 4
        assert z1.triple(z1.cls("F"), z1.cls("F"), e) == 0
        assert tf.rr3_chi(z1, z1.pullback(neg_alpha(z)) - e) == 0
        assert tf.c1c2(z1) == 24
        assert tf.exceptional_self_intersection_in_divisor(z1, "E0") == 2 * (2 - n)

    @pytest.mark.parametrize("n, want", [(5, -6), (6, -8)])
    def test_self_intersection_examples(self, n, want):
        z1 = tf.blowup_along_curve(tf.build_twistor_ring(n), tf.curve_C0(n), (3 - n, 3 - n), "E0")
        assert tf.exceptional_self_intersection_in_divisor(z1, "E0") == want

    def test_bad_splitting(self):
        z = tf.build_twistor_ring(5)
        with pytest.raises(ValueError):
            tf.blowup_along_curve(z, tf.curve_C0(5), (0, 0))
        with pytest.raises(ValueError):
            tf.blowup_along_curve(z, tf.curve_C0(5), (-1, -3))

    def test_duplicate_label(self):
        z1 = tf.blowup_C0_pair(5, (-2, -2))
        with pytest.raises(ValueError):
            tf.blowup_along_curve(z1, tf.curve_C0(5), (-2, -2), "E0")

    def test_missing_exceptional(self):
        with pytest.raises(KeyError):
            tf.exceptional_self_intersection_in_divisor(tf.build_twistor_ring(5), "E0")

    def test_normal_bundle_degrees(self):
        z = tf.build_twistor_ring(6)
        assert tf.normal_bundle_degree(z, tf.curve_C0(6)) == -6
        assert tf.normal_bundle_degree(z, tf.CurveData("l", 0, {"F": 2})) == 2
        assert tf.normal_bundle_degree(z, tf.CurveData("el", 1, {})) == 0

    def test_chi_after_blowup_examples(self):
        for n in range(5, 13):
            assert tf.chi_after_blowup(5 - n, 4 - n, 0) == 0
        assert tf.chi_after_blowup(Fraction(7, 2), 0, 1) == Fraction(7, 2)

    def test_unknown_generator(self):
        z = tf.build_twistor_ring(5)
        with pytest.raises(KeyError):
            tf.normal_bundle_degree(z, tf.CurveData("c", 0, {"a9": 1}))

    @given(st.randoms(use_true_random=False))
    def test_rr1_and_c1c2(self, rnd):
        ring, curve, split, L = curve_tower(rnd)
        ext = tf.blowup_along_curve(ring, curve, split, "X0")
        got = tf.rr3_chi(ext, ext.pullback(L) - ext.cls("X0"))
        assert got == chi_curve_blowup(tf.rr3_chi(ring, L), curve.degree(ring, L), curve.genus)
        assert got == tf.chi_after_blowup(tf.rr3_chi(ring, L), curve.degree(ring, L), curve.genus)
        assert tf.c1c2(ext) == tf.c1c2(ring) == 24


class TestExceptionalRestriction:
    @pytest.mark.parametrize("n", range(5, 13))
    def test_branches(self, n):
        for branch, (a, b) in tf.splittings_C0(n).items():
            z2 = tf.blowup_C0_pair(n, (a, b))
            r = lambda terms: tf.exceptional_restriction(z2, "E0", z2.cls(terms))  # noqa: E731
            two_f = r({"F": 2, "E0": -1, "E0bar": -1})
            one_f = r({"F": 1, "E0": -1, "E0bar": -1})
            l1 = r({"F": 2, "E0": -2, "E0bar": -2})
            if branch == "F0":
                assert two_f.bidegree() == (1, 5 - n)
                assert one_f.bidegree() == (1, 1)
            else:
                assert (two_f.e, two_f.A, two_f.fib) == (2, 1, -(n - 6))
                assert (one_f.A, one_f.fib) == (1, 2)
            assert l1 == tf.HirzebruchClass.anticanonical(b - a)

    def test_meeting_exceptional_is_unsupported(self):
        z = tf.build_twistor_ring(5)
        z1 = tf.blowup_along_curve(z, tf.curve_C0(5), (-2, -2), "E0")
        c = tf.CurveData("D", 0, {"F": 1, "E0": 1})
        deg = tf.normal_bundle_degree(z1, c)
        z2 = tf.blowup_along_curve(z1, c, (deg // 2, deg - deg // 2), "E1")
        with pytest.raises(Unsupported):
            tf.exceptional_restriction(z2, "E0", z2.cls({"E0": 1, "E1": 1}))

    def test_hirzebruch_pairing(self):
        k = tf.HirzebruchClass.anticanonical(2)
        assert k.dot(k) == 8
        with pytest.raises(ValueError):
            k.bidegree()


class TestRestriction:
    @pytest.mark.parametrize("n", range(5, 13))
    def test_elliptic(self, n):
        z, s = tf.build_twistor_ring(n), surface.build_S_elliptic(n)
        x = tf.restrict_to_surface(z, tf.divisor_X(z), s)
        assert classes_equivalent(x - 2 * s.cls("C0"), s.cls("C1..4"))
        assert pair(x, s.cls("Cbar0")) == 0
        assert pair(tf.restrict_to_surface(z, z.cls("a5"), s), s.cls("C0")) == 1

    def test_k3(self):
        z, s = tf.build_twistor_ring(5), surface.build_S_K3()
        assert classes_equivalent(tf.restrict_to_surface(z, tf.divisor_X(z), s), s.cls("C"))

    def test_undeclared_generator(self):
        z, s = tf.build_twistor_ring(5), surface.build_S_elliptic(5)
        with pytest.raises(KeyError):
            tf.restrict_to_surface(z, z.cls("a1"), s)
        img = tf.restrict_to_surface(z, z.cls("a1"), s, {"a1": s.cls({"C1": 1, "Cbar1": -1})})
        assert img == s.cls({"C1": 1, "Cbar1": -1})


class TestHomology:
    @pytest.mark.parametrize("n", range(5, 13))
    def test_zero(self, n):
        assert tf.homology_zero_check(tf.build_twistor_ring(n))

    def test_perturbed(self):
        assert not tf.homology_zero_check(tf.TwistorRing(5, 0))

    @pytest.mark.parametrize("n", [5, 8])
    def test_h2_lattice(self, n):
        lat = tf.h2_lattice(tf.build_twistor_ring(n))
        assert validate_lattice(lat).ok
