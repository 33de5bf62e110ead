import itertools
import math

import pytest

from conftest import all_elements
from coxproper.core import build_standard
from coxproper.engine import GeometricRepresentation, GoldenInt, GroupElement, PHI
from coxproper.errors import InternalError, ParameterError, UnsupportedTypeError


def engine(text):
    return GeometricRepresentation(build_standard(text))


class TestGoldenInt:
    def test_ring_ops(self):
        a, b = GoldenInt(1, 2), GoldenInt(3, -1)
        assert a + b == GoldenInt(4, 1)
        assert a - b == GoldenInt(-2, 3)
        # (a + b*phi)(c + d*phi) = ac + bd + (ad + bc + bd)*phi
        assert a * b == GoldenInt(3 - 2, -1 + 6 - 2)
        assert PHI * PHI == GoldenInt(1, 1)  # phi^2 = phi + 1
        assert 2 * PHI == GoldenInt(0, 2)
        assert -a == GoldenInt(-1, -2)

    def test_sign_against_float(self):
        phi = (1 + math.sqrt(5)) / 2
        for a in range(-12, 13):
            for b in range(-12, 13):
                expected = a + b * phi
                got = GoldenInt(a, b).sign()
                if a == 0 and b == 0:
                    assert got == 0
                else:
                    assert got == (1 if expected > 0 else -1), (a, b)

    def test_ordering(self):
        assert GoldenInt(0, 1) > 1          # phi > 1
        assert GoldenInt(2, -1) > 0         # 2 - phi > 0
        assert GoldenInt(1, -1) < 0         # 1 - phi < 0
        assert GoldenInt(3, 0) == 3
        assert sorted([GoldenInt(0, 1), GoldenInt(2, -1), GoldenInt(1, 0)]) == [
            GoldenInt(2, -1),
            GoldenInt(1, 0),
            GoldenInt(0, 1),
        ]

    def test_hashable(self):
        assert len({GoldenInt(1, 2), GoldenInt(1, 2), GoldenInt(2, 1)}) == 2


class TestSimpleReflections:
    def test_a2_action(self):
        s1 = engine("A2").simple_reflection(1)
        # columns hold s1(alpha_j): alpha_1 -> -alpha_1, alpha_2 -> alpha_1 + alpha_2
        assert s1.inverse_matrix == ((-1, 0), (1, 1))

    def test_h3_golden_coefficient(self):
        s1 = engine("H3").simple_reflection(1)
        # the 5-bond contributes phi: s1(alpha_2) = alpha_2 + phi*alpha_1
        col2 = s1.inverse_matrix[1]
        assert col2[0] == PHI and col2[1] == GoldenInt(1, 0)

    @pytest.mark.parametrize("text", ["A3", "B3", "D4", "F4", "H3", "I2(6)"])
    def test_involution(self, text):
        e = engine(text)
        for i in range(1, e.rank + 1):
            s = e.simple_reflection(i)
            assert e.left_multiply(i, s).is_identity()

    @pytest.mark.parametrize("text", ["A3", "B3", "D4", "F4", "H3", "E6", "I2(5)", "I2(6)"])
    def test_braid_relations(self, text):
        e = engine(text)
        m = e.matrix
        for i in range(1, e.rank + 1):
            for j in range(i + 1, e.rank + 1):
                word = (i, j) * m.bond(i, j)
                assert e.element_from_word(word).is_identity(), (text, i, j)

    def test_unsupported_bond(self):
        with pytest.raises(UnsupportedTypeError):
            engine("I2(7)")

    def test_bad_generator_index(self):
        with pytest.raises(ParameterError):
            engine("A2").simple_reflection(3)


class TestDescents:
    def test_identity_has_none(self):
        assert engine("B3").identity().left_descents() == frozenset()

    def test_longest_element_has_all(self):
        e = engine("A2")
        w0 = e.element_from_word((1, 2, 1))
        assert w0.left_descents() == frozenset({1, 2})

    def test_a2_s1s2(self):
        e = engine("A2")
        g = e.element_from_word((1, 2))
        assert g.length == 2
        assert g.left_descents() == frozenset({1})

    def test_left_multiply_updates_length(self):
        e = engine("A2")
        g = e.left_multiply(1, e.simple_reflection(2))
        assert g.length == 2 and g.left_descents() == frozenset({1})
        back = e.left_multiply(1, g)
        assert back.length == 1

    def test_corrupted_element_detected(self):
        e = engine("A2")
        bad = GroupElement(e, (1, -1, 0, 1), 0)  # mixed-sign first column
        with pytest.raises(InternalError):
            bad.left_descents()

    @pytest.mark.parametrize("text", ["A3", "B3", "H3"])
    def test_descent_iff_shorter(self, text):
        e = engine(text)
        for g in all_elements(e):
            descents = g.left_descents()
            for i in range(1, e.rank + 1):
                shorter = e.left_multiply(i, g).length == g.length - 1
                assert (i in descents) == shorter

    @pytest.mark.parametrize("text", ["A3", "B2", "H3", "I2(6)"])
    def test_descent_count_extremes(self, text):
        e = engine(text)
        elements = all_elements(e)
        longest = max(g.length for g in elements)
        for g in elements:
            d = g.descent_count()
            assert (d == e.rank) == (g.length == longest)
            assert (d == 0) == g.is_identity()


class TestRoots:
    @pytest.mark.parametrize(
        "text,count", [("A2", 3), ("B2", 4), ("H3", 15), ("D4", 12), ("F4", 24), ("A3", 6)]
    )
    def test_positive_root_counts(self, text, count):
        assert len(engine(text).positive_roots()) == count

    def test_roots_uniformly_signed(self):
        for root in engine("B3").positive_roots():
            assert all(c >= 0 for c in root)

    def test_infinite_type_capped(self):
        from coxproper.core import CoxeterMatrix

        affine = CoxeterMatrix(
            3, ((1, 3, 3), (3, 1, 3), (3, 3, 1))
        )  # affine A2 triangle: not finite
        with pytest.raises(UnsupportedTypeError):
            GeometricRepresentation(affine).positive_roots(cap=500)

    def test_length_by_roots_identity_and_w0(self):
        e = engine("H3")
        assert e.length_by_roots(e.identity()) == 0
        w0 = next(g for g in all_elements(e) if g.length == 15)
        assert e.length_by_roots(w0) == 15

    @pytest.mark.parametrize("text", ["A3", "B3", "D4", "H3"])
    def test_length_by_roots_matches_bfs(self, text):
        e = engine(text)
        for g in all_elements(e):
            assert e.length_by_roots(g) == g.length

    def test_length_of_inverse(self):
        e = engine("B3")
        for g in all_elements(e):
            assert g.inverse().length == g.length


class TestCanonicalWords:
    def test_examples(self):
        e = engine("A3")
        assert e.identity().word() == ()
        assert e.simple_reflection(3).word() == (3,)
        a2 = engine("A2")
        w0 = a2.element_from_word((2, 1, 2))
        assert w0.word() == (1, 2, 1)

    @pytest.mark.parametrize("text", ["A3", "B3", "H3"])
    def test_round_trip(self, text):
        e = engine(text)
        for g in all_elements(e):
            word = g.word()
            assert len(word) == g.length
            assert e.element_from_word(word) == g

    def test_identity_matrix_field(self):
        e = engine("A2")
        assert e.identity().inverse_matrix == ((1, 0), (0, 1))
