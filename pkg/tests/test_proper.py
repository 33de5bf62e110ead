import pytest

from conftest import all_elements
from coxproper.core import MaxW0Table, TypeLabel, build_standard, maxw0_bruteforce
from coxproper.engine import GeometricRepresentation
from coxproper.errors import ParameterError, ResourceLimitError
from coxproper.perms import iter_all, length_and_descents, phi_B, phi_D
from coxproper.proper import (
    ProperQuery,
    SphericalBudget,
    dihedral_elements,
    is_I_spherical,
    is_proper,
    is_proper_stats,
    proper_count_dihedral,
    proper_count_dihedral_bruteforce,
)


def table(text):
    return MaxW0Table.closed(TypeLabel.parse(text))


class TestIsProper:
    def test_identity_always_proper(self):
        for text in ["A4", "B3", "E6"]:
            t = table(text)
            assert is_proper(ProperQuery(t.rank, 0, 0, t))

    def test_longest_element_always_proper(self):
        from coxproper.core import longest_length

        for text in ["A4", "B3", "H4", "E6"]:
            t = table(text)
            assert is_proper(ProperQuery(t.rank, longest_length(text), t.rank, t))

    def test_descents_above_rank_rejected(self):
        t = table("A3")
        with pytest.raises(ParameterError):
            ProperQuery(3, 2, 4, t)

    @pytest.mark.parametrize("n", [3, 4])
    def test_b_superset_bound(self, n):
        # anything with inv_D above n + (des+1)^2 must fail the proper test
        from coxproper.perms import stats_B

        t = table(f"B{n}")
        for w in iter_all("B", n):
            s = stats_B(w)
            if s.inv_d > n + (s.des + 1) ** 2:
                assert not is_proper_stats(s.inv_b, s.des_b, t)


class TestDihedral:
    def test_closed_form_values(self):
        assert proper_count_dihedral(3) == 6
        assert proper_count_dihedral(5) == 8
        assert proper_count_dihedral(1000) == 8

    def test_m_below_3_rejected(self):
        with pytest.raises(ParameterError):
            proper_count_dihedral(2)

    @pytest.mark.parametrize("m", range(3, 51))
    def test_closed_equals_bruteforce(self, m):
        assert proper_count_dihedral(m) == proper_count_dihedral_bruteforce(m)

    def test_element_profile(self):
        elements = list(dihedral_elements(7))
        assert len(elements) == 14
        assert elements.count((0, 0)) == 1 and elements.count((7, 2)) == 1
        assert all(d == 1 for t, d in elements if 0 < t < 7)


class TestSpherical:
    def test_single_generator(self):
        m = build_standard("A3")
        assert is_I_spherical(m, (2,), frozenset())

    def test_w0_a2_with_full_descents(self):
        m = build_standard("A2")
        assert is_I_spherical(m, (1, 2, 1), frozenset({1, 2}))

    def test_not_reduced_rejected(self):
        m = build_standard("A2")
        with pytest.raises(ParameterError):
            is_I_spherical(m, (1, 1), frozenset())

    def test_subset_outside_descents_rejected(self):
        m = build_standard("A2")
        with pytest.raises(ParameterError):
            is_I_spherical(m, (1,), frozenset({2}))

    def test_node_cap_is_a_hard_error(self):
        m = build_standard("A3")
        engine = GeometricRepresentation(m)
        w0 = next(g for g in all_elements(engine) if g.length == 6)
        with pytest.raises(ResourceLimitError):
            is_I_spherical(m, w0.word(), node_cap=2)

    def test_budget_shape(self):
        m = build_standard("B4")
        budget = SphericalBudget.build(m, frozenset({1, 2, 4}))
        assert budget.outside == frozenset({3})
        # components {1,2}: B2 budget 4+2, {4}: A1 budget 1+1
        assert sorted(budget.component_budgets) == [2, 6]

    @pytest.mark.parametrize("text", ["A3", "B3", "H3"])
    def test_spherical_implies_proper(self, text):
        m = build_standard(text)
        t = table(text)
        engine = GeometricRepresentation(m)
        for g in all_elements(engine):
            if is_I_spherical(m, g.word()):
                assert is_proper_stats(g.length, g.descent_count(), t), g.word()

    def test_search_separates_elements(self):
        # every element of A3 is J(w)-spherical, but B3 has 18 that are not
        a3 = build_standard("A3")
        assert all(
            is_I_spherical(a3, g.word())
            for g in all_elements(GeometricRepresentation(a3))
        )
        b3 = build_standard("B3")
        verdicts = [
            is_I_spherical(b3, g.word())
            for g in all_elements(GeometricRepresentation(b3))
        ]
        assert sum(verdicts) == 30


class TestEmbeddingPreservation:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_proper_is_preserved_by_phi(self, n):
        t_a = table(f"A{n - 1}")
        t_b = table(f"B{n}")
        t_d = (
            table(f"D{n}")
            if n >= 4
            else MaxW0Table.bruteforce(build_standard(f"A{n - 1}"))
        )
        for w in iter_all("A", n):
            la, da = length_and_descents("A", w)
            if not is_proper_stats(la, da, t_a):
                continue
            lb, db = length_and_descents("B", phi_B(w))
            assert is_proper_stats(lb, db, t_b)
            if n >= 4:
                ld, dd = length_and_descents("D", phi_D(w))
                assert is_proper_stats(ld, dd, t_d)
