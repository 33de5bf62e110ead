"""The properness predicate, dihedral closed forms, and the spherical search.

An element is proper when ell(w) <= rank + maxw0(W, d(w)) with d(w) the
number of left descents.  Dihedral groups I2(m) are handled symbolically as
alternating words, so no matrix ring is needed for general m.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .core import CoxeterMatrix, MaxW0Table, components, longest_length, w0_length_subset
from .engine import GeometricRepresentation, GroupElement
from .errors import ParameterError, ResourceLimitError

DEFAULT_NODE_CAP = 10_000_000


@dataclass(frozen=True)
class ProperQuery:
    """Inputs of one properness decision."""

    rank: int
    length: int
    descents: int
    table: MaxW0Table

    def __post_init__(self) -> None:
        if self.descents > self.rank:
            raise ParameterError(
                f"descent count {self.descents} exceeds rank {self.rank}"
            )
        if self.length < 0 or self.descents < 0:
            raise ParameterError("length and descents must be non-negative")


def is_proper(query: ProperQuery) -> bool:
    return query.length <= query.rank + query.table[query.descents]


def is_proper_stats(length: int, descents: int, table: MaxW0Table) -> bool:
    """Properness from raw (length, descents) against a maxw0 table."""
    return is_proper(ProperQuery(table.rank, length, descents, table))


# -- dihedral groups, symbolically -----------------------------------------


def dihedral_elements(m: int) -> Iterator[tuple[int, int]]:
    """(length, descent count) of every element of I2(m).

    Alternating words: for 0 < t < m there are exactly two elements of
    length t, each with one left descent (its first letter); the identity
    has none and the longest element has both.
    """
    if m < 3:
        raise ParameterError("dihedral groups here have m >= 3")
    yield (0, 0)
    for t in range(1, m):
        yield (t, 1)
        yield (t, 1)
    yield (m, 2)


def dihedral_maxw0_table(m: int) -> MaxW0Table:
    from .core import TypeLabel

    return MaxW0Table((0, 1, m), TypeLabel("I2", m))


def proper_count_dihedral(m: int) -> int:
    """Number of proper elements of I2(m), by the three-case analysis.

    The identity and the longest element are always proper; any other
    element is proper exactly when its length is at most 3.  The count is
    therefore 6 at m = 3 and 8 for every m >= 4.
    """
    if m < 3:
        raise ParameterError("dihedral groups here have m >= 3")
    return 2 + 2 * min(3, m - 1)


def proper_count_dihedral_bruteforce(m: int) -> int:
    table = dihedral_maxw0_table(m)
    return sum(
        1 for length, d in dihedral_elements(m) if is_proper_stats(length, d, table)
    )


# -- I-spherical search ------------------------------------------------------


@dataclass(frozen=True)
class SphericalBudget:
    """Letter budgets induced by a descent subset I.

    Letters outside I may each be used at most once; letters inside I are
    budgeted per connected component of the subdiagram on I, each component
    allowing longest-element length plus its vertex count.
    """

    outside: frozenset[int]
    component_of: dict[int, int]
    component_budgets: tuple[int, ...]

    @classmethod
    def build(cls, matrix: CoxeterMatrix, subset: frozenset[int]) -> "SphericalBudget":
        comps = components(matrix, subset) if subset else []
        component_of = {}
        budgets = []
        for z, comp in enumerate(comps):
            for v in comp.vertices:
                component_of[v] = z
            budgets.append(longest_length(comp.label) + len(comp.vertices))
        outside = frozenset(range(1, matrix.rank + 1)) - subset
        return cls(outside, component_of, tuple(budgets))


def is_I_spherical(
    matrix: CoxeterMatrix,
    word,
    subset=None,
    node_cap: int = DEFAULT_NODE_CAP,
) -> bool:
    """Decide whether some reduced word of w fits the I-spherical budgets.

    ``word`` is any reduced word of w; ``subset`` must be contained in the
    left descent set J(w) and defaults to all of it.  The search peels left
    descents depth-first (smallest admissible index first), pruning any
    branch whose letter usage already exceeds a budget, and memoizes failed
    (element, remaining budgets) states.  Exceeding ``node_cap`` raises
    ResourceLimitError rather than guessing.
    """
    engine = GeometricRepresentation(matrix)
    word = tuple(word)
    g = engine.element_from_word(word)
    if g.length != len(word):
        raise ParameterError(f"word {word} is not reduced")
    descents = engine.left_descents(g)
    if subset is None:
        subset = descents
    subset = frozenset(subset)
    if not subset <= descents:
        raise ParameterError(
            f"I = {sorted(subset)} is not a subset of J(w) = {sorted(descents)}"
        )

    budget = SphericalBudget.build(matrix, subset)
    n_comp = len(budget.component_budgets)
    # quick necessary condition: total budget covers the whole word
    if g.length > sum(budget.component_budgets) + len(budget.outside):
        return False

    apply_gen = engine._apply
    descent_mask = engine._descent_mask
    identity_key = engine.identity_key
    comp_of = budget.component_of
    outside = budget.outside

    nodes = 0
    failed: set[tuple] = set()

    def search(key, remaining_outside: frozenset, comp_left: tuple[int, ...]) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise ResourceLimitError(
                f"spherical search exceeded {node_cap} nodes; raise node_cap "
                "to continue"
            )
        if key == identity_key:
            return True
        state = (key, remaining_outside, comp_left)
        if state in failed:
            return False
        mask = descent_mask(key)
        i = 1
        while mask:
            if mask & 1:
                if i in comp_of:
                    z = comp_of[i]
                    if comp_left[z] > 0:
                        nxt = comp_left[:z] + (comp_left[z] - 1,) + comp_left[z + 1 :]
                        if search(apply_gen(key, i - 1), remaining_outside, nxt):
                            return True
                elif i in remaining_outside:
                    if search(
                        apply_gen(key, i - 1), remaining_outside - {i}, comp_left
                    ):
                        return True
                # a letter with no budget left cannot be peeled on this branch
            mask >>= 1
            i += 1
        failed.add(state)
        return False

    return search(g.key, outside, budget.component_budgets)
