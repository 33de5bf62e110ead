"""Finite Coxeter systems: standard diagrams, subdiagram classification, maxw0.

Node numbering conventions (fixed here once so that words, files and tests
are deterministic; every formula below depends only on diagram shape):

  A_n, B_n, F4, H3, H4   nodes 1..n along a path.  B_n carries its 4-bond
                         on edge {1,2}, F4 on edge {2,3}, H3/H4 carry the
                         5-bond on edge {1,2}.
  D_n                    nodes 1 and 2 are the fork tips, both joined to
                         node 3; 3-4-...-n is a path.
  E6, E7, E8             nodes 1..n-1 form a path and node n attaches to
                         node 3 (arm lengths 1, 2, n-4 from the branch).
  I2(m)                  two nodes joined by an m-bond.

Generator indices, vertex subsets and bond lookups are 1-based throughout
the public API.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass

from .errors import InternalError, ParameterError

FAMILIES = ("A", "B", "D", "E6", "E7", "E8", "F4", "H3", "H4", "I2")

_FIXED_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "H3": 3, "H4": 4}
_MIN_PARAM = {"A": 1, "B": 2, "D": 4, "I2": 3}

_EXC_LONGEST = {"E6": 36, "E7": 63, "E8": 120, "F4": 24, "H3": 15, "H4": 60}
_EXC_ORDER = {
    "E6": 51_840,
    "E7": 2_903_040,
    "E8": 696_729_600,
    "F4": 1_152,
    "H3": 120,
    "H4": 14_400,
}

# maxw0 lookup tables for the exceptional families, indexed by subset size x.
_E_MAXW0 = (0, 1, 3, 6, 12, 20, 36, 63, 120)
_F4_MAXW0 = (0, 1, 4, 9, 24)
_H_MAXW0 = (0, 1, 5, 15, 60)

_LABEL_RE = re.compile(r"^(?:([ABD])(\d+)|(E6|E7|E8|F4|H3|H4)|I2\((\d+)\))$")


@dataclass(frozen=True)
class TypeLabel:
    """A finite irreducible type: family plus its numeric parameter.

    For A/B/D the parameter is the rank subscript; for I2 it is the bond
    label m (the rank is 2); for the exceptional families it must equal the
    rank implied by the name.
    """

    family: str
    param: int

    def __post_init__(self) -> None:
        if self.family in _MIN_PARAM:
            if self.param < _MIN_PARAM[self.family]:
                raise ParameterError(
                    f"{self.family} requires parameter >= {_MIN_PARAM[self.family]}, "
                    f"got {self.param}"
                )
        elif self.family in _FIXED_RANK:
            if self.param != _FIXED_RANK[self.family]:
                raise ParameterError(
                    f"{self.family} has fixed rank {_FIXED_RANK[self.family]}"
                )
        else:
            raise ParameterError(f"unknown family {self.family!r}")

    @property
    def rank(self) -> int:
        return 2 if self.family == "I2" else self.param

    def __str__(self) -> str:
        if self.family in _FIXED_RANK:
            return self.family
        if self.family == "I2":
            return f"I2({self.param})"
        return f"{self.family}{self.param}"

    @classmethod
    def parse(cls, text: str) -> "TypeLabel":
        m = _LABEL_RE.match(text.strip())
        if not m:
            raise ParameterError(f"unrecognized group label {text!r}")
        if m.group(1):
            return cls(m.group(1), int(m.group(2)))
        if m.group(3):
            return cls(m.group(3), _FIXED_RANK[m.group(3)])
        return cls("I2", int(m.group(4)))


def as_label(label: "TypeLabel | str") -> TypeLabel:
    return TypeLabel.parse(label) if isinstance(label, str) else label


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric bond-label matrix of a Coxeter system.

    ``bonds`` is stored as a tuple of rows with 0-based storage; use
    :meth:`bond` for 1-based access.
    """

    rank: int
    bonds: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = self.rank
        if n < 1:
            raise ParameterError("rank must be >= 1")
        if len(self.bonds) != n or any(len(row) != n for row in self.bonds):
            raise ParameterError("bond matrix shape does not match rank")
        for i in range(n):
            if self.bonds[i][i] != 1:
                raise ParameterError("diagonal bond entries must be 1")
            for j in range(i + 1, n):
                if self.bonds[i][j] != self.bonds[j][i]:
                    raise ParameterError("bond matrix must be symmetric")
                if self.bonds[i][j] < 2:
                    raise ParameterError("off-diagonal bond entries must be >= 2")

    def bond(self, i: int, j: int) -> int:
        """Bond label between generators i and j (1-based)."""
        return self.bonds[i - 1][j - 1]

    def neighbors(self, i: int) -> tuple[int, ...]:
        row = self.bonds[i - 1]
        return tuple(j + 1 for j, m in enumerate(row) if j != i - 1 and m >= 3)


def build_standard(label: TypeLabel | str) -> CoxeterMatrix:
    """Bond matrix of the standard diagram under this module's numbering."""
    label = as_label(label)
    n = label.rank
    bonds = [[2] * n for _ in range(n)]
    for i in range(n):
        bonds[i][i] = 1

    def join(i: int, j: int, m: int = 3) -> None:
        bonds[i - 1][j - 1] = m
        bonds[j - 1][i - 1] = m

    fam = label.family
    if fam in ("A", "B", "F4", "H3", "H4"):
        for i in range(1, n):
            join(i, i + 1)
        if fam == "B":
            join(1, 2, 4)
        elif fam == "F4":
            join(2, 3, 4)
        elif fam in ("H3", "H4"):
            join(1, 2, 5)
    elif fam == "D":
        join(1, 3)
        join(2, 3)
        for i in range(3, n):
            join(i, i + 1)
    elif fam in ("E6", "E7", "E8"):
        for i in range(1, n - 1):
            join(i, i + 1)
        join(3, n)
    else:  # I2
        join(1, 2, label.param)
    return CoxeterMatrix(n, tuple(tuple(row) for row in bonds))


@dataclass(frozen=True)
class DiagramComponent:
    """A connected induced subdiagram together with its recognized type."""

    vertices: frozenset[int]
    label: TypeLabel


def _walk_path(adj: dict[int, list[int]], start: int) -> list[int]:
    """Vertices of a path component in order, starting from endpoint ``start``."""
    order = [start]
    prev = None
    cur = start
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            return order
        prev, cur = cur, nxt[0]
        order.append(cur)


def _arm_length(adj: dict[int, list[int]], branch: int, first: int) -> int:
    length = 1
    prev, cur = branch, first
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            return length
        prev, cur = cur, nxt[0]
        length += 1


def _classify(matrix: CoxeterMatrix, verts: list[int]) -> TypeLabel:
    k = len(verts)
    if k == 1:
        return TypeLabel("A", 1)
    vset = set(verts)
    adj = {
        v: [u for u in matrix.neighbors(v) if u in vset]
        for v in verts
    }
    degrees = [len(adj[v]) for v in verts]
    branch_nodes = [v for v in verts if len(adj[v]) == 3]
    if max(degrees) > 3 or len(branch_nodes) > 1:
        raise InternalError(f"unclassifiable component {sorted(verts)}")

    if branch_nodes:
        b = branch_nodes[0]
        for v in verts:
            for u in adj[v]:
                if matrix.bond(u, v) != 3:
                    raise InternalError("forked component with a labeled bond")
        arms = sorted(_arm_length(adj, b, first) for first in adj[b])
        if arms[0] == 1 and arms[1] == 1:
            return TypeLabel("D", k)
        if arms == [1, 2, 2]:
            return TypeLabel("E6", 6)
        if arms == [1, 2, 3]:
            return TypeLabel("E7", 7)
        if arms == [1, 2, 4]:
            return TypeLabel("E8", 8)
        raise InternalError(f"unclassifiable fork shape {arms}")

    endpoints = [v for v in verts if len(adj[v]) <= 1]
    if len(endpoints) != 2:
        raise InternalError("component is not a path or a fork")
    path = _walk_path(adj, min(endpoints))
    labels = [matrix.bond(path[i], path[i + 1]) for i in range(k - 1)]
    special = [(idx, m) for idx, m in enumerate(labels) if m != 3]
    if not special:
        return TypeLabel("A", k)
    if len(special) > 1:
        raise InternalError("path component with several labeled bonds")
    idx, m = special[0]
    pos = min(idx, (k - 2) - idx)  # distance of the bond from the nearer end
    if m == 4:
        if pos == 0 and k == 2:
            return TypeLabel("B", 2)
        if pos == 0:
            return TypeLabel("B", k)
        if pos == 1 and k == 4:
            return TypeLabel("F4", 4)
        raise InternalError("4-bond in an unrecognized position")
    if m == 5 and pos == 0:
        if k == 2:
            return TypeLabel("I2", 5)
        if k == 3:
            return TypeLabel("H3", 3)
        if k == 4:
            return TypeLabel("H4", 4)
        raise InternalError("5-bond path longer than H4")
    if k == 2:
        return TypeLabel("I2", m)
    raise InternalError(f"unclassifiable bond label {m} in a path of size {k}")


def components(
    matrix: CoxeterMatrix, vertices: "frozenset[int] | set[int] | None" = None
) -> list[DiagramComponent]:
    """Connected components of the induced subdiagram, classified by shape.

    Returned in order of smallest vertex.  ``vertices`` defaults to the full
    vertex set.
    """
    if vertices is None:
        vertices = set(range(1, matrix.rank + 1))
    else:
        vertices = set(vertices)
        bad = [v for v in vertices if not 1 <= v <= matrix.rank]
        if bad:
            raise ParameterError(f"vertices out of range: {sorted(bad)}")

    seen: set[int] = set()
    out = []
    for start in sorted(vertices):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop()
            for u in matrix.neighbors(v):
                if u in vertices and u not in seen:
                    seen.add(u)
                    comp.append(u)
                    queue.append(u)
        comp.sort()
        out.append(DiagramComponent(frozenset(comp), _classify(matrix, comp)))
    return out


def longest_length(label: TypeLabel | str) -> int:
    """Length of the longest element of the given irreducible type."""
    label = as_label(label)
    fam, p = label.family, label.param
    if fam == "A":
        return p * (p + 1) // 2
    if fam == "B":
        return p * p
    if fam == "D":
        return p * p - p
    if fam == "I2":
        return p
    return _EXC_LONGEST[fam]


def group_order(label: TypeLabel | str) -> int:
    label = as_label(label)
    fam, p = label.family, label.param
    if fam == "A":
        return math.factorial(p + 1)
    if fam == "B":
        return (1 << p) * math.factorial(p)
    if fam == "D":
        return (1 << (p - 1)) * math.factorial(p)
    if fam == "I2":
        return 2 * p
    return _EXC_ORDER[fam]


def w0_length_subset(matrix: CoxeterMatrix, vertices) -> int:
    """Longest-element length of the parabolic subgroup on ``vertices``.

    Sum of the longest lengths over the classified components.
    """
    return sum(longest_length(c.label) for c in components(matrix, vertices))


def maxw0_closed(label: TypeLabel | str, x: int) -> int:
    """Closed-form maxw0 for the standard types."""
    label = as_label(label)
    if not 0 <= x <= label.rank:
        raise ParameterError(f"x must lie in 0..{label.rank}, got {x}")
    fam = label.family
    if fam == "A":
        return x * (x + 1) // 2
    if fam == "B":
        return x * x
    if fam == "D":
        return x * x - x if x > 3 else x * (x + 1) // 2
    if fam in ("E6", "E7", "E8"):
        return _E_MAXW0[x]
    if fam == "F4":
        return _F4_MAXW0[x]
    if fam in ("H3", "H4"):
        return _H_MAXW0[x]
    return label.param if x == 2 else x


def maxw0_bruteforce(matrix: CoxeterMatrix, x: int) -> int:
    """Exhaustive maxw0 over all size-x subsets of any Coxeter matrix."""
    if not 0 <= x <= matrix.rank:
        raise ParameterError(f"x must lie in 0..{matrix.rank}, got {x}")
    return max(
        w0_length_subset(matrix, subset)
        for subset in itertools.combinations(range(1, matrix.rank + 1), x)
    )


def identify(matrix: CoxeterMatrix) -> "TypeLabel | None":
    """Recognize an irreducible standard matrix by shape; None if reducible."""
    comps = components(matrix)
    return comps[0].label if len(comps) == 1 else None


@dataclass(frozen=True)
class MaxW0Table:
    """Per-group lookup ``x -> maxw0(W, x)`` used by the properness test."""

    entries: tuple[int, ...]
    label: "TypeLabel | None" = None

    def __post_init__(self) -> None:
        if not self.entries or self.entries[0] != 0:
            raise ParameterError("maxw0 table must start at entries[0] = 0")
        if any(a > b for a, b in zip(self.entries, self.entries[1:])):
            raise ParameterError("maxw0 table must be weakly increasing")

    @property
    def rank(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, x: int) -> int:
        if not 0 <= x <= self.rank:
            raise ParameterError(f"descent count {x} outside 0..{self.rank}")
        return self.entries[x]

    @classmethod
    def closed(cls, label: TypeLabel | str) -> "MaxW0Table":
        label = as_label(label)
        entries = tuple(maxw0_closed(label, x) for x in range(label.rank + 1))
        return cls(entries, label)

    @classmethod
    def bruteforce(cls, matrix: CoxeterMatrix) -> "MaxW0Table":
        entries = tuple(maxw0_bruteforce(matrix, x) for x in range(matrix.rank + 1))
        return cls(entries, identify(matrix))
