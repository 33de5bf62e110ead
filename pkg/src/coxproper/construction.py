"""Block-built permutation family witnessing many proper elements.

Split [n] into a blocks of size q (remainder r fixed pointwise).  Each
block carries a permutation of S_q whose inverse is decreasing on each of b
value runs of size s (the trailing run of size d = q mod s is
unconstrained).  Assembled, these give (q!/s!^b)^a permutations of [n]; a
simple inequality in the parameters guarantees every one of them is proper
in type A_{n-1}.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import ParameterError, ResourceLimitError
from .perms import Permutation, stats_A


@dataclass(frozen=True)
class ConstructionParams:
    """n = a*q + r with 0 <= r < q, and q = s*b + d with 0 <= d < s."""

    n: int
    q: int
    s: int

    def __post_init__(self) -> None:
        if not 1 <= self.s <= self.q <= self.n:
            raise ParameterError("need 1 <= s <= q <= n")

    @property
    def a(self) -> int:
        return self.n // self.q

    @property
    def r(self) -> int:
        return self.n % self.q

    @property
    def b(self) -> int:
        return self.q // self.s

    @property
    def d(self) -> int:
        return self.q % self.s


def block_permutations(q: int, s: int) -> Iterator[tuple[int, ...]]:
    """All pi in S_q with pi^{-1} decreasing on each constrained value run.

    Generated by choosing position sets run by run and filling them with
    descending values, never by filtering all of S_q: for run t the
    positions chosen (in increasing order) receive values s*t+s down to
    s*t+1, and the d leftover values are arranged freely.
    """
    b, d = q // s, q % s
    leftover_values = tuple(range(s * b + 1, q + 1))

    def rec(t: int, free: tuple[int, ...], pi: list[int]) -> Iterator[tuple[int, ...]]:
        if t == b:
            for arrangement in itertools.permutations(free):
                out = pi[:]
                for pos, val in zip(arrangement, leftover_values):
                    out[pos - 1] = val
                yield tuple(out)
            return
        top = s * t + s
        for combo in itertools.combinations(free, s):
            nxt = pi[:]
            for offset, pos in enumerate(combo):
                nxt[pos - 1] = top - offset
            remaining = tuple(p for p in free if p not in combo)
            yield from rec(t + 1, remaining, nxt)

    yield from rec(0, tuple(range(1, q + 1)), [0] * q)


def block_count(params: ConstructionParams) -> int:
    """Number of admissible block permutations: q! / (s!)^b."""
    return math.factorial(params.q) // math.factorial(params.s) ** params.b


def family_size(params: ConstructionParams) -> int:
    return block_count(params) ** params.a


def enumerate_family(params: ConstructionParams) -> Iterator[Permutation]:
    """Stream every constructed permutation of [n]."""
    blocks = list(block_permutations(params.q, params.s))
    q, a, n = params.q, params.a, params.n
    tail = tuple(range(a * q + 1, n + 1))
    for choice in itertools.product(blocks, repeat=a):
        images: list[int] = []
        for alpha, pi in enumerate(choice):
            shift = alpha * q
            images.extend(shift + v for v in pi)
        yield Permutation(tuple(images) + tail)


def lower_bound_count(params: ConstructionParams):
    """(q!)^a / (s!)^{a*b}, exact; an int whenever the division is exact."""
    value = Fraction(
        math.factorial(params.q) ** params.a,
        math.factorial(params.s) ** (params.a * params.b),
    )
    return int(value) if value.denominator == 1 else value


def properness_condition(params: ConstructionParams) -> bool:
    """n*q/2 <= n + (a(s-1)b)^2 / 2, compared exactly in integers."""
    k = params.a * (params.s - 1) * params.b
    return params.n * params.q <= 2 * params.n + k * k


@dataclass(frozen=True)
class ConstructionReport:
    params: ConstructionParams
    total: int
    proper_count: int
    condition: bool
    violations: tuple[Permutation, ...]

    @property
    def all_proper(self) -> bool:
        return self.proper_count == self.total


def verify_all_proper(
    params: ConstructionParams, cap: int = 100_000, keep_violations: int = 16
) -> ConstructionReport:
    """Check type-A properness of every constructed element.

    Zero violations are expected whenever properness_condition holds; the
    report is well formed either way.
    """
    size = family_size(params)
    if size > cap:
        raise ResourceLimitError(
            f"family has {size} elements, above the cap of {cap}; "
            "check a smaller parameter set"
        )
    rank = params.n - 1
    total = 0
    proper = 0
    violations: list[Permutation] = []
    for w in enumerate_family(params):
        total += 1
        s = stats_A(w)
        if s.inv <= rank + s.des * (s.des + 1) // 2:
            proper += 1
        elif len(violations) < keep_violations:
            violations.append(w)
    return ConstructionReport(
        params, total, proper, properness_condition(params), tuple(violations)
    )
