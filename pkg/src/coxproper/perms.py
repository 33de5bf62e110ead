"""One-line-notation models for types A (S_n), B (signed), D (even-signed).

Statistics follow the convention that descents are read off the *inverse*
one-line notation: des(w) counts i < n with w^{-1}(i) > w^{-1}(i+1).  This
makes des (resp. des_B, des_D) the number of left descents of w in the
Coxeter groups A_{n-1} (resp. B_n, D_n); note it differs from the common
right-descent convention, which would drop the inverse.

Samplers take an explicit numpy Generator so that a (seed, sample-index)
pair fully determines each draw; see :mod:`coxproper.asymptotics` for the
partitioning scheme used in parallel runs.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left, insort
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

import numpy as np

from .errors import FormatError, ParameterError

FAMILY_CHOICES = ("A", "B", "D")


@dataclass(frozen=True)
class Permutation:
    """Permutation of [n] in one-line notation: images[i-1] = w(i)."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n < 1 or sorted(self.images) != list(range(1, n + 1)):
            raise ParameterError(f"not a permutation of [{n}]: {self.images}")

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for pos, v in enumerate(self.images, start=1):
            inv[v - 1] = pos
        return Permutation(tuple(inv))

    def __str__(self) -> str:
        return " ".join(map(str, self.images))


@dataclass(frozen=True)
class SignedPermutation:
    """Signed permutation: images over the positive window 1..n.

    The negative window is implicit through w(-i) = -w(i).
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n < 1 or sorted(abs(v) for v in self.images) != list(range(1, n + 1)):
            raise ParameterError(f"not a signed permutation: {self.images}")

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if i > 0:
            return self.images[i - 1]
        return -self.images[-i - 1]

    def neg(self) -> int:
        return sum(1 for v in self.images if v < 0)

    def is_even_signed(self) -> bool:
        return self.neg() % 2 == 0

    def inverse(self) -> "SignedPermutation":
        inv = [0] * len(self.images)
        for pos, v in enumerate(self.images, start=1):
            if v > 0:
                inv[v - 1] = pos
            else:
                inv[-v - 1] = -pos
        return SignedPermutation(tuple(inv))

    def __str__(self) -> str:
        return " ".join(map(str, self.images))


def parse_one_line(text: str, signed: bool = True):
    """Parse "2 -1 3" into a SignedPermutation (or Permutation)."""
    try:
        values = tuple(int(tok) for tok in text.split())
    except ValueError as exc:
        raise FormatError(f"bad one-line notation {text!r}") from exc
    if not values:
        raise FormatError("empty one-line notation")
    try:
        return SignedPermutation(values) if signed else Permutation(values)
    except ParameterError as exc:
        raise FormatError(str(exc)) from exc


def inversions(seq) -> int:
    """Number of pairs i < j with seq[i] > seq[j], by merge counting."""
    seq = list(seq)
    if len(seq) < 2:
        return 0
    count = 0
    width = 1
    while width < len(seq):
        out = []
        for lo in range(0, len(seq), 2 * width):
            left = seq[lo : lo + width]
            right = seq[lo + width : lo + 2 * width]
            i = j = 0
            while i < len(left) and j < len(right):
                if left[i] <= right[j]:
                    out.append(left[i])
                    i += 1
                else:
                    out.append(right[j])
                    j += 1
                    count += len(left) - i
            out.extend(left[i:])
            out.extend(right[j:])
        seq = out
        width *= 2
    return count


def _negative_sum_pairs(images) -> int:
    # pairs i < j with w(i) + w(j) < 0, counted against a sorted prefix
    count = 0
    prefix: list[int] = []
    for v in images:
        count += bisect_left(prefix, -v)
        insort(prefix, v)
    return count


def _descents_of_inverse(inv_images) -> int:
    return sum(1 for a, b in zip(inv_images, inv_images[1:]) if a > b)


class StatsA(NamedTuple):
    inv: int
    des: int


class StatsB(NamedTuple):
    inv: int
    nsp: int
    neg: int
    inv_b: int
    inv_d: int
    des: int
    des_b: int
    des_d: int


def stats_A(w: Permutation) -> StatsA:
    """(inv, des) of a permutation: Coxeter length and left-descent count."""
    return StatsA(inversions(w.images), _descents_of_inverse(w.inverse().images))


def stats_B(w: SignedPermutation) -> StatsB:
    """All eight signed statistics over the positive window.

    des_D is only meaningful for n >= 2 and raises below that.
    """
    n = w.size
    if n < 2:
        raise ParameterError("signed statistics need n >= 2 (des_D undefined)")
    inv = inversions(w.images)
    nsp = _negative_sum_pairs(w.images)
    neg = w.neg()
    winv = w.inverse().images
    des = _descents_of_inverse(winv)
    des_b = des + (1 if winv[0] < 0 else 0)
    # w^{-1}(-2) = -w^{-1}(2)
    des_d = des + (1 if -winv[1] > winv[0] else 0)
    return StatsB(inv, nsp, neg, inv + nsp + neg, inv + nsp, des, des_b, des_d)


def length_and_descents(family: str, w) -> tuple[int, int]:
    """(Coxeter length, left-descent count) of w in the given family."""
    if family == "A":
        s = stats_A(w)
        return s.inv, s.des
    if w.size == 1:
        # stats_B refuses n = 1 (des_D undefined); handle the two degenerate
        # groups directly: B_1 = {(1), (-1)}, S_1^D = {(1)}.
        if family == "B":
            neg = w.neg()
            return neg, neg
        if family == "D":
            return 0, 0
    s = stats_B(w)
    if family == "B":
        return s.inv_b, s.des_b
    if family == "D":
        return s.inv_d, s.des_d
    raise ParameterError(f"unknown family {family!r}")


def phi_B(w: Permutation) -> SignedPermutation:
    """All-positive embedding S_n -> S_n^B; preserves length and descents."""
    return SignedPermutation(w.images)


def phi_D(w: Permutation) -> SignedPermutation:
    """All-positive embedding S_n -> S_n^D (zero negatives is even)."""
    return SignedPermutation(w.images)


def iter_all(family: str, n: int) -> Iterator:
    """Every element of S_n / S_n^B / S_n^D, in a deterministic order."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if family == "A":
        for p in itertools.permutations(range(1, n + 1)):
            yield Permutation(p)
        return
    if family not in ("B", "D"):
        raise ParameterError(f"unknown family {family!r}")
    for p in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            w = tuple(s * v for s, v in zip(signs, p))
            if family == "D" and sum(1 for v in w if v < 0) % 2:
                continue
            yield SignedPermutation(w)


# -- uniform samplers -------------------------------------------------------


def sample_uniform_batch(
    family: str, n: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """(count, n) array of one-line images, exactly uniform per row.

    A: Fisher-Yates rows of 1..n.  B: uniform permutation with independent
    fair signs.  D: a B sample whose first image's sign is flipped whenever
    neg is odd; flipping is a 2-to-1 map onto the even-neg elements, so the
    result is exactly uniform on S_n^D.
    """
    if n < 1 or count < 0:
        raise ParameterError("need n >= 1 and count >= 0")
    base = np.tile(np.arange(1, n + 1, dtype=np.int64), (count, 1))
    w = rng.permuted(base, axis=1)
    if family == "A":
        return w
    if family not in ("B", "D"):
        raise ParameterError(f"unknown family {family!r}")
    signs = rng.integers(0, 2, size=(count, n), dtype=np.int64) * 2 - 1
    w = w * signs
    if family == "D":
        odd = (w < 0).sum(axis=1) % 2 == 1
        w[odd, 0] = -w[odd, 0]
    return w


def sample_uniform(family: str, n: int, rng: np.random.Generator):
    """One exactly-uniform draw from S_n, S_n^B, or S_n^D."""
    row = sample_uniform_batch(family, n, 1, rng)[0]
    images = tuple(int(v) for v in row)
    return Permutation(images) if family == "A" else SignedPermutation(images)


# -- insertion-evolution samplers ------------------------------------------


def insertion_chain(family: str, n: int, rng: np.random.Generator):
    """Evolve a permutation by inserting 1, 2, ..., n at random slots.

    Type A inserts value t at one of t slots; type B inserts t with a
    uniform sign at one of t slots (2t equally likely outcomes).  Both
    chains are exactly uniform after n insertions.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    if family == "A":
        window: list[int] = []
        for t in range(1, n + 1):
            window.insert(int(rng.integers(t)), t)
        return Permutation(tuple(window))
    if family != "B":
        raise ParameterError("insertion chains exist for families A and B")
    window = []
    for t in range(1, n + 1):
        sign = 1 if rng.integers(2) else -1
        window.insert(int(rng.integers(t)), sign * t)
    return SignedPermutation(tuple(window))


def insertion_distribution(family: str, n: int) -> dict[tuple[int, ...], Fraction]:
    """Exact outcome distribution of the insertion chain via all paths."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if family not in ("A", "B"):
        raise ParameterError("insertion chains exist for families A and B")
    dist: dict[tuple[int, ...], Fraction] = {(1,): Fraction(1)}
    if family == "B":
        dist = {(1,): Fraction(1, 2), (-1,): Fraction(1, 2)}
    for t in range(2, n + 1):
        nxt: dict[tuple[int, ...], Fraction] = {}
        slots = t
        values = (t,) if family == "A" else (t, -t)
        step = Fraction(1, slots * len(values))
        for window, p in dist.items():
            for v in values:
                for k in range(slots):
                    new = window[:k] + (v,) + window[k:]
                    nxt[new] = nxt.get(new, Fraction(0)) + p * step
        dist = nxt
    return dist
