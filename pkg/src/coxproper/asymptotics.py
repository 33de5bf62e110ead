"""Monte Carlo and exact proportions of proper elements in types A, B, D.

Sampling is reproducible and worker-count independent: sample indices are
partitioned into fixed-size chunks, and chunk j of a run draws from its own
Philox stream keyed by sha256(seed, family, n, j).  A (seed, sample-index)
pair therefore fully determines each draw no matter how chunks are
scheduled.

Family parameter convention: ``n`` is the permutation-model size, so family
A with parameter n is the rank n-1 Coxeter group on S_n, while B/D with
parameter n have rank n.
"""

from __future__ import annotations

import csv
import hashlib
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import perms
from .errors import FormatError, ParameterError, ResourceLimitError

RNG_ALGORITHM = "numpy-philox4x64/sha256-keyed/v1"
CHUNK_SAMPLES = 4096
WILSON_Z95 = statistics.NormalDist().inv_cdf(0.975)

CSV_HEADER = (
    "family",
    "n",
    "samples",
    "hits",
    "estimate",
    "ci_low",
    "ci_high",
    "seed",
    "bound",
)


@dataclass(frozen=True)
class ProportionEstimate:
    family: str
    n: int
    samples: int
    hits: int
    estimate: float
    ci_low: float
    ci_high: float
    seed: int


def wilson_interval(hits: int, samples: int, z: float = WILSON_Z95) -> tuple[float, float]:
    """95% Wilson score interval; well behaved at proportions near 0."""
    if samples <= 0:
        raise ParameterError("samples must be >= 1")
    phat = hits / samples
    denom = 1.0 + z * z / samples
    center = (phat + z * z / (2 * samples)) / denom
    half = z * math.sqrt(phat * (1 - phat) / samples + z * z / (4 * samples * samples)) / denom
    # the endpoints are exactly 0 / 1 at the boundaries; avoid rounding dust
    low = 0.0 if hits == 0 else max(0.0, center - half)
    high = 1.0 if hits == samples else min(1.0, center + half)
    return low, high


def chunk_rng(seed: int, family: str, n: int, chunk: int) -> np.random.Generator:
    """The Philox stream owned by one chunk of one (family, n, seed) run."""
    material = f"coxproper|{RNG_ALGORITHM}|{seed}|{family}|{n}|{chunk}".encode()
    key = int.from_bytes(hashlib.sha256(material).digest()[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


def _proper_hits(family: str, n: int, w: np.ndarray) -> int:
    """Number of proper rows in a batch of one-line images."""
    count = w.shape[0]
    if count == 0:
        return 0
    if n == 1:
        if family == "A" or family == "D":
            return count  # only the identity exists and it is proper
        # B_1: ell = neg = d, proper iff neg <= 1 + neg: always
        return count
    # column sweep keeps the pairwise comparisons cache-sized
    w16 = w.astype(np.int16)
    inv = np.zeros(count, dtype=np.int64)
    if family == "A":
        for j in range(1, n):
            inv += (w16[:, :j] > w16[:, j : j + 1]).sum(axis=1)
        pos = np.argsort(w, axis=1)  # positions (0-based) of values 1..n
        des = (pos[:, :-1] > pos[:, 1:]).sum(axis=1)
        budget = (n - 1) + des * (des + 1) // 2
        return int((inv <= budget).sum())

    nsp = np.zeros(count, dtype=np.int64)
    for j in range(1, n):
        col = w16[:, j : j + 1]
        inv += (w16[:, :j] > col).sum(axis=1)
        nsp += (w16[:, :j] < -col).sum(axis=1)  # w_i + w_j < 0
    neg = (w < 0).sum(axis=1)
    order = np.argsort(np.abs(w), axis=1)
    signs = np.take_along_axis(np.sign(w), order, axis=1)
    winv = (order + 1) * signs  # winv[:, v-1] = w^{-1}(v), signed position
    des = (winv[:, :-1] > winv[:, 1:]).sum(axis=1)
    if family == "B":
        des_b = des + (winv[:, 0] < 0)
        return int((inv + nsp + neg <= n + des_b * des_b).sum())
    des_d = des + (-winv[:, 1] > winv[:, 0])
    maxw0 = np.where(des_d > 3, des_d * des_d - des_d, des_d * (des_d + 1) // 2)
    return int((inv + nsp <= n + maxw0).sum())


def _run_chunk(family: str, n: int, seed: int, chunk: int, size: int) -> int:
    rng = chunk_rng(seed, family, n, chunk)
    w = perms.sample_uniform_batch(family, n, size, rng)
    return _proper_hits(family, n, w)


def estimate_proportion(
    family: str,
    n: int,
    samples: int,
    seed: int,
    *,
    workers: int = 1,
) -> ProportionEstimate:
    """Monte Carlo estimate of Pr[w proper] with a Wilson 95% interval."""
    if family not in perms.FAMILY_CHOICES:
        raise ParameterError(f"family must be one of {perms.FAMILY_CHOICES}")
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    if n < 1:
        raise ParameterError("n must be >= 1")
    chunks = [
        (j, min(CHUNK_SAMPLES, samples - j * CHUNK_SAMPLES))
        for j in range((samples + CHUNK_SAMPLES - 1) // CHUNK_SAMPLES)
    ]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(
                pool.map(lambda js: _run_chunk(family, n, seed, js[0], js[1]), chunks)
            )
    else:
        hits = sum(_run_chunk(family, n, seed, j, size) for j, size in chunks)
    low, high = wilson_interval(hits, samples)
    return ProportionEstimate(
        family, n, samples, hits, hits / samples, low, high, seed
    )


def model_order(family: str, n: int) -> int:
    """Orders of S_n, S_n^B, S_n^D, valid for every n >= 1."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if family == "A":
        return math.factorial(n)
    if family == "B":
        return (1 << n) * math.factorial(n)
    if family == "D":
        return (1 << (n - 1)) * math.factorial(n)
    raise ParameterError(f"unknown family {family!r}")


def exhaustive_proportion(
    family: str, n: int, cap: int = 10_000_000
) -> Fraction:
    """Exact #proper / order by full iteration of the permutation model."""
    order = model_order(family, n)
    if order > cap:
        raise ResourceLimitError(
            f"{family} at n={n} has {order} elements, above the cap of {cap}"
        )
    rank = n - 1 if family == "A" else n
    proper = 0
    total = 0
    for w in perms.iter_all(family, n):
        length, descents = perms.length_and_descents(family, w)
        total += 1
        if length <= rank + _maxw0_value(family, descents):
            proper += 1
    return Fraction(proper, total)


def _maxw0_value(family: str, x: int) -> int:
    if family == "A":
        return x * (x + 1) // 2
    if family == "B":
        return x * x
    return x * x - x if x > 3 else x * (x + 1) // 2


def bound_A(n: int) -> float:
    """Explicit exponential upper bound on the type-A proper proportion.

    Valid for sufficiently large n; exceeds 1 at small n, so it is never
    used as an acceptance threshold there.
    """
    if n < 2:
        raise ParameterError("bounds are defined for n >= 2")
    return 2 * math.exp(-(n - 2) / 256) + math.exp(
        -3 * n**3 / (64 * (n - 1) * (2 * n - 1))
    )


def bound_BD(n: int) -> float:
    """Explicit exponential upper bound for types B and D; see bound_A."""
    if n < 2:
        raise ParameterError("bounds are defined for n >= 2")
    return 2 * math.exp(-(n - 2) / 256) + math.exp(
        -3 * n**3 / (256 * (n - 1) * (2 * n - 1))
    )


def emit_csv(estimates, path) -> Path:
    """Write estimates as CSV with the documented header; returns the path."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for est in estimates:
            if est.n >= 2:
                bound = bound_A(est.n) if est.family == "A" else bound_BD(est.n)
                bound_text = repr(bound)
            else:
                bound_text = ""
            writer.writerow(
                [
                    est.family,
                    est.n,
                    est.samples,
                    est.hits,
                    repr(est.estimate),
                    repr(est.ci_low),
                    repr(est.ci_high),
                    est.seed,
                    bound_text,
                ]
            )
    return path


def parse_csv(path) -> list[ProportionEstimate]:
    path = Path(path)
    out = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise FormatError(f"{path}: unexpected CSV header {header}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(CSV_HEADER):
                raise FormatError(f"{path}:{lineno}: expected {len(CSV_HEADER)} columns")
            try:
                out.append(
                    ProportionEstimate(
                        family=row[0],
                        n=int(row[1]),
                        samples=int(row[2]),
                        hits=int(row[3]),
                        estimate=float(row[4]),
                        ci_low=float(row[5]),
                        ci_high=float(row[6]),
                        seed=int(row[7]),
                    )
                )
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
    return out
