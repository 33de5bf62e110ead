"""Layered enumeration: generate by length, persist words, count proper.

The generator walks Z_0 = {e}, Z_{t+1} = {s_i w | w in Z_t, i not a left
descent of w}, deduplicating each layer by the exact matrix key, so only
two consecutive layers are ever held in memory.  Layer t of group G is
written to <out>/<G>/<t>.txt, one canonical reduced word per line (the
identity is a single empty line in 0.txt); the words in a file are sorted,
which together with set-based deduplication makes every output identical
across runs and worker counts.

Only counts are comparable against other software: which reduced word is
stored per element is a normal-form choice (smallest-descent peeling here).
"""

from __future__ import annotations

import hashlib
import json
import shutil
import tarfile
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .core import (
    CoxeterMatrix,
    MaxW0Table,
    TypeLabel,
    as_label,
    build_standard,
    group_order,
    identify,
    longest_length,
)
from .engine import GeometricRepresentation
from .errors import (
    FormatError,
    IntegrityError,
    ParameterError,
    ResourceLimitError,
)
from .proper import dihedral_elements, dihedral_maxw0_table, is_proper_stats

HUGE_ORDER_THRESHOLD = 100_000_000  # only E8 exceeds this
_ELEMENT_BYTES_GUESS = 120  # rough per-element set cost on top of the key


@dataclass(frozen=True)
class LayerStats:
    """Counts for one length layer."""

    length: int
    count: int
    proper_count: int
    descent_histogram: dict[int, int]


@dataclass(frozen=True)
class EnumerationSummary:
    """Whole-group result of an enumeration or counting run."""

    group: str
    rank: int
    longest: int
    order: int
    layers: tuple[LayerStats, ...]
    proper_total: int
    standard: bool = True

    @property
    def layer_counts(self) -> tuple[int, ...]:
        return tuple(stats.count for stats in self.layers)

    def total_elements(self) -> int:
        return sum(stats.count for stats in self.layers)


@dataclass(frozen=True)
class PreflightReport:
    group: str
    order: int
    longest: int
    count_only: bool
    est_peak_layer: int
    est_memory_bytes: int
    est_disk_bytes: int
    disk_free_bytes: int | None
    ok: bool
    reasons: tuple[str, ...] = ()


def _resolve(source) -> tuple["TypeLabel | None", CoxeterMatrix, MaxW0Table]:
    """Label (if recognizable), matrix, and maxw0 table for a source."""
    if isinstance(source, CoxeterMatrix):
        label = identify(source)
        table = MaxW0Table.closed(label) if label else MaxW0Table.bruteforce(source)
        return label, source, table
    label = as_label(source)
    return label, build_standard(label), MaxW0Table.closed(label)


def _extension_table(rank: int) -> list[tuple[int, ...]]:
    """mask -> generator indices (0-based) that are not descents."""
    return [
        tuple(i for i in range(rank) if not (mask >> i) & 1)
        for mask in range(1 << rank)
    ]


def _chunks(items: list, workers: int) -> list[list]:
    if workers <= 1 or len(items) < 2 * workers:
        return [items]
    size = (len(items) + workers - 1) // workers
    return [items[i : i + size] for i in range(0, len(items), size)]


def _scan_block(engine, ext, keys) -> tuple[Counter, set]:
    """Descent histogram of a block plus all its one-step extensions."""
    descent_mask = engine._descent_mask
    apply_gen = engine._apply
    hist: Counter = Counter()
    nxt = set()
    for key in keys:
        mask = descent_mask(key)
        hist[mask.bit_count()] += 1
        for i0 in ext[mask]:
            nxt.add(apply_gen(key, i0))
    return hist, nxt


def _word_block(engine, prev_words, keys) -> dict:
    """Canonical words for new keys: peel the smallest descent once."""
    descent_mask = engine._descent_mask
    apply_gen = engine._apply
    out = {}
    for key in keys:
        mask = descent_mask(key)
        i0 = (mask & -mask).bit_length() - 1
        out[key] = (i0 + 1,) + prev_words[apply_gen(key, i0)]
    return out


def layer_path(directory: Path, length: int) -> Path:
    return Path(directory) / f"{length}.txt"


def write_layer(path: Path, words) -> str:
    """Write one word per line; returns the file's sha256 hex digest."""
    path = Path(path)
    data = "\n".join(" ".join(map(str, word)) for word in words) + "\n"
    payload = data.encode("ascii")
    path.write_bytes(payload)
    return hashlib.sha256(payload).hexdigest()


def read_layer(path: Path, rank: int | None = None, length: int | None = None):
    """Words from a layer file; a missing file reads as the empty layer."""
    path = Path(path)
    if not path.exists():
        return []
    words = []
    seen = set()
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        tokens = line.split()
        try:
            word = tuple(int(tok) for tok in tokens)
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: non-integer token") from exc
        if length is not None and len(word) != length:
            raise FormatError(
                f"{path}:{lineno}: expected {length} indices, found {len(word)}"
            )
        if rank is not None and any(not 1 <= i <= rank for i in word):
            raise FormatError(f"{path}:{lineno}: generator index out of range")
        if word in seen:
            raise FormatError(f"{path}:{lineno}: duplicate word")
        seen.add(word)
        words.append(word)
    return words


def generate_layers(
    source,
    out_dir=None,
    *,
    count_only: bool | None = None,
    workers: int = 1,
    allow_huge: bool = False,
    compress: bool = False,
    memory_budget: int | None = None,
    progress=None,
) -> EnumerationSummary:
    """Enumerate a group layer by length; optionally persist words.

    ``count_only`` defaults to True when no output directory is given.
    Raises ResourceLimitError before starting a group above the huge
    threshold unless ``allow_huge`` is set, and with a partial-progress
    manifest if a memory budget or the disk gives out mid-run.
    """
    label, matrix, table = _resolve(source)
    name = str(label) if label else f"custom-rank{matrix.rank}"
    order = group_order(label) if label else None
    if order is not None and order > HUGE_ORDER_THRESHOLD and not allow_huge:
        raise ResourceLimitError(
            f"{name} has {order} elements; pass allow_huge to run it anyway"
        )
    if count_only is None:
        count_only = out_dir is None
    if out_dir is None and not count_only:
        raise ParameterError("persisting words requires an output directory")

    engine = GeometricRepresentation(matrix)
    rank = matrix.rank
    ext = _extension_table(rank)

    directory = None
    manifest_layers: list[dict] = []
    if out_dir is not None:
        directory = Path(out_dir) / name
        directory.mkdir(parents=True, exist_ok=True)

    started = time.monotonic()
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    layers: list[LayerStats] = []
    proper_total = 0

    def run_blocks(fn, items, *args):
        blocks = _chunks(items, workers)
        if pool is None or len(blocks) == 1:
            return [fn(*args, block) for block in blocks]
        return list(pool.map(lambda block: fn(*args, block), blocks))

    frontier: dict | set
    if count_only:
        frontier = {engine.identity_key}
    else:
        frontier = {engine.identity_key: ()}
    length = 0
    try:
        while frontier:
            keys = list(frontier)
            results = run_blocks(_scan_block, keys, engine, ext)
            hist: Counter = Counter()
            next_keys: set = set()
            for block_hist, block_next in results:
                hist.update(block_hist)
                next_keys.update(block_next)
            proper_here = sum(
                c for d, c in hist.items() if is_proper_stats(length, d, table)
            )
            proper_total += proper_here
            layers.append(
                LayerStats(length, len(keys), proper_here, dict(sorted(hist.items())))
            )
            if directory is not None:
                words = sorted(frontier.values())
                digest = write_layer(layer_path(directory, length), words)
                manifest_layers.append(
                    {
                        "length": length,
                        "count": len(words),
                        "proper": proper_here,
                        "sha256": digest,
                    }
                )
            if progress is not None:
                progress(length, len(keys))
            if memory_budget is not None:
                est = 2 * len(next_keys) * (_ELEMENT_BYTES_GUESS + 8 * rank * rank)
                if est > memory_budget:
                    raise ResourceLimitError(
                        f"layer {length + 1} (~{len(next_keys)} elements) would "
                        f"exceed the memory budget of {memory_budget} bytes"
                    )
            if count_only:
                frontier = next_keys
            else:
                word_blocks = run_blocks(_word_block, list(next_keys), engine, frontier)
                merged: dict = {}
                for block in word_blocks:
                    merged.update(block)
                frontier = merged
            length += 1
    except (ResourceLimitError, OSError) as exc:
        if directory is not None:
            _write_manifest(
                directory,
                name,
                matrix.rank,
                layers,
                manifest_layers,
                proper_total,
                workers,
                time.monotonic() - started,
                partial=True,
                error=str(exc),
            )
        if isinstance(exc, OSError):
            raise ResourceLimitError(f"I/O failure during enumeration: {exc}") from exc
        raise
    finally:
        if pool is not None:
            pool.shutdown()

    summary = EnumerationSummary(
        group=name,
        rank=matrix.rank,
        longest=length - 1,
        order=order if order is not None else sum(s.count for s in layers),
        layers=tuple(layers),
        proper_total=proper_total,
        standard=label is not None,
    )
    if directory is not None:
        _write_manifest(
            directory,
            name,
            matrix.rank,
            layers,
            manifest_layers,
            proper_total,
            workers,
            time.monotonic() - started,
        )
        if compress:
            compress_directory(directory)
    return summary


def _write_manifest(
    directory: Path,
    name: str,
    rank: int,
    layers,
    manifest_layers,
    proper_total: int,
    workers: int,
    elapsed: float,
    partial: bool = False,
    error: str | None = None,
) -> None:
    manifest = {
        "group": name,
        "rank": rank,
        "longest": layers[-1].length if layers and not partial else None,
        "layers": manifest_layers,
        "proper_total": proper_total,
        "complete": not partial,
        "version": __version__,
        "workers": workers,
        "elapsed_seconds": round(elapsed, 3),
    }
    if error:
        manifest["error"] = error
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def compress_directory(directory: Path) -> Path:
    """Pack <dir> into <dir>.tar.gz; extracted contents are byte-identical."""
    directory = Path(directory)
    archive = directory.with_suffix(".tar.gz")
    with tarfile.open(archive, "w:gz") as tar:
        tar.add(directory, arcname=directory.name)
    return archive


def count_proper(
    source,
    *,
    from_dir=None,
    workers: int = 1,
    allow_huge: bool = False,
) -> EnumerationSummary:
    """Total and per-layer proper counts, live or from a written directory.

    Dihedral labels are answered symbolically (any m); everything else runs
    the matrix engine.
    """
    if from_dir is not None:
        return _count_proper_from_dir(Path(from_dir), source)
    label = as_label(source) if not isinstance(source, CoxeterMatrix) else None
    if label is not None and label.family == "I2":
        return _dihedral_summary(label)
    return generate_layers(
        source, count_only=True, workers=workers, allow_huge=allow_huge
    )


def _dihedral_summary(label: TypeLabel) -> EnumerationSummary:
    m = label.param
    table = dihedral_maxw0_table(m)
    per_layer: dict[int, Counter] = {}
    for length, d in dihedral_elements(m):
        per_layer.setdefault(length, Counter())[d] += 1
    layers = []
    proper_total = 0
    for length in range(m + 1):
        hist = per_layer[length]
        proper = sum(
            c for d, c in hist.items() if is_proper_stats(length, d, table)
        )
        proper_total += proper
        layers.append(
            LayerStats(length, sum(hist.values()), proper, dict(sorted(hist.items())))
        )
    return EnumerationSummary(
        group=str(label),
        rank=2,
        longest=m,
        order=2 * m,
        layers=tuple(layers),
        proper_total=proper_total,
    )


def _count_proper_from_dir(directory: Path, source=None) -> EnumerationSummary:
    if not directory.is_dir():
        raise IntegrityError(f"{directory} is not a directory")
    if source is None:
        label = TypeLabel.parse(directory.name)
    else:
        label = as_label(source)
    matrix = build_standard(label)
    table = MaxW0Table.closed(label)
    engine = GeometricRepresentation(matrix)
    longest = longest_length(label)
    missing = [
        l for l in range(longest + 1) if not layer_path(directory, l).exists()
    ]
    if missing:
        raise IntegrityError(
            f"{directory} is missing layer files below T={longest}: {missing[:8]}"
        )

    layers = []
    proper_total = 0
    for length in range(longest + 1):
        words = read_layer(layer_path(directory, length), matrix.rank, length)
        hist: Counter = Counter()
        for word in words:
            g = engine.element_from_word(word)
            if g.length != length:
                raise IntegrityError(
                    f"{layer_path(directory, length)}: word {word} is not reduced"
                )
            hist[g.descent_count()] += 1
        proper = sum(c for d, c in hist.items() if is_proper_stats(length, d, table))
        proper_total += proper
        layers.append(
            LayerStats(length, len(words), proper, dict(sorted(hist.items())))
        )
    summary = EnumerationSummary(
        group=str(label),
        rank=matrix.rank,
        longest=longest,
        order=group_order(label),
        layers=tuple(layers),
        proper_total=proper_total,
    )
    if summary.total_elements() != summary.order:
        raise IntegrityError(
            f"{directory}: {summary.total_elements()} stored words but the "
            f"group has {summary.order} elements"
        )
    return summary


def preflight(
    source, out_dir=None, *, count_only: bool = False
) -> PreflightReport:
    """Resource plan for an enumeration run, with no group work done."""
    label, matrix, _ = _resolve(source)
    name = str(label) if label else f"custom-rank{matrix.rank}"
    order = group_order(label) if label else -1
    longest = longest_length(label) if label else -1
    reasons: list[str] = []

    # Layer widths are largest mid-run; a flat estimate of 3x the average
    # is comfortably above the true peak for every supported group.
    est_peak = max(1, (3 * order) // max(longest + 1, 1)) if order > 0 else 0
    per_element = _ELEMENT_BYTES_GUESS + 8 * matrix.rank * matrix.rank
    est_memory = 2 * est_peak * per_element
    # one word per element, ~2.6 bytes per letter, average length T/2
    est_disk = 0 if count_only else int(order * max(longest, 1) * 1.3) + 4096

    disk_free = None
    if out_dir is not None:
        out_path = Path(out_dir)
        out_path.mkdir(parents=True, exist_ok=True)
        disk_free = shutil.disk_usage(out_path).free
        if not count_only and est_disk > disk_free:
            reasons.append(
                f"estimated {est_disk} bytes of words exceed free disk {disk_free}"
            )
    elif not count_only:
        reasons.append("word persistence requested without an output directory")

    try:
        GeometricRepresentation(matrix)
    except Exception as exc:  # noqa: BLE001 - surfaced in the report
        reasons.append(str(exc))

    return PreflightReport(
        group=name,
        order=order,
        longest=longest,
        count_only=count_only,
        est_peak_layer=est_peak,
        est_memory_bytes=est_memory,
        est_disk_bytes=est_disk,
        disk_free_bytes=disk_free,
        ok=not reasons,
        reasons=tuple(reasons),
    )
