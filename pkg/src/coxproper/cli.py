"""Command-line front end.

Exit codes: 0 success, 2 parameter error (also used by argparse itself),
3 format error, 4 integrity/verification error, 5 resource limit.
Human-readable output goes to stdout; machine output is written only to
paths given via --csv / --manifest (enumeration runs also drop a
manifest.json inside their output directory, since the directory is the
run's artifact).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__, asymptotics, construction, enumeration, perms, proper
from .core import (
    CoxeterMatrix,
    MaxW0Table,
    TypeLabel,
    build_standard,
    group_order,
    longest_length,
    maxw0_bruteforce,
    maxw0_closed,
)
from .engine import GeometricRepresentation
from .errors import (
    FormatError,
    IntegrityError,
    ParameterError,
    ResourceLimitError,
)

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_FORMAT = 3
EXIT_INTEGRITY = 4
EXIT_RESOURCE = 5

OUT_DIR_ENV = "COXPROPER_DATA"


def _default_out_dir() -> str:
    return os.environ.get(OUT_DIR_ENV, "data")


def _write_manifest(path, payload: dict) -> None:
    payload = {"version": __version__, **payload}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _print_summary(summary: enumeration.EnumerationSummary) -> None:
    print(f"group {summary.group}  rank {summary.rank}  order {summary.order}")
    print(f"{'length':>6}  {'count':>12}  {'proper':>12}")
    for stats in summary.layers:
        print(f"{stats.length:>6}  {stats.count:>12}  {stats.proper_count:>12}")
    print(f"{'total':>6}  {summary.total_elements():>12}  {summary.proper_total:>12}")


def _parse_subset(text: str) -> frozenset[int]:
    try:
        return frozenset(int(tok) for tok in text.replace(",", " ").split())
    except ValueError as exc:
        raise ParameterError(f"bad index set {text!r}") from exc


def cmd_enumerate(args) -> int:
    label = TypeLabel.parse(args.group)
    if args.preflight:
        report = enumeration.preflight(
            label, args.out if not args.count_only else None,
            count_only=args.count_only,
        )
        print(f"group {report.group}: {report.order} elements, T={report.longest}")
        print(f"estimated peak layer: {report.est_peak_layer} elements")
        print(f"estimated memory: {report.est_memory_bytes / 1e9:.2f} GB")
        if not report.count_only:
            print(f"estimated disk: {report.est_disk_bytes / 1e9:.2f} GB")
        if report.disk_free_bytes is not None:
            print(f"free disk: {report.disk_free_bytes / 1e9:.2f} GB")
        print("preflight OK" if report.ok else "preflight FAILED")
        for reason in report.reasons:
            print(f"  - {reason}")
        return EXIT_OK if report.ok else EXIT_RESOURCE
    started = time.monotonic()
    summary = enumeration.generate_layers(
        label,
        out_dir=None if args.count_only else args.out,
        count_only=args.count_only,
        workers=args.workers,
        allow_huge=args.allow_huge,
        compress=args.compress,
    )
    _print_summary(summary)
    if args.manifest:
        _write_manifest(
            args.manifest,
            {
                "command": "enumerate",
                "group": summary.group,
                "workers": args.workers,
                "layer_counts": list(summary.layer_counts),
                "proper_total": summary.proper_total,
                "elapsed_seconds": round(time.monotonic() - started, 3),
            },
        )
    return EXIT_OK


def cmd_count_proper(args) -> int:
    started = time.monotonic()
    if args.dir:
        summary = enumeration.count_proper(
            args.group if args.group else None, from_dir=args.dir
        )
    else:
        summary = enumeration.count_proper(
            args.group, workers=args.workers, allow_huge=args.allow_huge
        )
    _print_summary(summary)
    if args.manifest:
        _write_manifest(
            args.manifest,
            {
                "command": "count-proper",
                "group": summary.group,
                "workers": args.workers,
                "proper_total": summary.proper_total,
                "layer_proper": [s.proper_count for s in summary.layers],
                "elapsed_seconds": round(time.monotonic() - started, 3),
            },
        )
    return EXIT_OK


def cmd_maxw0(args) -> int:
    label = TypeLabel.parse(args.group)
    if args.brute:
        matrix = build_standard(label)
        value = (
            maxw0_bruteforce(matrix, args.x)
            if args.x is not None
            else MaxW0Table.bruteforce(matrix).entries
        )
    else:
        value = (
            maxw0_closed(label, args.x)
            if args.x is not None
            else MaxW0Table.closed(label).entries
        )
    if args.x is not None:
        print(value)
    else:
        print(" ".join(map(str, value)))
    return EXIT_OK


def cmd_proper(args) -> int:
    label = TypeLabel.parse(args.group)
    table = MaxW0Table.closed(label)
    if args.count:
        if label.family != "I2":
            raise ParameterError("--count is the dihedral closed form; use count-proper otherwise")
        print(proper.proper_count_dihedral(label.param))
        return EXIT_OK
    if args.word is not None:
        if (args.length, args.descents) != (None, None):
            raise ParameterError("give either --word or --length/--descents, not both")
        engine = GeometricRepresentation(build_standard(label))
        g = engine.element_from_word(_parse_word(args.word))
        length, descents = g.length, g.descent_count()
    else:
        if args.length is None or args.descents is None:
            raise ParameterError("need --word or both --length and --descents")
        length, descents = args.length, args.descents
    query = proper.ProperQuery(label.rank, length, descents, table)
    verdict = proper.is_proper(query)
    print(
        f"{label}: length={length} descents={descents} "
        f"budget={label.rank}+{table[descents]} -> {'proper' if verdict else 'not proper'}"
    )
    return EXIT_OK


def _parse_word(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError as exc:
        raise ParameterError(f"bad word {text!r}") from exc


def cmd_spherical(args) -> int:
    label = TypeLabel.parse(args.group)
    matrix = build_standard(label)
    word = _parse_word(args.word)
    subset = _parse_subset(args.subset) if args.subset else None
    verdict = proper.is_I_spherical(matrix, word, subset, node_cap=args.node_cap)
    shown = "J(w)" if subset is None else str(sorted(subset))
    print(f"{label}: word {' '.join(map(str, word)) or 'e'} I={shown} -> "
          f"{'spherical' if verdict else 'not spherical'}")
    return EXIT_OK


def cmd_sample(args) -> int:
    estimates = []
    for family in args.family:
        for n in args.n:
            est = asymptotics.estimate_proportion(
                family, n, args.samples, args.seed, workers=args.workers
            )
            estimates.append(est)
            print(
                f"{family} n={n}: {est.hits}/{est.samples} proper, "
                f"estimate {est.estimate:.6g} "
                f"[{est.ci_low:.6g}, {est.ci_high:.6g}]"
            )
    if args.csv:
        asymptotics.emit_csv(estimates, args.csv)
    if args.manifest:
        _write_manifest(
            args.manifest,
            {
                "command": "sample",
                "rng": asymptotics.RNG_ALGORITHM,
                "seed": args.seed,
                "samples": args.samples,
                "workers": args.workers,
                "families": list(args.family),
                "n": list(args.n),
                "estimates": [
                    {"family": e.family, "n": e.n, "hits": e.hits} for e in estimates
                ],
            },
        )
    return EXIT_OK


def cmd_construct(args) -> int:
    params = construction.ConstructionParams(args.n, args.q, args.s)
    if args.list:
        for w in construction.enumerate_family(params):
            print(w)
        return EXIT_OK
    if args.verify:
        report = construction.verify_all_proper(params, cap=args.cap)
        print(
            f"n={params.n} q={params.q} s={params.s} "
            f"(a={params.a} r={params.r} b={params.b} d={params.d}): "
            f"{report.proper_count}/{report.total} proper, "
            f"condition {'holds' if report.condition else 'fails'}"
        )
        for w in report.violations:
            print(f"  violation: {w}")
        return EXIT_OK if report.all_proper else EXIT_INTEGRITY
    size = construction.family_size(params)
    bound = construction.lower_bound_count(params)
    print(f"family size {size} (lower bound {bound})")
    return EXIT_OK


def cmd_verify(args) -> int:
    label = TypeLabel.parse(args.group)
    failures = []

    def check(name: str, ok: bool) -> None:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures.append(name)

    summary = enumeration.count_proper(label, workers=args.workers)
    counts = summary.layer_counts
    check("layer sizes sum to the group order", sum(counts) == group_order(label))
    check(
        "layer sizes are symmetric",
        all(counts[t] == counts[len(counts) - 1 - t] for t in range(len(counts))),
    )
    check("unique identity and longest element", counts[0] == 1 and counts[-1] == 1)
    check(
        "maxw0 closed form equals brute force",
        MaxW0Table.closed(label).entries
        == MaxW0Table.bruteforce(build_standard(label)).entries,
    )
    if args.cross_check:
        if label.family not in ("A", "B", "D"):
            raise ParameterError("--cross-check applies to families A, B, D")
        model_n = label.param + 1 if label.family == "A" else label.param
        if group_order(label) > 100_000:
            raise ResourceLimitError("cross-check is for groups of order <= 100000")
        from collections import Counter

        model = Counter(
            perms.length_and_descents(label.family, w)
            for w in perms.iter_all(label.family, model_n)
        )
        bfs = Counter()
        for stats in summary.layers:
            for d, c in stats.descent_histogram.items():
                bfs[(stats.length, d)] += c
        check("engine/model (length, descents) multisets agree", model == bfs)
    return EXIT_OK if not failures else EXIT_INTEGRITY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxproper",
        description="Proper elements of finite Coxeter groups.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="generate layers and write word files")
    p.add_argument("--group", required=True)
    p.add_argument("--out", default=_default_out_dir())
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--allow-huge", action="store_true")
    p.add_argument("--compress", action="store_true")
    p.add_argument("--preflight", action="store_true", help="plan only, do no work")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("count-proper", help="count proper elements by length")
    p.add_argument("--group")
    p.add_argument("--dir", help="count from a written layer directory")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--allow-huge", action="store_true")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_count_proper)

    p = sub.add_parser("maxw0", help="maxw0(W, x) closed form or brute force")
    p.add_argument("--group", required=True)
    p.add_argument("--x", type=int)
    p.add_argument("--brute", action="store_true")
    p.set_defaults(func=cmd_maxw0)

    p = sub.add_parser("proper", help="decide properness of one element")
    p.add_argument("--group", required=True)
    p.add_argument("--word", help="reduced word, e.g. '1 2 1'")
    p.add_argument("--length", type=int)
    p.add_argument("--descents", type=int)
    p.add_argument("--count", action="store_true", help="dihedral proper count")
    p.set_defaults(func=cmd_proper)

    p = sub.add_parser("spherical", help="decide I-sphericality of one element")
    p.add_argument("--group", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--subset", help="comma-separated I, defaults to J(w)")
    p.add_argument("--node-cap", type=int, default=proper.DEFAULT_NODE_CAP)
    p.set_defaults(func=cmd_spherical)

    p = sub.add_parser("sample", help="Monte Carlo proper-proportion estimates")
    p.add_argument("--family", nargs="+", choices=perms.FAMILY_CHOICES, required=True)
    p.add_argument("--n", nargs="+", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("construct", help="the block-built proper family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--list", action="store_true")
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--verify", action="store_true")
    p.add_argument("--cap", type=int, default=100_000)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="self-checks for one group")
    p.add_argument("--group", required=True)
    p.add_argument("--cross-check", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
