"""Command-line front end.

    gaussring build   --modes 4 --s1 0.3 --s2 0.7
    gaussring ppt     --modes 6 --diag 0:1.5:0.05 --out ppt6.csv
    gaussring entropy --modes 10 --grid 0:1.0:0.1 --subsets consecutive
    gaussring moments --modes 6 --s1 0.5 --s2 0.5 --pairs 1-2,1-6
    gaussring reduce  --modes 12 --s1 0.4 --s2 0.8 --window 2-3-4-5

Mode labels on the command line and in every output are 1-based ring
positions. CSV output goes with a ``<out>.manifest.json`` sidecar; JSON output
embeds the manifest under ``"manifest"``.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

from . import __version__
from .entropy import (
    ALL_SUBSETS,
    CONSECUTIVE,
    Subset,
    candidate_subsets,
    core,
    e2n,
    gaussian_entropy,
    reduce_consecutive,
    reduced_cm,
    vacuum_modes,
)
from .moments import number_difference_variance
from .network import RING_LETTERS, NetworkSpec, build_network, table_conformance
from .ppt import (
    CLASS_GRID,
    class_grid_specs,
    classify_partitions,
    enumerate_bipartitions,
    gme_verdict,
    ppt_nu,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_GME = 3

# Coarse probe grid for class ids on rings above 8 modes; generic points only.
PROBE_POINTS = ((0.35, 0.8), (0.8, 0.35), (0.6, 0.6), (1.1, 0.45))

CONVENTIONS = {
    "quadrature_ordering": "XYXY",
    "vacuum_variance": 1.0,
    "nu": "smallest symplectic eigenvalue of the partially transposed CM (not squared)",
    "entropy_base": "bits",
    "entropy_formula": "S = 1/2 * sum_n h(nu_n)",
    "mode_labels": "1-based ring positions; first stage pairs (1,2),(3,4),...; second stage (2,3),...,(2N,1)",
    "squeezing_angle_default": "pi",
    "letter_maps": {str(n): letters for n, letters in RING_LETTERS.items()},
}


class CLIError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    n_modes: int
    points: tuple[tuple[float, float], ...]
    theta: float
    kind: str


def parse_range(text: str) -> list[float]:
    """``start:stop:step``; the last point may overshoot ``stop`` by under half a step."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise CLIError(f"invalid range {text!r}, expected start:stop:step") from None
    if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)):
        raise CLIError(f"invalid range {text!r}")
    if step <= 0:
        raise CLIError("range step must be positive")
    if start > stop:
        raise CLIError("range start must not exceed stop")
    count = math.floor((stop - start) / step + 0.5) + 1
    return [round(start + k * step, 12) for k in range(count)]


def parse_modes_list(text: str) -> tuple[int, ...]:
    try:
        labels = tuple(int(x) for x in text.split("-"))
    except ValueError:
        raise CLIError(f"invalid mode list {text!r}, expected e.g. 1-2-3") from None
    return labels


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x + 0.0, ".15g")
    return str(x)


def timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (
        datetime.fromtimestamp(int(epoch), tz=timezone.utc)
        if epoch
        else datetime.now(tz=timezone.utc)
    )
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def manifest(args: argparse.Namespace, sweep: SweepSpec | None) -> dict:
    echo = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "threads", "out") and v is not None
    }
    if sweep is not None:
        echo["modes"] = sweep.n_modes
        echo["theta"] = sweep.theta
        echo["n_points"] = len(sweep.points)
    return {
        "tool": "gaussring",
        "version": __version__,
        "conventions": CONVENTIONS,
        "spec": echo,
        "timestamp": timestamp(),
    }


def build_sweep(args: argparse.Namespace, kind: str) -> SweepSpec:
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = NetworkSpec.from_dict(json.load(fh)).to_dict()
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise CLIError(f"cannot read config {args.config}: {exc}") from None
    n_modes = args.modes if args.modes is not None else cfg.get("modes")
    if n_modes is None:
        raise CLIError("--modes is required (or give it in --config)")
    s1 = args.s1 if args.s1 is not None else cfg.get("s1", 0.0)
    s2 = args.s2 if args.s2 is not None else cfg.get("s2", 0.0)
    theta = args.theta if args.theta is not None else cfg.get("theta", math.pi)
    if args.diag and args.grid:
        raise CLIError("--diag and --grid are mutually exclusive")
    if args.diag:
        points = tuple((s, s) for s in parse_range(args.diag))
    elif args.grid:
        g = parse_range(args.grid)
        points = tuple(itertools.product(g, g))
    else:
        points = ((float(s1), float(s2)),)
    for a, b in points:
        try:
            NetworkSpec(n_modes, a, b, theta)
        except ValueError as exc:
            raise CLIError(str(exc)) from None
    return SweepSpec(n_modes, points, theta, kind)


def fan_out(func, items, threads: int | None):
    items = list(items)
    workers = threads or os.cpu_count() or 1
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def write_output(args, sweep, header, rows, payload, indent=2) -> None:
    """Write CSV rows or a JSON payload, plus the manifest."""
    meta = manifest(args, sweep)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(x) for x in row])
        text = buf.getvalue()
        meta_text = json.dumps(meta, indent=2, sort_keys=True) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
                fh.write(meta_text)
        else:
            sys.stdout.write(text)
            sys.stderr.write(meta_text)
    else:
        if isinstance(payload, dict):
            doc = dict(payload)
            doc["manifest"] = meta
        else:
            doc = {"manifest": meta, "data": payload}
        text = json.dumps(doc, indent=indent) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def cmd_build(args) -> int:
    sweep = build_sweep(args, "build")
    if len(sweep.points) != 1:
        raise CLIError("build takes a single (s1, s2) point")
    (s1, s2), = sweep.points
    spec = NetworkSpec(sweep.n_modes, s1, s2, sweep.theta)
    cm = build_network(spec)
    if args.format == "csv":
        rows = [list(r) for r in cm.matrix]
        header = [f"{q}{m + 1}" for m in range(spec.n_modes) for q in "XY"]
        write_output(args, sweep, header, rows, None)
        return EXIT_OK
    payload = cm.to_dict()
    payload["spec"] = spec.to_dict()
    if spec.n_modes >= 8:
        payload["conformance"] = table_conformance(spec)
    write_output(args, sweep, None, None, payload, indent=None)
    return EXIT_OK


def ppt_class_ids(n_modes: int, partitions) -> dict:
    if n_modes <= 8:
        specs = class_grid_specs(n_modes, CLASS_GRID)
    else:
        specs = [NetworkSpec(n_modes, a, b) for a, b in PROBE_POINTS]
    classes = classify_partitions(specs, partitions)
    return {b: idx for idx, cls in enumerate(classes) for b in cls.members}


def cmd_ppt(args) -> int:
    sweep = build_sweep(args, "ppt")
    try:
        parts = enumerate_bipartitions(sweep.n_modes)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    class_ids = ppt_class_ids(sweep.n_modes, parts)

    def point(p):
        s1, s2 = p
        cm = build_network(NetworkSpec(sweep.n_modes, s1, s2, sweep.theta))
        if args.verdict or args.format == "json":
            return gme_verdict(cm)
        return [ppt_nu(cm, b) for b in parts]

    out = fan_out(point, sweep.points, args.threads)
    results = [r.results if hasattr(r, "results") else r for r in out]
    rows = []
    for (s1, s2), res in sorted(zip(sweep.points, results), key=lambda t: t[0]):
        for r in sorted(res, key=lambda r: (len(r.bipartition.block), r.bipartition.block)):
            b = r.bipartition
            rows.append([s1, s2, b.label, b.shape_label, class_ids[b], r.nu, r.inseparable])
    payload = None
    if args.format == "json":
        payload = [
            {"s1": s1, "s2": s2, **rep.to_dict()}
            for (s1, s2), rep in sorted(zip(sweep.points, out), key=lambda t: t[0])
        ]
    write_output(
        args,
        sweep,
        ["s1", "s2", "partition_label", "shape", "class_id", "nu", "inseparable"],
        rows,
        payload,
    )
    if args.verdict:
        failed = [p for p, rep in zip(sweep.points, out) if not rep.gme]
        if failed:
            s1, s2 = failed[0]
            print(
                f"GME not certified at {len(failed)} point(s), first at s1={fmt(s1)}, s2={fmt(s2)}",
                file=sys.stderr,
            )
            return EXIT_NOT_GME
    return EXIT_OK


def cmd_entropy(args) -> int:
    sweep = build_sweep(args, "entropy")
    mode = ALL_SUBSETS if args.subsets == "all" else CONSECUTIVE
    try:
        candidate_subsets(sweep.n_modes, mode)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    reports = fan_out(
        lambda p: e2n(NetworkSpec(sweep.n_modes, p[0], p[1], sweep.theta), mode),
        sweep.points,
        args.threads,
    )
    pairs = sorted(zip(sweep.points, reports), key=lambda t: t[0])
    rows = [
        [s1, s2, sub.label, len(sub), rep.entropies[sub]]
        for (s1, s2), rep in pairs
        for sub in sorted(rep.entropies, key=lambda s: (len(s), s.modes))
    ]
    payload = [rep.to_dict() for _, rep in pairs]
    write_output(args, sweep, ["s1", "s2", "subset", "size", "entropy_bits"], rows, payload)
    return EXIT_OK


def cmd_moments(args) -> int:
    sweep = build_sweep(args, "moments")
    n = sweep.n_modes
    if args.pairs:
        pairs = []
        for item in args.pairs.split(","):
            labels = parse_modes_list(item)
            if len(labels) != 2 or labels[0] == labels[1]:
                raise CLIError(f"invalid pair {item!r}")
            if not all(1 <= m <= n for m in labels):
                raise CLIError(f"pair {item!r} out of range for {n} modes")
            pairs.append((labels[0] - 1, labels[1] - 1))
    else:
        pairs = list(itertools.combinations(range(n), 2))

    def point(p):
        cm = build_network(NetworkSpec(n, p[0], p[1], sweep.theta))
        return [number_difference_variance(cm, i, j) for i, j in pairs]

    out = fan_out(point, sweep.points, args.threads)
    rows = [
        [s1, s2, m.mode_i + 1, m.mode_j + 1, m.v_diff, m.nbar_i, m.nbar_j]
        for (s1, s2), res in sorted(zip(sweep.points, out), key=lambda t: t[0])
        for m in res
    ]
    header = ["s1", "s2", "mode_i", "mode_j", "v_diff", "nbar_i", "nbar_j"]
    payload = [dict(zip(header, r)) for r in rows]
    write_output(args, sweep, header, rows, payload)
    return EXIT_OK


def cmd_reduce(args) -> int:
    sweep = build_sweep(args, "reduce")
    if not args.window:
        raise CLIError("--window is required, e.g. --window 2-3-4-5")
    try:
        window = Subset.from_labels(parse_modes_list(args.window), sweep.n_modes)
    except ValueError as exc:
        raise CLIError(str(exc)) from None

    def point(p):
        spec = NetworkSpec(sweep.n_modes, p[0], p[1], sweep.theta)
        cm = build_network(spec)
        out = reduce_consecutive(cm, window, spec)
        return {
            "s1": p[0],
            "s2": p[1],
            "window": window.label,
            "entropy_before": gaussian_entropy(reduced_cm(cm, window)),
            "entropy_after": gaussian_entropy(out),
            "vacuum_positions": [m + 1 for m in vacuum_modes(out)],
            "core_size": core(out).n_modes,
            "reduced_cm": out.to_dict(),
        }

    try:
        out = fan_out(point, sweep.points, args.threads)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    out.sort(key=lambda d: (d["s1"], d["s2"]))
    header = ["s1", "s2", "window", "entropy_before", "entropy_after", "core_size"]
    rows = [[d[k] for k in header] for d in out]
    write_output(args, sweep, header, rows, out, indent=None)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--modes", type=int, help="number of ring modes 2N")
    common.add_argument("--s1", type=float, help="first-stage squeezing")
    common.add_argument("--s2", type=float, help="second-stage squeezing")
    common.add_argument("--theta", type=float, help="squeezing angle (default pi)")
    common.add_argument("--diag", metavar="RANGE", help="sweep s1 = s2 over start:stop:step")
    common.add_argument("--grid", metavar="RANGE", help="sweep s1 and s2 over start:stop:step")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--threads", type=int, help="worker threads for sweeps")
    common.add_argument("--config", metavar="PATH", help='JSON {"modes","s1","s2","theta"}')

    parser = argparse.ArgumentParser(prog="gaussring", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="covariance matrix of the ring")
    p.set_defaults(func=cmd_build, default_format="json")

    p = sub.add_parser("ppt", parents=[common], help="PPT nu over all bipartitions")
    p.add_argument("--verdict", action="store_true", help="exit 3 unless GME holds everywhere")
    p.set_defaults(func=cmd_ppt, default_format="csv")

    p = sub.add_parser("entropy", parents=[common], help="subset entropies and E_2N")
    p.add_argument("--subsets", choices=("all", "consecutive"), default="consecutive")
    p.set_defaults(func=cmd_entropy, default_format="csv")

    p = sub.add_parser("moments", parents=[common], help="photon-number difference variances")
    p.add_argument("--pairs", help="comma-separated 1-based pairs, e.g. 1-2,1-6")
    p.set_defaults(func=cmd_moments, default_format="csv")

    p = sub.add_parser("reduce", parents=[common], help="unitary reduction of a ring window")
    p.add_argument("--window", help="dash-joined 1-based ring window, e.g. 2-3-4-5")
    p.set_defaults(func=cmd_reduce, default_format="json")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    del args.default_format
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
