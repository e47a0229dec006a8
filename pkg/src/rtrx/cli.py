"""Command line front end: extract, stats, and compare.

Every tunable can also come from a key=value config file (--config);
explicit flags win. Output files contain no timestamps or machine info,
so reruns with identical inputs and flags are byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from .extractor import ExtractionParams, run
from .graph import Graph, load_edge_list
from .metrics import coverage, family_report
from .postprocess import grow
from .triangles import count_edge_triangle_array

_DEFAULTS = {
    "epsilon": 0.1,
    "grow_k": 10,
    "no_grow": False,
    "two_hop": "sweep",
    "beta": 0.0,
    "gammas": "0.5,0.8",
    "min_size": 5,
    "sweep_density": "h",
    "threads": None,
    "deterministic": False,
    "input": None,
    "out_prefix": None,
}

_FLOAT_KEYS = {"epsilon", "beta"}
_INT_KEYS = {"grow_k", "min_size", "threads"}
_BOOL_KEYS = {"no_grow", "deterministic"}
_MODE_NAMES = {"sweep": "greedy_sweep", "beta": "beta_threshold"}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rtrx",
        description="Extract disjoint dense, triangle-rich vertex sets from a graph.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--input", help="edge list file (# comments, .gz ok)")
        sp.add_argument("--config", help="key=value config file; flags override")
        sp.add_argument("--threads", type=int, help="triangle counting workers "
                        "(default: available parallelism, env RTR_THREADS)")
        sp.add_argument("--deterministic", action="store_const", const=True,
                        help="force the sequential counting path")

    pe = sub.add_parser("extract", help="run the full extraction pipeline")
    common(pe)
    pe.add_argument("--out-prefix", help="prefix for .sets/.report.json/.coverage.csv")
    pe.add_argument("--epsilon", type=float, help="cleaning fraction in (0,1), default 0.1")
    pe.add_argument("--grow-k", type=int, help="growing neighbor threshold, default 10")
    pe.add_argument("--no-grow", action="store_const", const=True,
                    help="skip the growing pass")
    pe.add_argument("--two-hop", choices=["sweep", "beta"],
                    help="two-hop selection mode, default sweep")
    pe.add_argument("--beta", type=float, help="threshold for --two-hop beta")
    pe.add_argument("--gammas", help="comma separated coverage thresholds, default 0.5,0.8")
    pe.add_argument("--min-size", type=int, help="coverage size filter, default 5")
    pe.add_argument("--sweep-density", choices=["h", "g"],
                    help="evaluate sweep density over live (h) or all (g) edges")
    pe.set_defaults(func=cmd_extract)

    ps = sub.add_parser("stats", help="print summary statistics for a graph")
    common(ps)
    ps.set_defaults(func=cmd_stats)

    pc = sub.add_parser("compare", help="evaluate one or more set files on a graph")
    common(pc)
    pc.add_argument("set_files", nargs="+", help="set files to evaluate")
    pc.add_argument("--gammas", help="comma separated coverage thresholds, default 0.5,0.8")
    pc.add_argument("--min-size", type=int, help="coverage size filter, default 5")
    pc.set_defaults(func=cmd_compare)
    return p


def _load_config(path: str) -> dict:
    cfg = {}
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            if "=" not in s:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, val = s.split("=", 1)
            key = key.strip().replace("-", "_")
            if key not in _DEFAULTS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            cfg[key] = val.strip()
    return cfg


def _coerce(key: str, raw: str):
    if key in _FLOAT_KEYS:
        return float(raw)
    if key in _INT_KEYS:
        return int(raw)
    if key in _BOOL_KEYS:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"config key {key!r}: expected a boolean, got {raw!r}")
    return raw


def _merge_options(args) -> dict:
    cfg = _load_config(args.config) if getattr(args, "config", None) else {}
    opts = {}
    for key, default in _DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            opts[key] = flag
        elif key in cfg:
            opts[key] = _coerce(key, cfg[key])
        else:
            opts[key] = default
    return opts


def _resolve_threads(opts) -> int:
    if opts["deterministic"]:
        return 1
    if opts["threads"] is not None:
        return max(1, int(opts["threads"]))
    env = os.environ.get("RTR_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _parse_gammas(raw: str):
    out = []
    for tok in str(raw).split(","):
        tok = tok.strip()
        if not tok:
            continue
        val = float(tok)
        if not 0 <= val <= 1:
            raise ValueError(f"coverage threshold {val} outside [0, 1]")
        out.append(val)
    if not out:
        raise ValueError("no coverage thresholds given")
    return out


def _require(opts, key, flag):
    if opts[key] is None:
        raise ValueError(f"{flag} is required")
    return opts[key]


def write_sets_file(path, g: Graph, fam, header_params: str) -> None:
    """One set per line as space-separated original labels (ascending),
    extraction order; '#' header lines carry the parameters."""
    with open(path, "w") as f:
        f.write("# rtrx sets\n")
        f.write(f"# {header_params}\n")
        for t in fam.sets:
            labels = np.sort(g.labels[t])
            f.write(" ".join(str(int(x)) for x in labels) + "\n")


def read_sets_file(path, g: Graph):
    """Parse a sets file back into internal-id arrays. Unknown labels are
    an error naming the label."""
    sets = []
    with open(path) as f:
        for line in f:
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            ids = []
            for tok in s.split():
                val = int(tok)
                if not g.has_label(val):
                    raise ValueError(f"unknown label {val}")
                ids.append(g.id_of_label(val))
            if ids:
                sets.append(np.unique(np.array(ids, dtype=np.int32)))
    return sets


def cmd_extract(args) -> int:
    opts = _merge_options(args)
    input_path = _require(opts, "input", "--input")
    prefix = _require(opts, "out_prefix", "--out-prefix")
    gammas = _parse_gammas(opts["gammas"])
    min_size = int(opts["min_size"])
    params = ExtractionParams(
        epsilon=opts["epsilon"],
        grow_k=int(opts["grow_k"]),
        two_hop_mode=_MODE_NAMES[opts["two_hop"]],
        beta=opts["beta"],
        sweep_density=opts["sweep_density"],
    )
    threads = _resolve_threads(opts)

    t0 = time.perf_counter()
    g = load_edge_list(input_path)
    counts = count_edge_triangle_array(g, threads=threads)
    total_triangles = int(counts.sum()) // 3
    fam = run(g, params, counts=counts)
    grow_on = not opts["no_grow"] and params.grow_k >= 1
    if grow_on:
        fam = grow(g, fam, params.grow_k)
    report = family_report(g, fam, thresholds=gammas, min_size=min_size)
    elapsed = time.perf_counter() - t0

    header = (f"epsilon={opts['epsilon']} two_hop={opts['two_hop']}"
              + (f" beta={opts['beta']}" if opts["two_hop"] == "beta" else "")
              + f" sweep_density={opts['sweep_density']}"
              + (f" grow_k={params.grow_k}" if grow_on else " no_grow=true"))
    write_sets_file(f"{prefix}.sets", g, fam, header)
    with open(f"{prefix}.report.json", "w") as f:
        f.write(report.to_json())
    with open(f"{prefix}.coverage.csv", "w") as f:
        f.write("gamma,min_size,coverage_pct\n")
        for gm, ms, pct in report.coverage:
            f.write(f"{gm:g},{ms},{pct:.2f}\n")

    print(f"n={g.n} m={g.m} triangles={total_triangles} sets={fam.num_sets} "
          f"singletons={fam.num_unassigned} time={elapsed:.2f}s")
    return 0


def cmd_stats(args) -> int:
    opts = _merge_options(args)
    input_path = _require(opts, "input", "--input")
    threads = _resolve_threads(opts)
    g = load_edge_list(input_path)
    counts = count_edge_triangle_array(g, threads=threads)
    total = int(counts.sum()) // 3
    avg_deg = 2.0 * g.m / g.n
    density = g.m / (g.n * (g.n - 1) / 2.0)
    print(f"n={g.n} m={g.m} triangles={total} "
          f"avg_degree={avg_deg:.2f} edge_density={density:.2e}")
    return 0


def cmd_compare(args) -> int:
    opts = _merge_options(args)
    input_path = _require(opts, "input", "--input")
    gammas = _parse_gammas(opts["gammas"])
    min_size = int(opts["min_size"])
    g = load_edge_list(input_path)

    from .metrics import _set_edge_densities

    header = ["family"] + [f"cov@{gm:g}" for gm in gammas] + [
        "largest", "largest_ed", "mean_ed_ge10"]
    rows = []
    for path in args.set_files:
        sets = read_sets_file(path, g)
        row = [os.path.basename(path)]
        for gm in gammas:
            row.append(f"{coverage(g, sets, gm, min_size):.2f}")
        if sets:
            eds = _set_edge_densities(g, sets)
            big = max(range(len(sets)), key=lambda i: (sets[i].size, -i))
            row.append(str(int(sets[big].size)))
            row.append(f"{eds[big]:.4f}")
            tens = [eds[i] for i in range(len(sets)) if sets[i].size >= 10]
            row.append(f"{float(np.mean(tens)):.4f}" if tens else "-")
        else:
            row.extend(["0", "-", "-"])
        rows.append(row)

    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(header)]
    print("  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip())
    for r in rows:
        print("  ".join(r[i].rjust(widths[i]) if i else r[i].ljust(widths[i])
                        for i in range(len(r))).rstrip())
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
