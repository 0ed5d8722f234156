"""Command-line entry point: ``bandclust <command> [options]``.

Exit codes: 0 success, 2 input error, 3 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import datasets
from .baselines import brute_force_optimum, hill_climb, rcm_order
from .bbo import BboConfig, SolveResult, resolve_threads, run_bbo, substream
from .errors import (ConfigError, DimensionError, FormatError, InputError, ParseError,
                     ScheduleError, SearchSpaceError)
from .evaluate import (Bicluster, GroundTruth, blocks_to_json, extract_blocks,
                       generate_synthetic, recovery_score)
from .io import ensure_parent, format_csv, load_matrix, save_matrix, save_trajectory
from .matrix import (Arrangement, apply_arrangement, bandwidth_cost, classic_bandwidth,
                     random_arrangement, scramble)
from .migration import LVParams, integrate_lv
from .plotting import render_dotplot, render_panels

EXIT_INPUT = 2
EXIT_CONFIG = 3

_BBO_FLAGS = {
    "pop_size": int, "generations": int, "mutation_prob": float, "swap_trial_rate": float,
    "elite_count": int,
    "stagnation_window": int, "seed": int,
}
_LV_FLAGS = {
    "alpha": float, "beta": float, "gamma": float, "delta": float, "x0": float, "y0": float,
    "t_end": float, "steps": int,
}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_INPUT) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}", EXIT_INPUT) from None


def _load(args):
    if getattr(args, "dataset", None):
        return datasets.BUNDLED[args.dataset]()
    if not args.input:
        raise CliError("an --input matrix (or --dataset) is required", EXIT_INPUT)
    try:
        return load_matrix(args.input, args.format)
    except OSError as exc:
        raise CliError(f"cannot read {args.input}: {exc.strerror}", EXIT_INPUT) from None


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _run_info(args, **extra):
    info = {"command": args.command}
    if getattr(args, "dataset", None):
        info["dataset"] = args.dataset
    elif getattr(args, "input", None):
        info["input"] = args.input
        info["format"] = args.format
    info.update(extra)
    return info


def _add_input(p, dataset=True):
    p.add_argument("--input", "-i", help="matrix file (CSV or Matrix Market)")
    p.add_argument("--format", choices=["csv", "matrix-market"], default=None,
                   help="input format (default: guessed from the file suffix)")
    if dataset:
        p.add_argument("--dataset", choices=sorted(datasets.BUNDLED), help="use a bundled dataset")


def _bbo_config(args) -> BboConfig:
    """Resolve defaults < JSON config file < explicit flags."""
    values = {}
    lv_values = {}
    if args.config:
        doc = _read_json(args.config)
        if not isinstance(doc, dict):
            raise CliError("config file must hold a JSON object", EXIT_CONFIG)
        for key, value in doc.items():
            if key in _BBO_FLAGS:
                values[key] = value
            elif key.startswith("lv_") and key[3:] in _LV_FLAGS:
                lv_values[key[3:]] = value
            elif key == "lv_conventional":
                lv_values["conventional"] = bool(value)
            elif key == "lv" and isinstance(value, dict):
                lv_values.update(value)
            else:
                raise CliError(f"unknown config key {key!r}", EXIT_CONFIG)
    for key in _BBO_FLAGS:
        if getattr(args, key) is not None:
            values[key] = getattr(args, key)
    for key in _LV_FLAGS:
        if getattr(args, f"lv_{key}") is not None:
            lv_values[key] = getattr(args, f"lv_{key}")
    if args.lv_conventional:
        lv_values["conventional"] = True
    try:
        return BboConfig(lv=LVParams(**lv_values), **values)
    except TypeError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from None


def _add_bbo_flags(p):
    p.add_argument("--config", help="JSON file with flat keys mirroring the flags")
    p.add_argument("--seed", type=int)
    p.add_argument("--pop-size", type=int)
    p.add_argument("--generations", type=int)
    p.add_argument("--mutation-prob", type=float)
    p.add_argument("--swap-trial-rate", type=float,
                   help="per-position rate of improve-or-revert swap trials")
    p.add_argument("--elite-count", type=int)
    p.add_argument("--stagnation-window", type=int)
    for key, kind in _LV_FLAGS.items():
        p.add_argument(f"--lv-{key.replace('_', '-')}", dest=f"lv_{key}", type=kind)
    p.add_argument("--lv-conventional", action="store_true",
                   help="use dy/dt = -gamma*y + delta*x*y for the predator equation")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $BANDCLUST_THREADS or all cores)")


def cmd_generate(args):
    matrix, truth = generate_synthetic(args.rows, args.cols, args.blocks, (args.lo, args.hi),
                                       args.noise, args.seed)
    if args.out in (None, "-"):
        sys.stdout.write(format_csv(matrix))
    else:
        ensure_parent(args.out)
        save_matrix(matrix, args.out, args.out_format)
    if args.truth:
        _write_text(args.truth, truth.to_json())


def cmd_scramble(args):
    A = _load(args)
    scrambled, arr = scramble(A, args.seed)
    ensure_parent(args.out)
    save_matrix(scrambled, args.out, args.out_format)
    if args.arrangement:
        _write_text(args.arrangement, _dump({"seed": args.seed, **arr.to_dict()}))


def cmd_solve(args):
    A = _load(args)
    config = _bbo_config(args)
    result = run_bbo(A, config, threads=resolve_threads(args.threads))
    doc = result.to_dict(include_timing=args.timing)
    doc["run"] = _run_info(args)
    doc["classic_bandwidth"] = classic_bandwidth(apply_arrangement(A, result.best))
    _write_text(args.out, _dump(doc))
    if args.reordered:
        ensure_parent(args.reordered)
        save_matrix(apply_arrangement(A, result.best), args.reordered)
    if args.trajectory:
        ensure_parent(args.trajectory)
        save_trajectory(integrate_lv(config.lv), args.trajectory)


def _baseline_doc(args, A, method, arr, config, seed=None, extra=None):
    cost = bandwidth_cost(A, arr)
    result = SolveResult(best=arr, best_cost=cost, cost_trace=[cost], generations_run=0,
                         wall_time=0.0, seed=seed, config=config,
                         initial_cost=bandwidth_cost(A), method=method)
    doc = result.to_dict()
    doc["run"] = _run_info(args)
    doc["classic_bandwidth"] = classic_bandwidth(apply_arrangement(A, arr))
    if extra:
        doc.update(extra)
    return doc


def cmd_oracle(args):
    A = _load(args)
    res = brute_force_optimum(A, args.limit)
    doc = _baseline_doc(args, A, "oracle", res.optimal_arrangement, {"limit": args.limit},
                        extra={"enumerated": res.enumerated})
    _write_text(args.out, _dump(doc))


def cmd_rcm(args):
    A = _load(args)
    arr = rcm_order(A, args.tau)
    _write_text(args.out, _dump(_baseline_doc(args, A, "rcm", arr, {"tau": args.tau})))


def cmd_hillclimb(args):
    A = _load(args)
    if args.start == "identity":
        start = Arrangement.identity(*A.shape)
    else:
        start = random_arrangement(A.rows, A.cols, substream(args.seed, "start"))
    arr = hill_climb(A, start, args.max_passes)
    config = {"start": args.start, "max_passes": args.max_passes}
    _write_text(args.out, _dump(_baseline_doc(args, A, "hillclimb", arr, config, seed=args.seed)))


def _load_arrangement(path) -> Arrangement:
    doc = _read_json(path)
    try:
        return Arrangement.from_dict(doc["best"] if "best" in doc else doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: not an arrangement or result document ({exc})", EXIT_INPUT) from None


def _truth_in_scrambled_frame(truth: GroundTruth, scramble_arr: Arrangement):
    row_pos = np.argsort(scramble_arr.row_perm)
    col_pos = np.argsort(scramble_arr.col_perm)
    return [Bicluster(row_pos[sorted(b.row_indices)], col_pos[sorted(b.col_indices)])
            for b in truth.blocks]


def cmd_eval(args):
    A = _load(args)
    arr = _load_arrangement(args.result) if args.result else Arrangement.identity(*A.shape)
    reordered = apply_arrangement(A, arr)
    found = extract_blocks(reordered, arr, args.tau)
    doc = {
        "cost": bandwidth_cost(A, arr),
        "classic_bandwidth": classic_bandwidth(reordered),
        "blocks_found": len(found),
        "blocks": json.loads(blocks_to_json(found)),
        "tau": args.tau,
    }
    if args.truth:
        try:
            with open(args.truth, encoding="utf-8") as fh:
                truth = GroundTruth.from_json(fh.read())
        except (OSError, ValueError, KeyError) as exc:
            raise CliError(f"cannot read ground truth {args.truth}: {exc}", EXIT_INPUT) from None
        blocks = truth.blocks
        if args.scramble:
            blocks = _truth_in_scrambled_frame(truth, _load_arrangement(args.scramble))
        doc["recovery_score"] = recovery_score(found, blocks)
    _write_text(args.out, _dump(doc))


def cmd_plot(args):
    A = _load(args)
    if args.result:
        A = apply_arrangement(A, _load_arrangement(args.result))
    ensure_parent(args.out)
    try:
        render_dotplot(A, args.out, args.title)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc.strerror}", EXIT_INPUT) from None


def bench_rows(seed: int, runs: int, config: BboConfig, threads: int, plots_dir=None,
               oracle_limit: int = 10**6):
    """Scramble, solve and score each benchmark dataset; one summary dict per run."""
    cases = [(name, loader(), None) for name, loader in sorted(datasets.BUNDLED.items())]
    rows = []
    for r in range(runs):
        run_seed = seed + r
        synth, truth = datasets.synthetic(seed=run_seed)
        for name, original, blocks in cases + [("synthetic-56x50", synth, truth.blocks)]:
            scrambled, sarr = scramble(original, substream(run_seed, "scramble").integers(2**32))
            start = time.perf_counter()
            result = run_bbo(scrambled, replace(config, seed=run_seed), threads=threads)
            wall = time.perf_counter() - start
            combined = sarr.then(result.best)
            final = apply_arrangement(scrambled, result.best)
            hc_start = random_arrangement(*scrambled.shape, substream(run_seed, "start"))
            row = {
                "dataset": name, "rows": original.rows, "cols": original.cols, "seed": run_seed,
                "original_cost": bandwidth_cost(original),
                "initial_cost": result.initial_cost,
                "final_cost": result.best_cost,
                "rcm_cost": bandwidth_cost(scrambled, rcm_order(scrambled)),
                "hillclimb_cost": bandwidth_cost(scrambled, hill_climb(scrambled, hc_start)),
                "oracle_cost": "",
                "recovery_score": "",
                "generations": result.generations_run,
                "wall_time": round(wall, 3),
            }
            try:
                row["oracle_cost"] = brute_force_optimum(scrambled, oracle_limit).optimal_cost
            except SearchSpaceError:
                pass
            if blocks is not None:
                found = extract_blocks(final, combined)
                row["recovery_score"] = round(recovery_score(found, blocks), 6)
            if plots_dir:
                os.makedirs(plots_dir, exist_ok=True)
                render_panels([original, scrambled, final],
                              os.path.join(plots_dir, f"{name}-seed{run_seed}.svg"),
                              ["original", "scrambled", "reordered"])
            rows.append(row)
    return rows


BENCH_COLUMNS = ["dataset", "rows", "cols", "seed", "original_cost", "initial_cost", "final_cost",
                 "rcm_cost", "hillclimb_cost", "oracle_cost", "recovery_score", "generations",
                 "wall_time"]


def cmd_bench(args):
    config = _bbo_config(args)
    rows = bench_rows(config.seed, args.runs, config, resolve_threads(args.threads), args.plots_dir)
    if args.out:
        ensure_parent(args.out)
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in BENCH_COLUMNS}
    print("  ".join(c.ljust(widths[c]) for c in BENCH_COLUMNS))
    for r in rows:
        print("  ".join(str(r[c]).ljust(widths[c]) for c in BENCH_COLUMNS))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bandclust", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="planted-block synthetic matrix")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--lo", type=int, default=1)
    p.add_argument("--hi", type=int, default=9)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o", help="matrix output path (default: stdout as CSV)")
    p.add_argument("--out-format", choices=["csv", "matrix-market"], default=None)
    p.add_argument("--truth", help="write the planted blocks as JSON here")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("scramble", help="randomly permute rows and columns")
    _add_input(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o", required=True)
    p.add_argument("--out-format", choices=["csv", "matrix-market"], default=None)
    p.add_argument("--arrangement", help="write the applied arrangement as JSON here")
    p.set_defaults(func=cmd_scramble)

    p = sub.add_parser("solve", help="reorder with the Lotka-Volterra BBO")
    _add_input(p)
    _add_bbo_flags(p)
    p.add_argument("--out", "-o", help="result JSON (default: stdout)")
    p.add_argument("--reordered", help="also write the reordered matrix here")
    p.add_argument("--trajectory", help="dump the LV trajectory as t,x,y CSV")
    p.add_argument("--timing", action="store_true", help="include wall_time in the result JSON")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive optimum for tiny matrices")
    _add_input(p)
    p.add_argument("--limit", type=int, default=10**6)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("rcm", help="Reverse Cuthill-McKee on the bipartite graph")
    _add_input(p)
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_rcm)

    p = sub.add_parser("hillclimb", help="pairwise-swap best-improvement descent")
    _add_input(p)
    p.add_argument("--start", choices=["identity", "random"], default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-passes", type=int, default=1000)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_hillclimb)

    p = sub.add_parser("eval", help="extract blocks and score them against ground truth")
    _add_input(p)
    p.add_argument("--result", help="result or arrangement JSON to apply first")
    p.add_argument("--truth", help="ground-truth JSON from `generate --truth`")
    p.add_argument("--scramble", help="arrangement JSON from `scramble`, when --input is scrambled")
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("plot", help="SVG dot plot of a matrix")
    _add_input(p)
    p.add_argument("--result", help="result or arrangement JSON to apply first")
    p.add_argument("--title")
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("bench", help="scramble/solve/eval over the three benchmark datasets")
    _add_bbo_flags(p)
    p.add_argument("--runs", type=int, default=1, help="seeds per dataset, starting at --seed")
    p.add_argument("--out", "-o", help="CSV summary path")
    p.add_argument("--plots-dir", help="write original/scrambled/reordered SVG panels here")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"bandclust: error: {exc}", file=sys.stderr)
        return exc.code
    except (ConfigError, ScheduleError, SearchSpaceError) as exc:
        print(f"bandclust: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, FormatError, DimensionError, InputError) as exc:
        print(f"bandclust: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"bandclust: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"bandclust: error: {exc.filename or ''}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
