#!/usr/bin/env python3
"""Recompute summary.csv and sweep.csv from trace.csv and compare.

Usage: check_summary.py OUTPUT_DIR [--tol 1e-12]
Exit status 0 when every statistic matches within the tolerance.
"""
import argparse
import csv
import math
import statistics
import sys
from collections import defaultdict
from pathlib import Path


def read(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def recompute(trace_rows):
    best = {}
    order = []
    failures = defaultdict(int)
    for row in trace_rows:
        key = (row["method"], float(row["eta"]))
        if key not in failures:
            order.append(key)
            failures[key] = 0
        run = key + (row["instance_seed"], row["run_seed"])
        if row["status"] != "ok":
            failures[key] += 1
            best[run] = None
            continue
        value = float(row["normalized_objective"])
        if run not in best or (best[run] is not None and value < best[run]):
            best[run] = value
    per_key = defaultdict(list)
    for run, value in best.items():
        if value is not None:
            per_key[run[:2]].append(value)
    sweep = {}
    for key in order:
        values = per_key.get(key, [])
        n = len(values)
        mean = math.fsum(values) / n if n else math.nan
        se = statistics.stdev(values) / math.sqrt(n) if n > 1 else 0.0
        median = statistics.median(values) if n else math.nan
        sweep[key] = (n, failures[key], mean, se, median)
    return sweep


def close(a, b, tol):
    if math.isnan(a) or math.isnan(b):
        return math.isnan(a) and math.isnan(b)
    return abs(a - b) <= tol * max(1.0, abs(b))


def check(out_dir, tol):
    out_dir = Path(out_dir)
    sweep = recompute(read(out_dir / "trace.csv"))
    problems = []
    for row in read(out_dir / "sweep.csv"):
        key = (row["method"], float(row["eta"]))
        if key not in sweep:
            problems.append(f"sweep row {key} missing from trace")
            continue
        n, fails, mean, se, median = sweep[key]
        if int(row["runs"]) != n or int(row["failures"]) != fails:
            problems.append(f"sweep counts differ for {key}")
        for name, ours in (("mean", mean), ("se", se), ("median", median)):
            if not close(float(row[f"{name}_best_normalized"]), ours, tol):
                problems.append(f"sweep {name} differs for {key}: {row[f'{name}_best_normalized']} vs {ours!r}")
    for row in read(out_dir / "summary.csv"):
        method = row["method"]
        candidates = [(v[2], k[1]) for k, v in sweep.items() if k[0] == method and v[0] > 0]
        if not candidates:
            continue
        best_mean, best_eta = min(candidates, key=lambda c: c[0])
        if not close(float(row["mean_best_normalized"]), best_mean, tol):
            problems.append(f"summary mean differs for {method}")
        if not close(float(row["best_eta"]), best_eta, tol) and not close(
            sweep[(method, float(row["best_eta"]))][2], best_mean, tol
        ):
            problems.append(f"summary eta differs for {method}")
    return problems


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("output_dir")
    parser.add_argument("--tol", type=float, default=1e-12)
    args = parser.parse_args()
    problems = check(args.output_dir, args.tol)
    for p in problems:
        print(p, file=sys.stderr)
    print("summary consistent" if not problems else f"{len(problems)} mismatches")
    return 0 if not problems else 1


if __name__ == "__main__":
    sys.exit(main())
