"""Aggregates finished run directories into summary tables."""

import os

from ..errors import DomainError
from ..ioutil import read_csv, write_csv
from ..tensor import mean_std

REPORT_HEADER = ["arm", "n_seeds", "mean_final_test_acc", "std_final_test_acc"]


def collect_final_accuracies(run_dir):
    """arm label -> list of final test accuracies, scanning seed*.csv files.

    The arm label is the directory path relative to ``run_dir``, so sweep
    subdirectories like ``p=0.5/lrd`` stay distinguishable.
    """
    results = {}
    for dirpath, _dirnames, filenames in os.walk(run_dir):
        curve_files = sorted(
            f for f in filenames
            if f.startswith("seed") and f.endswith(".csv") and "_init" not in f
        )
        for fname in curve_files:
            header, rows = read_csv(os.path.join(dirpath, fname))
            if header[:1] != ["epoch"] or not rows:
                continue
            arm = os.path.relpath(dirpath, run_dir)
            results.setdefault(arm, []).append(float(rows[-1][3]))
    return results


def aggregate(run_dir, out_path=None):
    """Summary rows (arm, n, mean, std); optionally written as CSV."""
    finals = collect_final_accuracies(run_dir)
    if not finals:
        raise DomainError(f"no learning-curve CSVs found under {run_dir}")
    rows = []
    for arm in sorted(finals):
        accs = finals[arm]
        mean, std = mean_std(accs)
        rows.append((arm, len(accs), mean, std))
    if out_path:
        write_csv(out_path, REPORT_HEADER, rows)
    return rows


def format_table(rows):
    lines = ["arm                          n   mean_acc   std_acc"]
    for arm, n, mean, std in rows:
        lines.append(f"{arm:<28} {n:>2}   {mean:8.4f}   {std:7.4f}")
    return "\n".join(lines)
