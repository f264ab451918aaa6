"""Timing comparison between the kernel backends."""

import timeit
from dataclasses import dataclass

import numpy as np

from . import available_backends, get_backend

RULES = ("sgdm", "rmsprop", "adam", "amsgrad", "radam")


@dataclass
class BenchRow:
    rule: str
    masked: bool
    elements: int
    per_step: dict  # backend name -> seconds per step


def _run_rule(kern, rule, w, g, m, v, vmax, mask):
    if rule == "sgdm":
        kern.sgdm_step(w, g, m, mask, 1e-3, 0.9, 1.0, 0.0)
    elif rule == "rmsprop":
        kern.rmsprop_step(w, g, v, mask, 1e-3, 0.99, 1e-8, 0.0)
    elif rule == "adam":
        kern.adam_step(w, g, m, v, mask, 1e-3, 0.9, 0.999, 1e-8, 0.0, 0.1, 0.001)
    elif rule == "amsgrad":
        kern.amsgrad_step(w, g, m, v, vmax, mask, 1e-3, 0.9, 0.999, 1e-8, 0.0,
                          0.1, 0.001)
    else:
        kern.radam_step(w, g, m, v, mask, 1e-3, 0.9, 0.999, 1e-8, 0.0,
                        0.1, 0.001, 0.5)


def run_benchmark(elements=1_000_000, steps=20, rules=RULES, seed=0):
    gen = np.random.Generator(np.random.Philox(seed))
    rows = []
    backends = available_backends()
    for rule in rules:
        for masked in (False, True):
            per_step = {}
            for name in backends:
                kern = get_backend(name)
                w = gen.standard_normal(elements)
                g = gen.standard_normal(elements)
                m = np.zeros(elements)
                v = np.zeros(elements)
                vmax = np.zeros(elements)
                mask = (gen.random(elements) < 0.5).astype(np.float64) if masked else None
                elapsed = timeit.timeit(
                    lambda: _run_rule(kern, rule, w, g, m, v, vmax, mask),
                    number=steps,
                )
                per_step[name] = elapsed / steps
            rows.append(BenchRow(rule, masked, elements, per_step))
    return rows


def format_rows(rows):
    backends = sorted({name for row in rows for name in row.per_step})
    head = f"{'rule':<10} {'masked':<7}" + "".join(f" {b:>12}" for b in backends)
    if len(backends) == 2:
        head += f" {'speedup':>9}"
    lines = [head]
    for row in rows:
        cells = "".join(f" {row.per_step[b] * 1e3:>10.3f}ms" for b in backends)
        line = f"{row.rule:<10} {str(row.masked):<7}{cells}"
        if len(backends) == 2:
            a, b = (row.per_step[name] for name in backends)
            slow, fast = max(a, b), min(a, b)
            line += f" {slow / fast:>8.2f}x"
        lines.append(line)
    if len(backends) < 2:
        lines.append("(compiled backend unavailable; showing pure backend only)")
    return "\n".join(lines)
