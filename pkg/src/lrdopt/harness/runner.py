"""Executes experiment specs and writes deterministic result files.

Per-run randomness is organized so that arms never interact: every stream
is derived from the run seed under a fixed name ("model-init",
"hidden-dropout", "optimizer", ...), so adding or removing an arm leaves
the other arms' draws untouched, and arms that differ only in masking
share identical initialization and data order.

Output layout (all CSVs atomic, floats formatted as shortest round-trip):

    <out>/spec.json                     resolved spec as run
    <out>/<arm>/seed<k>.csv             classification learning curve
    <out>/<arm>/seed<k>_init<i>.csv     toy trajectory per start point
    <out>/toy_summary.csv               one row per (arm, seed, init)
    <out>/summary.csv                   sweep: per-seed final accuracies
    <out>/summary_stats.csv             sweep: mean/std per value
    <out>/timing.json                   wall-clock diagnostics (not part of
                                        the deterministic contract)
"""

import json
import os
import time

import numpy as np

from .. import network
from ..data import corrupt_labels, batches, load_mnist, synth_blobs
from ..errors import SpecError
from ..ioutil import atomic_write_text, write_csv
from ..optim import GradientNoise, LrdConfig, Optimizer, lr_schedule
from ..rng import Rng
from ..tensor import mean_std
from ..toyfn import Trajectory, distance_to_reference, toy_gradient, toy_value
from .experiment import DATA_DIR_ENV

CLASSIFICATION_HEADER = ["epoch", "train_loss", "train_acc", "test_acc"]
TOY_SUMMARY_HEADER = ["arm", "seed", "init_index", "init_x", "init_y",
                      "final_x", "final_y", "final_f", "reached"]
SWEEP_HEADER = ["arm", "param_value", "seed", "final_test_acc"]
SWEEP_STATS_HEADER = ["arm", "param_value", "mean_final_test_acc",
                      "std_final_test_acc", "n_seeds"]


def _write_spec(spec, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    atomic_write_text(os.path.join(out_dir, "spec.json"), spec.to_json())


def _write_timing(out_dir, seconds, detail=None):
    doc = {"wall_clock_sec": seconds}
    if detail:
        doc["detail"] = detail
    atomic_write_text(os.path.join(out_dir, "timing.json"),
                      json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _arm_config(spec, arm, keep_prob=None):
    noise = None
    if arm.regularizer == "ng":
        noise = GradientNoise(spec.noise_base_variance, spec.noise_decay_power)
    return LrdConfig(
        base_lr=spec.base_lr() if spec.problem != "toy" else spec.toy_lr,
        keep_prob=spec.keep_prob if keep_prob is None else keep_prob,
        variant=arm.variant,
        grad_noise=noise,
        weight_decay=spec.weight_decay,
    )


# -- toy problem ---------------------------------------------------------

def run_toy(spec, out_dir=None):
    """Trajectory CSVs plus a reach summary for every (arm, seed, init)."""
    if spec.problem != "toy":
        raise SpecError("problem", f"run_toy needs problem='toy', got {spec.problem!r}")
    out_dir = out_dir or spec.output_dir
    started = time.perf_counter()
    _write_spec(spec, out_dir)
    inits = spec.toy_init_points()
    summary_rows = []
    for arm in spec.arms():
        arm_dir = os.path.join(out_dir, arm.label)
        for seed in spec.seeds:
            for k, (x0, y0) in enumerate(inits):
                traj = _run_toy_single(spec, arm, seed, k, x0, y0)
                traj.to_csv(os.path.join(arm_dir, f"seed{seed}_init{k}.csv"))
                fx, fy = traj.final_point
                reached = int(
                    distance_to_reference((fx, fy)) <= spec.toy_success_radius
                )
                summary_rows.append(
                    (arm.label, seed, k, x0, y0, fx, fy, traj.final_value, reached)
                )
    write_csv(os.path.join(out_dir, "toy_summary.csv"),
              TOY_SUMMARY_HEADER, summary_rows)
    _write_timing(out_dir, time.perf_counter() - started)
    return summary_rows


def _run_toy_single(spec, arm, seed, init_index, x0, y0):
    opt_rng = Rng(seed).child_named("optimizer").child(init_index)
    params = [np.array([x0, y0], dtype=np.float64)]
    opt = Optimizer([params[0]], spec.rule(), _arm_config(spec, arm), opt_rng)
    w = opt.params[0]
    traj = Trajectory()
    traj.append(0, w[0], w[1], toy_value(w[0], w[1]))
    for t in range(1, spec.toy_steps + 1):
        gx, gy = toy_gradient(w[0], w[1])
        opt.step([np.array([gx, gy], dtype=np.float64)])
        if t % spec.toy_record_every == 0 or t == spec.toy_steps:
            traj.append(t, w[0], w[1], toy_value(w[0], w[1]))
    return traj


def toy_reach_fractions(summary_rows):
    """arm label -> fraction of (seed, init) runs that reached the optimum."""
    per_arm = {}
    for row in summary_rows:
        per_arm.setdefault(row[0], []).append(row[8])
    return {arm: float(np.mean(flags)) for arm, flags in per_arm.items()}


# -- classification ------------------------------------------------------

def _split_synth(spec):
    """Deterministic stratified split: last quarter of each class is test."""
    cfg = spec.synth
    classes = int(cfg["classes"])
    per_class = int(cfg["per_class"])
    full = synth_blobs(classes, per_class, int(cfg["dims"]),
                       float(cfg["spread"]), int(cfg["seed"]))
    test_per_class = max(1, per_class // 4)
    train_idx, test_idx = [], []
    for c in range(classes):
        block = np.arange(c * per_class, (c + 1) * per_class)
        train_idx.extend(block[:-test_per_class])
        test_idx.extend(block[-test_per_class:])
    from ..data import Dataset

    train = Dataset(full.inputs[train_idx], full.labels[train_idx], classes)
    test = Dataset(full.inputs[test_idx], full.labels[test_idx], classes)
    return train, test


def load_spec_datasets(spec):
    """(train, test) datasets for a classification spec."""
    if spec.problem == "synth":
        return _split_synth(spec)
    if spec.problem == "mnist":
        root = spec.data_dir or os.environ.get(DATA_DIR_ENV) or "data/mnist"
        train, test = load_mnist(root)
        if spec.train_subset:
            train = train.subset(spec.train_subset)
        return train, test
    raise SpecError("problem", f"no dataset for problem {spec.problem!r}")


def train_classifier(spec, arm, seed, train, test, keep_prob=None,
                     sd_keep_prob=None):
    """One (arm, seed) training run; returns the learning-curve rows.

    Row 0 is the untrained evaluation; row e reports the mean minibatch
    training loss seen during epoch e and accuracies measured after it.
    """
    root = Rng(seed)
    init_rng = root.child_named("model-init")
    sd_rng = root.child_named("hidden-dropout")
    opt_rng = root.child_named("optimizer")

    sd_keep = sd_keep_prob if sd_keep_prob is not None else spec.sd_keep_prob
    dropout_keep = sd_keep if arm.regularizer == "sd" else 1.0
    layer_sizes = (train.dim, *spec.hidden_sizes, train.num_classes)
    model = network.Mlp.init(layer_sizes, init_rng, dropout_keep=dropout_keep)

    # noisy-label arms train AND report train metrics on the observed
    # (corrupted) labels; the test set stays clean
    view = corrupt_labels(train, spec.label_noise_prob, seed) \
        if arm.regularizer == "nl" else train
    config = _arm_config(spec, arm, keep_prob=keep_prob)
    opt = Optimizer(model.params(), spec.rule(), config, opt_rng)

    rows = [(0,
             network.mean_loss(model, view.inputs, view.labels),
             network.accuracy(model, view.inputs, view.labels),
             network.accuracy(model, test.inputs, test.labels))]
    for epoch in range(1, spec.epochs + 1):
        lr = lr_schedule(config.base_lr, epoch, spec.lr_milestones, spec.lr_factor)
        epoch_losses = []
        for bx, by in batches(view, spec.batch_size, seed, epoch):
            loss, grads = network.loss_and_grad(model, bx, by, train=True, rng=sd_rng)
            opt.step(grads, lr=lr)
            epoch_losses.append(loss)
        rows.append((epoch,
                     float(np.mean(epoch_losses)),
                     network.accuracy(model, view.inputs, view.labels),
                     network.accuracy(model, test.inputs, test.labels)))
    return rows


def run_classification(spec, out_dir=None):
    """Learning-curve CSV per (arm, seed); returns {arm: {seed: rows}}."""
    if spec.problem not in ("synth", "mnist"):
        raise SpecError("problem",
                        f"run_classification needs synth or mnist, got {spec.problem!r}")
    out_dir = out_dir or spec.output_dir
    started = time.perf_counter()
    _write_spec(spec, out_dir)
    train, test = load_spec_datasets(spec)
    results = {}
    for arm in spec.arms():
        arm_dir = os.path.join(out_dir, arm.label)
        results[arm.label] = {}
        for seed in spec.seeds:
            rows = train_classifier(spec, arm, seed, train, test)
            write_csv(os.path.join(arm_dir, f"seed{seed}.csv"),
                      CLASSIFICATION_HEADER, rows)
            results[arm.label][seed] = rows
    _write_timing(out_dir, time.perf_counter() - started)
    return results


# -- sweeps ---------------------------------------------------------------

def run_sweep(spec, param, values, out_dir=None):
    """Re-run the spec at each parameter value; emit per-seed and stats CSVs.

    ``param`` is "p" (learning-rate keep probability; arms forced to lrd)
    or "p_sd" (hidden-unit retention; arms forced to sd).
    """
    if param not in ("p", "p_sd"):
        raise SpecError("param", f"sweep parameter must be 'p' or 'p_sd', got {param!r}")
    values = tuple(float(v) for v in values)
    if not values:
        raise SpecError("values", "sweep needs at least one value")
    for v in values:
        if not 0.0 < v <= 1.0:
            raise SpecError("values", f"sweep values must lie in (0, 1], got {v}")
    if spec.problem not in ("synth", "mnist"):
        raise SpecError("problem", f"sweeps need synth or mnist, got {spec.problem!r}")

    out_dir = out_dir or spec.output_dir
    started = time.perf_counter()
    if param == "p":
        sub_axes = {"variants": ("lrd",), "regularizers": ("none",)}
    else:
        sub_axes = {"variants": ("none",), "regularizers": ("sd",)}

    per_seed_rows = []
    stats_rows = []
    for value in values:
        overrides = dict(sub_axes)
        if param == "p":
            overrides["keep_prob"] = value
        else:
            overrides["sd_keep_prob"] = value
        sub = spec.with_overrides(
            output_dir=os.path.join(out_dir, f"{param}={value:g}"), **overrides
        )
        results = run_classification(sub)
        for arm_label, by_seed in sorted(results.items()):
            finals = []
            for seed in sub.seeds:
                final_acc = by_seed[seed][-1][3]
                finals.append(final_acc)
                per_seed_rows.append((arm_label, float(value), seed, float(final_acc)))
            mean, std = mean_std(finals)
            stats_rows.append((arm_label, float(value), mean, std, len(finals)))

    _write_spec(spec, out_dir)
    write_csv(os.path.join(out_dir, "summary.csv"), SWEEP_HEADER, per_seed_rows)
    write_csv(os.path.join(out_dir, "summary_stats.csv"), SWEEP_STATS_HEADER,
              stats_rows)
    _write_timing(out_dir, time.perf_counter() - started)
    return per_seed_rows, stats_rows


def run_spec(spec, out_dir=None):
    """Dispatch a spec to its problem-appropriate runner."""
    if spec.problem == "toy":
        return run_toy(spec, out_dir)
    return run_classification(spec, out_dir)
