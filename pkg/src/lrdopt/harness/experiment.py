"""Declarative experiment descriptions and named presets.

A spec is a versioned JSON document; two runs of the same spec produce
byte-identical result files. Arms are the cross-product of the requested
optimizer variants (none / lrd / dg) and regularizers (none / sd / nl /
ng); the unmodified combination is labeled ``baseline``.
"""

import json
from dataclasses import dataclass, field, replace

from ..errors import SpecError
from ..optim import (
    DEFAULT_KEEP_PROB,
    DEFAULT_LEARNING_RATES,
    RULE_KINDS,
    VARIANTS,
    OptimizerRule,
)

SPEC_VERSION = 1

PROBLEMS = ("toy", "synth", "mnist")
REGULARIZERS = ("none", "sd", "nl", "ng")

DATA_DIR_ENV = "LRDOPT_DATA_DIR"


@dataclass(frozen=True)
class Arm:
    variant: str
    regularizer: str

    @property
    def label(self):
        parts = [p for p in (self.variant, self.regularizer) if p != "none"]
        return "_".join(parts) if parts else "baseline"


def _expect(condition, fieldname, message):
    if not condition:
        raise SpecError(fieldname, message)


@dataclass
class ExperimentSpec:
    name: str
    problem: str
    seeds: tuple = (0,)
    output_dir: str = "runs/out"

    # optimizer
    rule_kind: str = "adam"
    learning_rate: float | None = None  # None -> rule default
    rule_options: dict = field(default_factory=dict)  # beta1/beta2/eps/momentum
    weight_decay: float = 0.0
    lr_milestones: tuple = ()
    lr_factor: float = 0.1

    # arm axes
    variants: tuple = ("none", "lrd")
    regularizers: tuple = ("none",)
    keep_prob: float = DEFAULT_KEEP_PROB
    sd_keep_prob: float = 0.9
    label_noise_prob: float = 0.05
    noise_base_variance: float = 0.1
    noise_decay_power: float = 0.55

    # classification schedule
    epochs: int = 10
    batch_size: int = 128
    hidden_sizes: tuple = (256, 256)
    train_subset: int | None = None
    data_dir: str | None = None
    synth: dict = field(default_factory=lambda: {
        "classes": 10, "per_class": 300, "dims": 16, "spread": 0.25, "seed": 7,
    })

    # toy schedule
    toy_steps: int = 3000
    toy_lr: float = 0.01
    toy_grid: dict = field(default_factory=lambda: {
        "x": (-3.5, -0.5, 4), "y": (-1.5, 2.5, 4),
    })
    toy_record_every: int = 1
    toy_success_radius: float = 0.05

    def __post_init__(self):
        self.validate()

    def validate(self):
        _expect(bool(self.name), "name", "must be a non-empty string")
        _expect(self.problem in PROBLEMS, "problem", f"must be one of {PROBLEMS}")
        self.seeds = tuple(int(s) for s in self.seeds)
        _expect(len(self.seeds) >= 1, "seeds", "must list at least one seed")
        _expect(all(s >= 0 for s in self.seeds), "seeds", "must be non-negative")
        _expect(self.rule_kind in RULE_KINDS, "rule_kind", f"must be one of {RULE_KINDS}")
        if self.learning_rate is not None:
            _expect(self.learning_rate > 0, "learning_rate", "must be positive")
        self.variants = tuple(self.variants)
        _expect(len(self.variants) >= 1, "variants", "must list at least one variant")
        for v in self.variants:
            _expect(v in VARIANTS, "variants", f"unknown variant {v!r}")
        self.regularizers = tuple(self.regularizers)
        _expect(len(self.regularizers) >= 1, "regularizers",
                "must list at least one regularizer (use 'none')")
        for r in self.regularizers:
            _expect(r in REGULARIZERS, "regularizers", f"unknown regularizer {r!r}")
        _expect(0.0 <= self.keep_prob <= 1.0, "keep_prob", "must lie in [0, 1]")
        _expect(0.0 < self.sd_keep_prob <= 1.0, "sd_keep_prob", "must lie in (0, 1]")
        _expect(0.0 <= self.label_noise_prob < 1.0, "label_noise_prob",
                "must lie in [0, 1)")
        _expect(self.noise_base_variance >= 0.0, "noise_base_variance", "must be >= 0")
        _expect(self.weight_decay >= 0.0, "weight_decay", "must be >= 0")
        _expect(self.epochs >= 0, "epochs", "must be >= 0")
        _expect(self.batch_size >= 1, "batch_size", "must be >= 1")
        self.hidden_sizes = tuple(int(h) for h in self.hidden_sizes)
        _expect(all(h >= 1 for h in self.hidden_sizes), "hidden_sizes",
                "must be positive")
        if self.train_subset is not None:
            _expect(self.train_subset >= 1, "train_subset", "must be >= 1")
        self.lr_milestones = tuple(int(m) for m in self.lr_milestones)
        _expect(self.toy_steps >= 0, "toy_steps", "must be >= 0")
        _expect(self.toy_lr > 0, "toy_lr", "must be positive")
        _expect(self.toy_record_every >= 1, "toy_record_every", "must be >= 1")
        _expect(self.toy_success_radius > 0, "toy_success_radius", "must be positive")
        for axis in ("x", "y"):
            _expect(axis in self.toy_grid, "toy_grid", f"missing axis {axis!r}")
            spec = tuple(self.toy_grid[axis])
            _expect(len(spec) == 3 and int(spec[2]) >= 1, "toy_grid",
                    f"axis {axis!r} must be (low, high, count)")
        if self.problem == "toy":
            _expect(set(self.regularizers) <= {"none", "ng"}, "regularizers",
                    "toy runs support only 'none' and 'ng'")
        return self

    # -- arms ------------------------------------------------------------
    def arms(self):
        return [Arm(v, r) for v in self.variants for r in self.regularizers]

    def rule(self):
        return OptimizerRule.by_kind(self.rule_kind, **self.rule_options)

    def base_lr(self):
        if self.learning_rate is not None:
            return self.learning_rate
        return DEFAULT_LEARNING_RATES[self.rule_kind]

    def toy_init_points(self):
        import numpy as np

        x_lo, x_hi, x_n = self.toy_grid["x"]
        y_lo, y_hi, y_n = self.toy_grid["y"]
        xs = np.linspace(float(x_lo), float(x_hi), int(x_n))
        ys = np.linspace(float(y_lo), float(y_hi), int(y_n))
        return [(float(x), float(y)) for x in xs for y in ys]

    # -- serialization ---------------------------------------------------
    def to_dict(self):
        return {
            "version": SPEC_VERSION,
            "name": self.name,
            "problem": self.problem,
            "seeds": list(self.seeds),
            "output_dir": self.output_dir,
            "optimizer": {
                "kind": self.rule_kind,
                "learning_rate": self.learning_rate,
                "options": dict(self.rule_options),
                "weight_decay": self.weight_decay,
                "lr_milestones": list(self.lr_milestones),
                "lr_factor": self.lr_factor,
            },
            "arms": {
                "variants": list(self.variants),
                "regularizers": list(self.regularizers),
                "keep_prob": self.keep_prob,
                "sd_keep_prob": self.sd_keep_prob,
                "label_noise_prob": self.label_noise_prob,
                "noise_base_variance": self.noise_base_variance,
                "noise_decay_power": self.noise_decay_power,
            },
            "classification": {
                "epochs": self.epochs,
                "batch_size": self.batch_size,
                "hidden_sizes": list(self.hidden_sizes),
                "train_subset": self.train_subset,
                "data_dir": self.data_dir,
                "synth": dict(self.synth),
            },
            "toy": {
                "steps": self.toy_steps,
                "learning_rate": self.toy_lr,
                "grid": {axis: list(self.toy_grid[axis]) for axis in ("x", "y")},
                "record_every": self.toy_record_every,
                "success_radius": self.toy_success_radius,
            },
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise SpecError("<root>", "spec document must be a JSON object")
        version = doc.get("version")
        if version != SPEC_VERSION:
            raise SpecError("version", f"expected {SPEC_VERSION}, got {version!r}")
        known = {"version", "name", "problem", "seeds", "output_dir",
                 "optimizer", "arms", "classification", "toy"}
        for key in doc:
            if key not in known:
                raise SpecError(key, "unknown top-level field")
        opt = doc.get("optimizer", {})
        arms = doc.get("arms", {})
        cls_ = doc.get("classification", {})
        toy = doc.get("toy", {})
        try:
            kwargs = dict(
                name=doc.get("name", ""),
                problem=doc.get("problem", ""),
                seeds=doc.get("seeds", (0,)),
                output_dir=doc.get("output_dir", "runs/out"),
                rule_kind=opt.get("kind", "adam"),
                learning_rate=opt.get("learning_rate"),
                rule_options=opt.get("options", {}),
                weight_decay=opt.get("weight_decay", 0.0),
                lr_milestones=opt.get("lr_milestones", ()),
                lr_factor=opt.get("lr_factor", 0.1),
                variants=arms.get("variants", ("none", "lrd")),
                regularizers=arms.get("regularizers", ("none",)),
                keep_prob=arms.get("keep_prob", DEFAULT_KEEP_PROB),
                sd_keep_prob=arms.get("sd_keep_prob", 0.9),
                label_noise_prob=arms.get("label_noise_prob", 0.05),
                noise_base_variance=arms.get("noise_base_variance", 0.1),
                noise_decay_power=arms.get("noise_decay_power", 0.55),
                epochs=cls_.get("epochs", 10),
                batch_size=cls_.get("batch_size", 128),
                hidden_sizes=cls_.get("hidden_sizes", (256, 256)),
                train_subset=cls_.get("train_subset"),
                data_dir=cls_.get("data_dir"),
                synth=cls_.get("synth", {"classes": 10, "per_class": 300,
                                         "dims": 16, "spread": 0.25, "seed": 7}),
                toy_steps=toy.get("steps", 3000),
                toy_lr=toy.get("learning_rate", 0.01),
                toy_grid=toy.get("grid", {"x": (-3.5, -0.5, 4), "y": (-1.5, 2.5, 4)}),
                toy_record_every=toy.get("record_every", 1),
                toy_success_radius=toy.get("success_radius", 0.05),
            )
        except (TypeError, AttributeError) as exc:
            raise SpecError("<root>", f"malformed spec: {exc}") from exc
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError("<root>", f"invalid JSON: {exc}") from exc
        return cls.from_dict(doc)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)


def _preset_toy():
    # Learning rate, step count and keep probability here are artifact
    # defaults; the original trajectory study did not publish its settings.
    return ExperimentSpec(
        name="toy-default",
        problem="toy",
        seeds=tuple(range(10)),
        output_dir="runs/toy",
        rule_kind="adam",
        variants=("none", "lrd"),
    )


def _preset_synth():
    return ExperimentSpec(
        name="synth-arms",
        problem="synth",
        seeds=(0, 1, 2),
        output_dir="runs/synth",
        rule_kind="adam",
        learning_rate=0.005,
        epochs=12,
        batch_size=64,
        hidden_sizes=(32, 32),
        variants=("none", "lrd"),
        regularizers=("none", "sd", "nl", "ng"),
        synth={"classes": 4, "per_class": 200, "dims": 8, "spread": 0.3, "seed": 7},
    )


def _preset_mnist_reduced():
    return ExperimentSpec(
        name="mnist-reduced",
        problem="mnist",
        seeds=(0, 1, 2, 3, 4),
        output_dir="runs/mnist-reduced",
        rule_kind="adam",
        epochs=10,
        batch_size=128,
        hidden_sizes=(256, 256),
        train_subset=10000,
        variants=("none", "lrd"),
    )


def _preset_mnist_full():
    # Full-scale benchmark setting: two 1000-unit hidden layers, 100 epochs
    # over the complete training set, no learning-rate decay.
    return ExperimentSpec(
        name="mnist-full",
        problem="mnist",
        seeds=(0,),
        output_dir="runs/mnist-full",
        rule_kind="adam",
        epochs=100,
        batch_size=128,
        hidden_sizes=(1000, 1000),
        train_subset=None,
        variants=("none", "lrd"),
    )


PRESETS = {
    "toy-default": _preset_toy,
    "synth-arms": _preset_synth,
    "mnist-reduced": _preset_mnist_reduced,
    "mnist-full": _preset_mnist_full,
}


def preset(name, **overrides):
    if name not in PRESETS:
        raise SpecError("preset", f"unknown preset {name!r}; have {sorted(PRESETS)}")
    spec = PRESETS[name]()
    return spec.with_overrides(**overrides) if overrides else spec
