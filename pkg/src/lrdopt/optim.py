"""Gradient-descent optimizers with per-parameter learning-rate dropout.

One framework drives five update rules (SGD-momentum, RMSprop, Adam,
AMSGrad, RAdam). Each step proceeds per parameter tensor in a fixed order:

  1. coupled weight decay folds ``decay * w`` into the gradient;
  2. optional Gaussian gradient noise with decaying variance is added;
  3. the ``dg`` variant masks the gradient itself (comparison baseline);
  4. the rule's accumulators advance from the (possibly modified) full
     gradient -- the learning-rate mask never touches them;
  5. the rule forms its update direction (bias-corrected where the rule
     prescribes it);
  6. the ``lrd`` variant samples a fresh {0,1} mask and scales it by the
     learning rate, so masked coordinates simply skip this update;
  7. parameters move by the masked, scaled direction.

Masked coordinates are bit-unchanged, and with keep probability 1 every
variant is bit-identical to the unmasked optimizer.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, NonFiniteGradientError, ShapeMismatchError

RULE_KINDS = ("sgdm", "rmsprop", "adam", "amsgrad", "radam")
VARIANTS = ("none", "lrd", "dg")

# Initial learning rates used throughout the benchmark runs.
DEFAULT_LEARNING_RATES = {
    "sgdm": 0.1,
    "rmsprop": 0.001,
    "adam": 0.001,
    "amsgrad": 0.001,
    "radam": 0.03,
}

DEFAULT_KEEP_PROB = 0.5


@dataclass(frozen=True)
class GradientNoise:
    """Additive N(0, sigma_t^2) gradient noise, sigma_t^2 = v0 / (1+t)^power.

    ``t`` counts completed steps, so the first step uses variance ``v0``.
    """

    base_variance: float = 0.1
    decay_power: float = 0.55

    def __post_init__(self):
        if self.base_variance < 0.0:
            raise DomainError("noise base_variance must be >= 0")
        if self.decay_power < 0.0:
            raise DomainError("noise decay_power must be >= 0")

    def std_at(self, completed_steps):
        return math.sqrt(self.base_variance / (1.0 + completed_steps) ** self.decay_power)


@dataclass(frozen=True)
class LrdConfig:
    """Masking and regularization settings layered on a base rule."""

    base_lr: float
    keep_prob: float = DEFAULT_KEEP_PROB
    variant: str = "none"
    grad_noise: GradientNoise | None = None
    weight_decay: float = 0.0

    def __post_init__(self):
        if self.base_lr <= 0.0:
            raise DomainError(f"base_lr must be positive, got {self.base_lr}")
        if not 0.0 <= self.keep_prob <= 1.0:
            raise DomainError(f"keep_prob must lie in [0, 1], got {self.keep_prob}")
        if self.variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.weight_decay < 0.0:
            raise DomainError(f"weight_decay must be >= 0, got {self.weight_decay}")


@dataclass(frozen=True)
class OptimizerRule:
    """One of the five update rules plus its hyperparameters.

    ``grad_weight`` is the weight on the incoming gradient in the momentum
    recurrence; it only applies to sgdm (the adaptive rules use their
    published ``1 - beta1`` convention).
    """

    kind: str
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    grad_weight: float = 1.0

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise DomainError(f"rule kind must be one of {RULE_KINDS}, got {self.kind!r}")
        if not 0.0 <= self.beta1 < 1.0:
            raise DomainError(f"beta1 must lie in [0, 1), got {self.beta1}")
        if not 0.0 <= self.beta2 < 1.0:
            raise DomainError(f"beta2 must lie in [0, 1), got {self.beta2}")
        if self.eps <= 0.0:
            raise DomainError(f"eps must be positive, got {self.eps}")

    @property
    def adaptive(self):
        return self.kind != "sgdm"

    @classmethod
    def sgdm(cls, momentum=0.9, grad_weight=1.0):
        return cls(kind="sgdm", beta1=momentum, beta2=0.0, grad_weight=grad_weight)

    @classmethod
    def rmsprop(cls, beta2=0.99, eps=1e-8):
        return cls(kind="rmsprop", beta1=0.0, beta2=beta2, eps=eps)

    @classmethod
    def adam(cls, beta1=0.9, beta2=0.999, eps=1e-8):
        return cls(kind="adam", beta1=beta1, beta2=beta2, eps=eps)

    @classmethod
    def amsgrad(cls, beta1=0.9, beta2=0.999, eps=1e-8):
        return cls(kind="amsgrad", beta1=beta1, beta2=beta2, eps=eps)

    @classmethod
    def radam(cls, beta1=0.9, beta2=0.999, eps=1e-8):
        return cls(kind="radam", beta1=beta1, beta2=beta2, eps=eps)

    @classmethod
    def by_kind(cls, kind, **overrides):
        factory = {
            "sgdm": cls.sgdm,
            "rmsprop": cls.rmsprop,
            "adam": cls.adam,
            "amsgrad": cls.amsgrad,
            "radam": cls.radam,
        }
        if kind not in factory:
            raise DomainError(f"rule kind must be one of {RULE_KINDS}, got {kind!r}")
        return factory[kind](**overrides)


def radam_rectification(step, beta2, beta2_pow, bias_correction2):
    """Variance-rectification factor, or None during the warmup regime.

    The adaptive branch only has tractable variance once the estimated
    moving-average span exceeds 4; until then the caller falls back to the
    plain bias-corrected momentum step.
    """
    span_max = 2.0 / (1.0 - beta2) - 1.0
    span = span_max - 2.0 * step * beta2_pow / bias_correction2
    if span <= 4.0:
        return None
    num = (span - 4.0) * (span - 2.0) * span_max
    den = (span_max - 4.0) * (span_max - 2.0) * span
    return math.sqrt(num / den)


def _require_f64(arrays, what):
    for idx, a in enumerate(arrays):
        if not isinstance(a, np.ndarray) or a.dtype != np.float64 or not a.flags.c_contiguous:
            raise DomainError(
                f"{what}[{idx}] must be a C-contiguous float64 ndarray"
            )


class Optimizer:
    """Drives one set of parameter tensors; mutates them in place.

    ``rng`` is consumed only by the mask/noise draws and may be None when
    the configuration needs no randomness. Draw order per step is fixed:
    for each tensor in parameter order, gradient noise, then gradient mask
    (dg), then learning-rate mask (lrd).
    """

    def __init__(self, params, rule, config, rng=None):
        params = list(params)
        if not params:
            raise DomainError("optimizer needs at least one parameter tensor")
        _require_f64(params, "params")
        if not isinstance(rule, OptimizerRule):
            raise TypeError("rule must be an OptimizerRule")
        if not isinstance(config, LrdConfig):
            raise TypeError("config must be an LrdConfig")
        needs_rng = config.variant != "none" or config.grad_noise is not None
        if needs_rng and rng is None:
            raise DomainError(
                f"variant {config.variant!r} / gradient noise requires an rng"
            )
        self.params = params
        self.rule = rule
        self.config = config
        self.rng = rng
        self._t = 0
        self._beta1_pow = 1.0
        self._beta2_pow = 1.0
        self._m = [np.zeros_like(p) for p in params]
        self._v = [np.zeros_like(p) for p in params] if rule.adaptive else None
        self._vmax = (
            [np.zeros_like(p) for p in params] if rule.kind == "amsgrad" else None
        )

    @property
    def step_count(self):
        return self._t

    def momentum_state(self):
        return self._m

    def second_moment_state(self):
        return self._v

    def max_second_moment_state(self):
        return self._vmax

    def state_dict(self):
        state = {
            "step_count": self._t,
            "beta1_pow": self._beta1_pow,
            "beta2_pow": self._beta2_pow,
            "momentum": [m.copy() for m in self._m],
        }
        if self._v is not None:
            state["second_moment"] = [v.copy() for v in self._v]
        if self._vmax is not None:
            state["max_second_moment"] = [v.copy() for v in self._vmax]
        return state

    def load_state_dict(self, state):
        self._t = int(state["step_count"])
        self._beta1_pow = float(state["beta1_pow"])
        self._beta2_pow = float(state["beta2_pow"])
        for dst, src in zip(self._m, state["momentum"]):
            np.copyto(dst, src)
        if self._v is not None:
            for dst, src in zip(self._v, state["second_moment"]):
                np.copyto(dst, src)
        if self._vmax is not None:
            for dst, src in zip(self._vmax, state["max_second_moment"]):
                np.copyto(dst, src)

    def _check_grad(self, idx, w, g):
        if not isinstance(g, np.ndarray) or g.shape != w.shape:
            raise ShapeMismatchError(
                "step", w.shape, getattr(g, "shape", np.shape(g))
            )
        finite = np.isfinite(g)
        if not finite.all():
            bad = int(np.argmin(finite.ravel()))
            raise NonFiniteGradientError(idx, bad, float(g.ravel()[bad]))

    def step(self, grads, lr=None):
        """Advance every parameter tensor by one update.

        ``lr`` overrides the configured base learning rate for this step
        (used by epoch schedules); masks and accumulators are unaffected.
        """
        grads = list(grads)
        if len(grads) != len(self.params):
            raise DomainError(
                f"expected {len(self.params)} gradient tensors, got {len(grads)}"
            )
        cfg = self.config
        rule = self.rule
        alpha = cfg.base_lr if lr is None else float(lr)
        completed = self._t
        t = completed + 1
        beta1_pow = self._beta1_pow * rule.beta1
        beta2_pow = self._beta2_pow * rule.beta2
        bc1 = 1.0 - beta1_pow
        bc2 = 1.0 - beta2_pow
        rect = -1.0
        if rule.kind == "radam":
            r = radam_rectification(t, rule.beta2, beta2_pow, bc2)
            rect = -1.0 if r is None else r
        noise_std = (
            cfg.grad_noise.std_at(completed) if cfg.grad_noise is not None else None
        )
        kern = _kernels.active

        for idx, (w, g) in enumerate(zip(self.params, grads)):
            g = np.ascontiguousarray(g, dtype=np.float64)
            self._check_grad(idx, w, g)
            if noise_std is not None:
                g = g + self.rng.gaussian(w.shape, 0.0, noise_std)
            if cfg.variant == "dg":
                g = g * self.rng.bernoulli_mask(w.shape, cfg.keep_prob)
            if cfg.variant == "lrd":
                mask = self.rng.bernoulli_mask(w.shape, cfg.keep_prob).ravel()
            else:
                mask = None

            wf = w.ravel()
            gf = g.ravel()
            mf = self._m[idx].ravel()
            if rule.kind == "sgdm":
                kern.sgdm_step(wf, gf, mf, mask, alpha, rule.beta1,
                               rule.grad_weight, cfg.weight_decay)
            elif rule.kind == "rmsprop":
                kern.rmsprop_step(wf, gf, self._v[idx].ravel(), mask, alpha,
                                  rule.beta2, rule.eps, cfg.weight_decay)
            elif rule.kind == "adam":
                kern.adam_step(wf, gf, mf, self._v[idx].ravel(), mask, alpha,
                               rule.beta1, rule.beta2, rule.eps,
                               cfg.weight_decay, bc1, bc2)
            elif rule.kind == "amsgrad":
                kern.amsgrad_step(wf, gf, mf, self._v[idx].ravel(),
                                  self._vmax[idx].ravel(), mask, alpha,
                                  rule.beta1, rule.beta2, rule.eps,
                                  cfg.weight_decay, bc1, bc2)
            else:  # radam
                kern.radam_step(wf, gf, mf, self._v[idx].ravel(), mask, alpha,
                                rule.beta1, rule.beta2, rule.eps,
                                cfg.weight_decay, bc1, bc2, rect)

        self._t = t
        self._beta1_pow = beta1_pow
        self._beta2_pow = beta2_pow


def lr_schedule(base_lr, epoch, milestones=(), factor=0.1):
    """Piecewise-constant decay: multiply by ``factor`` at each milestone.

    With no milestones the learning rate is constant.
    """
    if epoch < 0:
        raise DomainError(f"epoch must be >= 0, got {epoch}")
    effective = base_lr
    for milestone in sorted(milestones):
        if epoch >= milestone:
            effective *= factor
    return effective


@dataclass(frozen=True)
class UpdateScalingReport:
    """Outcome of the mean-update check E[update] = keep_prob * lr * direction."""

    n_draws: int
    keep_prob: float
    checked_elements: int
    max_relative_deviation: float


def expected_update_check(rule, config, params, grads, n_draws, rng,
                          state=None, floor_ratio=1e-3):
    """Statistically verify that masking scales the mean update by keep_prob.

    Restarts from the same (params, state) snapshot for every draw, measures
    the realized update, and compares the sample mean against keep_prob
    times the unmasked update. Elements whose unmasked update is below
    ``floor_ratio`` of the largest one are excluded from the relative
    comparison.
    """
    if n_draws < 100:
        raise DomainError(f"n_draws must be at least 100, got {n_draws}")
    if config.variant != "lrd":
        raise DomainError("expected_update_check requires the lrd variant")
    if config.grad_noise is not None:
        raise DomainError("expected_update_check requires noise-free gradients")
    params = [np.array(p, dtype=np.float64) for p in params]
    grads = [np.ascontiguousarray(g, dtype=np.float64) for g in grads]

    def restart(cfg, stream):
        opt = Optimizer([p.copy() for p in params], rule, cfg, stream)
        if state is not None:
            opt.load_state_dict(state)
        opt.step(grads)
        return [p0 - p1 for p0, p1 in zip(params, opt.params)]

    baseline_cfg = LrdConfig(
        base_lr=config.base_lr, keep_prob=1.0, variant="none",
        weight_decay=config.weight_decay,
    )
    base_update = restart(baseline_cfg, None)

    sums = [np.zeros_like(p) for p in params]
    for draw in range(n_draws):
        update = restart(config, rng.child(draw))
        for acc, u in zip(sums, update):
            acc += u

    max_dev = 0.0
    checked = 0
    for acc, base in zip(sums, base_update):
        mean_update = acc / n_draws
        expected = config.keep_prob * base
        scale = np.max(np.abs(base))
        if scale == 0.0:
            if np.any(mean_update != 0.0):
                max_dev = math.inf
            continue
        keep = np.abs(base) >= floor_ratio * scale
        checked += int(keep.sum())
        err = np.abs(mean_update[keep] - expected[keep])
        ref = np.abs(expected[keep])
        dev = np.divide(err, ref, out=np.where(err == 0.0, 0.0, np.inf), where=ref > 0.0)
        if dev.size:
            max_dev = max(max_dev, float(dev.max()))
    return UpdateScalingReport(
        n_draws=n_draws,
        keep_prob=config.keep_prob,
        checked_elements=checked,
        max_relative_deviation=max_dev,
    )
