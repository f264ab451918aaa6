"""Central finite-difference oracles for gradient verification.

These evaluate only forward values, never the analytic gradient code they
are used to check.
"""

import numpy as np

from . import network
from .toyfn import DOMAIN, toy_gradient, toy_value


def central_difference(fn, point, h):
    """Gradient of scalar fn at ``point`` via symmetric differences."""
    point = np.asarray(point, dtype=np.float64)
    grad = np.zeros_like(point)
    for i in range(point.size):
        bumped = point.copy()
        bumped[i] += h
        hi = fn(bumped)
        bumped[i] -= 2 * h
        lo = fn(bumped)
        grad[i] = (hi - lo) / (2 * h)
    return grad


def relative_error(analytic, numeric, scale_floor=1e-8):
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), scale_floor)
    return np.abs(analytic - numeric) / denom


def max_relative_gradient_error(rng, samples=1000, h=1e-6, domain=DOMAIN):
    """Worst relative disagreement of the analytic toy gradient over the box."""
    (x_lo, x_hi), (y_lo, y_hi) = domain
    worst = 0.0
    for _ in range(samples):
        x = float(rng.uniform(x_lo, x_hi))
        y = float(rng.uniform(y_lo, y_hi))
        analytic = np.array(toy_gradient(x, y))
        numeric = central_difference(lambda p: toy_value(p[0], p[1]), (x, y), h)
        worst = max(worst, float(relative_error(analytic, numeric).max()))
    return worst


def mlp_finite_difference_grads(model, inputs, labels, h=1e-5,
                                fixed_dropout_masks=None):
    """Per-parameter central-difference gradients of the mean batch loss."""
    train = fixed_dropout_masks is not None
    grads = []
    for p in model.params():
        g = np.zeros_like(p)
        flat = p.ravel()
        gflat = g.ravel()
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + h
            hi, _ = network.loss_and_grad(model, inputs, labels, train=train,
                                          fixed_dropout_masks=fixed_dropout_masks)
            flat[i] = original - h
            lo, _ = network.loss_and_grad(model, inputs, labels, train=train,
                                          fixed_dropout_masks=fixed_dropout_masks)
            flat[i] = original
            gflat[i] = (hi - lo) / (2 * h)
        grads.append(g)
    return grads


def mlp_gradient_error(rng, layer_sizes=(2, 4, 3), batch=5, h=1e-5,
                       dropout_keep=1.0, fixed_masks=False):
    """Worst relative disagreement of backprop on a small random model."""
    model = network.Mlp.init(layer_sizes, rng.child_named("weights"),
                             dropout_keep=dropout_keep)
    inputs = rng.child_named("inputs").gaussian((batch, layer_sizes[0]))
    labels = rng.child_named("labels").integers(0, layer_sizes[-1], (batch,))

    masks = None
    if fixed_masks:
        mask_rng = rng.child_named("masks")
        masks = [mask_rng.bernoulli_mask((batch, s), dropout_keep)
                 for s in layer_sizes[1:-1]]

    _, analytic = network.loss_and_grad(model, inputs, labels,
                                        train=masks is not None,
                                        fixed_dropout_masks=masks)
    numeric = mlp_finite_difference_grads(model, inputs, labels, h=h,
                                          fixed_dropout_masks=masks)
    worst = 0.0
    for a, n in zip(analytic, numeric):
        worst = max(worst, float(relative_error(a, n).max()))
    return worst
