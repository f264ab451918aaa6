"""Numpy reference implementation of the fused update kernels.

Each function advances one parameter tensor by one optimizer step: fold in
coupled weight decay, update the gradient accumulators, form the update
direction, and apply it through the (optional) learning-rate mask.

The order of floating-point operations here is a contract: the compiled
backend in ``_fused.pyx`` performs the exact same sequence of IEEE-754
double roundings, and the test suite asserts bit-for-bit equality between
the two. Do not "simplify" expressions without mirroring the change there.

All arrays are flat, C-contiguous float64. ``mask`` is None (no dropout)
or a {0.0, 1.0} array. Gradients are never modified. The final
``u + 0.0`` normalizes any -0.0 update to +0.0 so that masked-out
coordinates subtract positive zero, which leaves every float (including
-0.0) bit-unchanged.
"""

import numpy as np

NAME = "pure"


def _apply(w, delta, mask, alpha):
    if mask is None:
        u = delta * alpha
    else:
        u = (delta * mask) * alpha
    np.add(u, 0.0, out=u)
    np.subtract(w, u, out=w)


def sgdm_step(w, g, m, mask, alpha, beta, grad_weight, decay):
    if decay != 0.0:
        g = g + decay * w
    m *= beta
    m += grad_weight * g
    _apply(w, m, mask, alpha)


def rmsprop_step(w, g, v, mask, alpha, beta2, eps, decay):
    if decay != 0.0:
        g = g + decay * w
    c2 = 1.0 - beta2
    v *= beta2
    v += c2 * (g * g)
    delta = g / (np.sqrt(v) + eps)
    _apply(w, delta, mask, alpha)


def adam_step(w, g, m, v, mask, alpha, beta1, beta2, eps, decay, bc1, bc2):
    if decay != 0.0:
        g = g + decay * w
    c1 = 1.0 - beta1
    c2 = 1.0 - beta2
    m *= beta1
    m += c1 * g
    v *= beta2
    v += c2 * (g * g)
    delta = (m / bc1) / (np.sqrt(v / bc2) + eps)
    _apply(w, delta, mask, alpha)


def amsgrad_step(w, g, m, v, vmax, mask, alpha, beta1, beta2, eps, decay, bc1, bc2):
    if decay != 0.0:
        g = g + decay * w
    c1 = 1.0 - beta1
    c2 = 1.0 - beta2
    m *= beta1
    m += c1 * g
    v *= beta2
    v += c2 * (g * g)
    np.maximum(vmax, v, out=vmax)
    delta = (m / bc1) / (np.sqrt(vmax / bc2) + eps)
    _apply(w, delta, mask, alpha)


def radam_step(w, g, m, v, mask, alpha, beta1, beta2, eps, decay, bc1, bc2, rect):
    """rect >= 0: variance-rectified adaptive step; rect < 0: plain momentum warmup."""
    if decay != 0.0:
        g = g + decay * w
    c1 = 1.0 - beta1
    c2 = 1.0 - beta2
    m *= beta1
    m += c1 * g
    v *= beta2
    v += c2 * (g * g)
    if rect >= 0.0:
        delta = (rect * (m / bc1)) / (np.sqrt(v / bc2) + eps)
    else:
        delta = m / bc1
    _apply(w, delta, mask, alpha)
