"""Backend equivalence: the compiled kernels must be bit-identical to numpy."""

import numpy as np
import pytest

from lrdopt._kernels import available_backends, get_backend
from lrdopt.rng import Rng

needs_cython = pytest.mark.skipif(
    "cython" not in available_backends(),
    reason="compiled kernel extension not built",
)

RULES = ("sgdm", "rmsprop", "adam", "amsgrad", "radam")


def drive(kern, rule, steps, n, masked, decay, seed=1234):
    rng = Rng(seed)
    grad_rng = rng.child_named("grads")
    mask_rng = rng.child_named("masks")
    w = rng.child_named("init").gaussian((n,))
    m = np.zeros(n)
    v = np.zeros(n)
    vmax = np.zeros(n)
    b1, b2 = 0.9, 0.999
    b1p = b2p = 1.0
    for t in range(1, steps + 1):
        g = grad_rng.gaussian((n,))
        mask = mask_rng.bernoulli_mask((n,), 0.4) if masked else None
        b1p *= b1
        b2p *= b2
        bc1, bc2 = 1.0 - b1p, 1.0 - b2p
        if rule == "sgdm":
            kern.sgdm_step(w, g, m, mask, 0.01, b1, 1.0, decay)
        elif rule == "rmsprop":
            kern.rmsprop_step(w, g, v, mask, 0.01, 0.99, 1e-8, decay)
        elif rule == "adam":
            kern.adam_step(w, g, m, v, mask, 0.001, b1, b2, 1e-8, decay, bc1, bc2)
        elif rule == "amsgrad":
            kern.amsgrad_step(w, g, m, v, vmax, mask, 0.001, b1, b2, 1e-8,
                              decay, bc1, bc2)
        else:
            rect = -1.0 if t <= 4 else 0.25 + 0.5 / t
            kern.radam_step(w, g, m, v, mask, 0.03, b1, b2, 1e-8, decay,
                            bc1, bc2, rect)
    return w, m, v, vmax


@needs_cython
@pytest.mark.parametrize("rule", RULES)
@pytest.mark.parametrize("masked", [False, True])
@pytest.mark.parametrize("decay", [0.0, 0.013])
def test_backends_bit_identical(rule, masked, decay):
    pure = drive(get_backend("pure"), rule, 200, 129, masked, decay)
    comp = drive(get_backend("cython"), rule, 200, 129, masked, decay)
    for a, b in zip(pure, comp):
        assert a.tobytes() == b.tobytes()


def test_gradients_never_modified():
    kern = get_backend("pure")
    g = Rng(0).gaussian((64,))
    keep = g.copy()
    w = np.zeros(64)
    m = np.zeros(64)
    v = np.zeros(64)
    kern.adam_step(w, g, m, v, None, 0.001, 0.9, 0.999, 1e-8, 0.02, 0.1, 0.001)
    assert np.array_equal(g, keep)
    if "cython" in available_backends():
        w2 = np.zeros(64)
        get_backend("cython").adam_step(w2, g, np.zeros(64), np.zeros(64), None,
                                        0.001, 0.9, 0.999, 1e-8, 0.02, 0.1, 0.001)
        assert np.array_equal(g, keep)
        assert w.tobytes() == w2.tobytes()


@pytest.mark.parametrize("backend", available_backends())
def test_zero_mask_freezes_negative_zero_weights(backend):
    # masked-out coordinates must be bit-frozen even for -0.0 entries
    kern = get_backend(backend)
    w = np.array([-0.0, 0.0, 1.5])
    before = w.tobytes()
    g = np.array([-2.0, 3.0, -1.0])
    mask = np.zeros(3)
    kern.sgdm_step(w, g, np.zeros(3), mask, 0.1, 0.9, 1.0, 0.0)
    assert w.tobytes() == before


def test_backend_selection_api():
    assert "pure" in available_backends()
    assert get_backend("pure").NAME == "pure"
    with pytest.raises(ValueError):
        get_backend("fortran")
