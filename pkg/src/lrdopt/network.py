"""Fully-connected ReLU classifier with exact backpropagation.

Forward: affine -> ReLU (-> inverted dropout in train mode) for each hidden
layer, affine to logits, softmax cross-entropy loss averaged over the
batch. Hidden units are kept with probability ``dropout_keep`` and the
survivors scaled by its reciprocal, so evaluation needs no mask and the
train-mode activation matches the eval activation in expectation.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeMismatchError

# Layer presets: the full benchmark network and a cheaper stand-in for tests.
MNIST_MLP_FULL = (784, 1000, 1000, 10)
MNIST_MLP_REDUCED = (784, 256, 256, 10)


class Mlp:
    """Weights/biases for a stack of affine layers with ReLU between them."""

    def __init__(self, layer_sizes, dropout_keep=1.0):
        layer_sizes = tuple(int(s) for s in layer_sizes)
        if len(layer_sizes) < 2 or any(s <= 0 for s in layer_sizes):
            raise DomainError(f"layer_sizes must be >=2 positive ints, got {layer_sizes}")
        if not 0.0 < dropout_keep <= 1.0:
            raise DomainError(f"dropout_keep must lie in (0, 1], got {dropout_keep}")
        self.layer_sizes = layer_sizes
        self.dropout_keep = float(dropout_keep)
        self.weights = [
            np.zeros((layer_sizes[i], layer_sizes[i + 1]), dtype=np.float64)
            for i in range(len(layer_sizes) - 1)
        ]
        self.biases = [
            np.zeros(layer_sizes[i + 1], dtype=np.float64)
            for i in range(len(layer_sizes) - 1)
        ]

    @classmethod
    def init(cls, layer_sizes, rng, dropout_keep=1.0):
        """He-uniform weights (suits ReLU), zero biases, drawn from ``rng``."""
        model = cls(layer_sizes, dropout_keep)
        for w in model.weights:
            fan_in = w.shape[0]
            limit = np.sqrt(6.0 / fan_in)
            w[...] = rng.uniform(-limit, limit, w.shape)
        return model

    @property
    def input_dim(self):
        return self.layer_sizes[0]

    @property
    def output_dim(self):
        return self.layer_sizes[-1]

    def params(self):
        """Flat parameter list [W0, b0, W1, b1, ...]; arrays are live views."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def clone(self):
        other = Mlp(self.layer_sizes, self.dropout_keep)
        for dst, src in zip(other.params(), self.params()):
            np.copyto(dst, src)
        return other


@dataclass
class ActivationCache:
    """Per-layer values needed by the backward pass."""

    inputs: np.ndarray
    hidden: list          # post-ReLU (and post-dropout) activations
    pre_relu: list
    dropout_masks: list   # None entries when no dropout was applied


def _check_inputs(model, inputs):
    inputs = np.ascontiguousarray(inputs, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[1] != model.input_dim:
        raise ShapeMismatchError(
            "forward", (inputs.shape if inputs.ndim == 2 else np.shape(inputs)),
            ("n", model.input_dim),
        )
    return inputs


def forward(model, inputs, train=False, rng=None, fixed_dropout_masks=None):
    """Logits plus the activation cache.

    ``fixed_dropout_masks`` pins the dropout pattern (one mask per hidden
    layer) so gradient checks can hold it constant across evaluations.
    """
    inputs = _check_inputs(model, inputs)
    use_dropout = train and (model.dropout_keep < 1.0 or fixed_dropout_masks)
    if use_dropout and rng is None and fixed_dropout_masks is None:
        raise DomainError("train-mode dropout requires an rng")
    hidden = []
    pre_relu = []
    masks = []
    a = inputs
    n_hidden = len(model.weights) - 1
    for li in range(n_hidden):
        z = a @ model.weights[li] + model.biases[li]
        a = np.maximum(z, 0.0)
        mask = None
        if use_dropout:
            keep = model.dropout_keep
            if fixed_dropout_masks is not None:
                mask = fixed_dropout_masks[li]
            else:
                mask = rng.bernoulli_mask(a.shape, keep)
            a = a * (mask / keep)
        pre_relu.append(z)
        hidden.append(a)
        masks.append(mask)
    logits = a @ model.weights[-1] + model.biases[-1]
    return logits, ActivationCache(inputs, hidden, pre_relu, masks)


def softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _check_labels(labels, n, num_classes):
    labels = np.asarray(labels)
    if labels.shape != (n,):
        raise ShapeMismatchError("labels", labels.shape, (n,))
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise DomainError(f"labels must lie in [0, {num_classes})")
    return labels.astype(np.int64)


def loss_and_grad(model, inputs, labels, train=False, rng=None,
                  fixed_dropout_masks=None):
    """Mean cross-entropy loss and gradients shaped like ``model.params()``.

    Dropout masks sampled in the forward pass are reused in backward.
    """
    logits, cache = forward(model, inputs, train=train, rng=rng,
                            fixed_dropout_masks=fixed_dropout_masks)
    n = logits.shape[0]
    labels = _check_labels(labels, n, model.output_dim)
    probs = softmax(logits)
    eps_clip = np.finfo(np.float64).tiny
    loss = float(-np.mean(np.log(np.maximum(probs[np.arange(n), labels], eps_clip))))

    dlogits = probs
    dlogits[np.arange(n), labels] -= 1.0
    dlogits /= n

    grads_w = [None] * len(model.weights)
    grads_b = [None] * len(model.biases)
    delta = dlogits
    for li in range(len(model.weights) - 1, -1, -1):
        below = cache.hidden[li - 1] if li > 0 else cache.inputs
        grads_w[li] = below.T @ delta
        grads_b[li] = delta.sum(axis=0)
        if li > 0:
            delta = delta @ model.weights[li].T
            mask = cache.dropout_masks[li - 1]
            if mask is not None:
                delta = delta * (mask / model.dropout_keep)
            delta = delta * (cache.pre_relu[li - 1] > 0.0)

    grads = []
    for gw, gb in zip(grads_w, grads_b):
        grads.append(np.ascontiguousarray(gw))
        grads.append(np.ascontiguousarray(gb))
    return loss, grads


def predict(model, inputs, batch_size=1024):
    inputs = _check_inputs(model, inputs)
    out = np.empty(inputs.shape[0], dtype=np.int64)
    for start in range(0, inputs.shape[0], batch_size):
        stop = min(start + batch_size, inputs.shape[0])
        logits, _ = forward(model, inputs[start:stop])
        out[start:stop] = np.argmax(logits, axis=1)  # ties -> lowest class id
    return out


def accuracy(model, inputs, labels, batch_size=1024):
    """Fraction of samples whose argmax logit matches the label."""
    inputs = np.asarray(inputs)
    if inputs.shape[0] == 0:
        raise DomainError("accuracy of an empty dataset")
    labels = _check_labels(labels, inputs.shape[0], model.output_dim)
    return float(np.mean(predict(model, inputs, batch_size) == labels))


def mean_loss(model, inputs, labels, batch_size=1024):
    """Mean eval-mode cross-entropy over a dataset (no dropout)."""
    inputs = _check_inputs(model, inputs)
    if inputs.shape[0] == 0:
        raise DomainError("mean_loss of an empty dataset")
    labels = _check_labels(labels, inputs.shape[0], model.output_dim)
    total = 0.0
    for start in range(0, inputs.shape[0], batch_size):
        stop = min(start + batch_size, inputs.shape[0])
        loss, _ = loss_and_grad(model, inputs[start:stop], labels[start:stop])
        total += loss * (stop - start)
    return total / inputs.shape[0]
