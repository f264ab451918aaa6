"""Dataset ingestion: IDX files, synthetic blobs, label noise, batching."""

import os
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import DataFormatError, DomainError
from .rng import Rng

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801

MNIST_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}


@dataclass
class Dataset:
    """Row-major float inputs (n x d) with integer class labels."""

    inputs: np.ndarray
    labels: np.ndarray
    num_classes: int

    def __post_init__(self):
        self.inputs = np.ascontiguousarray(self.inputs, dtype=np.float64)
        self.labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if self.inputs.ndim != 2 or self.inputs.shape[0] < 1:
            raise DomainError(f"inputs must be a non-empty 2-D array, got {self.inputs.shape}")
        if self.labels.shape != (self.inputs.shape[0],):
            raise DomainError("labels length must match the number of rows")
        if self.labels.min() < 0 or self.labels.max() >= self.num_classes:
            raise DomainError(f"labels must lie in [0, {self.num_classes})")

    def __len__(self):
        return self.inputs.shape[0]

    @property
    def dim(self):
        return self.inputs.shape[1]

    def subset(self, n):
        """First n samples (deterministic reduced-scale slice)."""
        if not 1 <= n <= len(self):
            raise DomainError(f"subset size must lie in [1, {len(self)}], got {n}")
        return Dataset(self.inputs[:n].copy(), self.labels[:n].copy(), self.num_classes)


def _read_exact(fh, count, path, offset, what):
    raw = fh.read(count)
    if len(raw) != count:
        raise DataFormatError(path, offset, f"{count} bytes of {what}",
                              f"{len(raw)} bytes (truncated)")
    return raw


def load_idx_images(path):
    """n x (rows*cols) float64 array scaled to [0, 1] from an IDX image file."""
    with open(path, "rb") as fh:
        header = _read_exact(fh, 16, path, 0, "image header")
        magic, n, rows, cols = struct.unpack(">IIII", header)
        if magic != IMAGE_MAGIC:
            raise DataFormatError(path, 0, f"magic 0x{IMAGE_MAGIC:08x}", f"0x{magic:08x}")
        raw = _read_exact(fh, n * rows * cols, path, 16, "pixel data")
        if fh.read(1):
            raise DataFormatError(path, 16 + n * rows * cols, "end of file", "trailing bytes")
    pixels = np.frombuffer(raw, dtype=np.uint8).reshape(n, rows * cols)
    return pixels.astype(np.float64) / 255.0


def load_idx_labels(path):
    with open(path, "rb") as fh:
        header = _read_exact(fh, 8, path, 0, "label header")
        magic, n = struct.unpack(">II", header)
        if magic != LABEL_MAGIC:
            raise DataFormatError(path, 0, f"magic 0x{LABEL_MAGIC:08x}", f"0x{magic:08x}")
        raw = _read_exact(fh, n, path, 8, "label data")
        if fh.read(1):
            raise DataFormatError(path, 8 + n, "end of file", "trailing bytes")
    return np.frombuffer(raw, dtype=np.uint8).astype(np.int64)


def load_idx(images_path, labels_path, num_classes=10):
    inputs = load_idx_images(images_path)
    labels = load_idx_labels(labels_path)
    if inputs.shape[0] != labels.shape[0]:
        raise DataFormatError(labels_path, 4,
                              f"count {inputs.shape[0]} (to match {images_path})",
                              labels.shape[0])
    return Dataset(inputs, labels, num_classes)


def write_idx_images(path, images):
    """Inverse of load_idx_images for fixtures; images are uint8 (n, rows, cols)."""
    images = np.asarray(images, dtype=np.uint8)
    n, rows, cols = images.shape
    with open(path, "wb") as fh:
        fh.write(struct.pack(">IIII", IMAGE_MAGIC, n, rows, cols))
        fh.write(images.tobytes())


def write_idx_labels(path, labels):
    labels = np.asarray(labels, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(struct.pack(">II", LABEL_MAGIC, labels.shape[0]))
        fh.write(labels.tobytes())


def mnist_paths(root):
    out = {}
    for split, (img, lab) in MNIST_FILES.items():
        out[split] = (os.path.join(root, img), os.path.join(root, lab))
    return out


def load_mnist(root, standardize=False):
    """(train, test) datasets from the standard IDX files under ``root``.

    Pixels are scaled to [0, 1]; with ``standardize`` they are additionally
    centered and scaled by the training set's global mean and std.
    """
    paths = mnist_paths(root)
    missing = [p for pair in paths.values() for p in pair if not os.path.exists(p)]
    if missing:
        listing = "\n  ".join(missing)
        raise FileNotFoundError(
            f"MNIST IDX files not found; place them at:\n  {listing}\n"
            "(see scripts/fetch_mnist.py for download instructions)"
        )
    train = load_idx(*paths["train"])
    test = load_idx(*paths["test"])
    if standardize:
        mean = train.inputs.mean()
        std = train.inputs.std()
        train = Dataset((train.inputs - mean) / std, train.labels, train.num_classes)
        test = Dataset((test.inputs - mean) / std, test.labels, test.num_classes)
    return train, test


def synth_blobs(num_classes, per_class, dims, spread, seed):
    """Gaussian clusters with unit pairwise distance between class means.

    Class means are scaled one-hot vectors (requires dims >= num_classes),
    so any two means are exactly distance 1 apart; ``spread`` is the
    isotropic standard deviation around the mean. Deterministic per seed.
    """
    if num_classes < 2:
        raise DomainError(f"num_classes must be >= 2, got {num_classes}")
    if dims < 2:
        raise DomainError(f"dims must be >= 2, got {dims}")
    if dims < num_classes:
        raise DomainError(
            f"dims must be >= num_classes for simplex means ({dims} < {num_classes})"
        )
    if spread < 0.0:
        raise DomainError(f"spread must be >= 0, got {spread}")
    rng = Rng(seed).child_named("synth-blobs")
    n = num_classes * per_class
    labels = np.repeat(np.arange(num_classes, dtype=np.int64), per_class)
    means = np.zeros((num_classes, dims))
    means[np.arange(num_classes), np.arange(num_classes)] = 1.0 / np.sqrt(2.0)
    inputs = means[labels] + rng.gaussian((n, dims), 0.0, spread)
    return Dataset(inputs, labels, num_classes)


@dataclass
class NoisyLabelView:
    """Dataset wrapper with a frozen per-sample label corruption pattern.

    Each sample is independently flagged with probability ``prob``; flagged
    samples observe a label drawn uniformly from the other classes. The
    pattern depends only on (base labels, prob, seed), never on epoch.
    """

    base: Dataset
    prob: float
    seed: int
    labels: np.ndarray = field(init=False)
    corrupted: np.ndarray = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.prob < 1.0:
            raise DomainError(f"corruption probability must lie in [0, 1), got {self.prob}")
        rng = Rng(self.seed).child_named("label-noise")
        n = len(self.base)
        num_classes = self.base.num_classes
        flagged = rng.bernoulli_mask((n,), self.prob).astype(bool)
        # uniform over the C-1 wrong classes: add a nonzero offset mod C
        offsets = rng.integers(1, num_classes, (n,))
        observed = self.base.labels.copy()
        observed[flagged] = (observed[flagged] + offsets[flagged]) % num_classes
        self.labels = observed
        self.corrupted = flagged

    @property
    def inputs(self):
        return self.base.inputs

    @property
    def num_classes(self):
        return self.base.num_classes

    @property
    def corrupted_count(self):
        return int(self.corrupted.sum())

    def __len__(self):
        return len(self.base)


def corrupt_labels(dataset, prob, seed):
    """Noisy-label view; with prob 0 the observed labels equal the base ones."""
    return NoisyLabelView(dataset, prob, seed)


def batches(dataset, batch_size, shuffle_seed, epoch):
    """Deterministic epoch permutation cut into batches (last may be short).

    The order depends only on (shuffle_seed, epoch); every sample appears
    exactly once.
    """
    if batch_size < 1:
        raise DomainError(f"batch_size must be >= 1, got {batch_size}")
    if epoch < 0:
        raise DomainError(f"epoch must be >= 0, got {epoch}")
    n = len(dataset)
    order = Rng(shuffle_seed).child_named("batch-order").child(epoch).permutation(n)
    inputs = dataset.inputs
    labels = dataset.labels
    for start in range(0, n, batch_size):
        idx = order[start:start + batch_size]
        yield inputs[idx], labels[idx]


def num_batches(n, batch_size):
    return (n + batch_size - 1) // batch_size
