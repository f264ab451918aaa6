"""Deterministic, splittable random streams.

Every random draw in the package comes from a Philox4x64-10 counter-based
bit generator seeded through ``numpy.random.SeedSequence``. The same seed
produces the same stream on every platform, and child streams derived from
(seed, spawn path) are reproducible and statistically independent, which is
what lets experiment arms run in any order without perturbing each other.
"""

import numpy as np

from .errors import DomainError

ALGORITHM = "philox4x64-10"


class Rng:
    """Single-owner random stream; derive children instead of sharing."""

    algorithm = ALGORITHM

    def __init__(self, seed, _sequence=None):
        if _sequence is None:
            if not isinstance(seed, (int, np.integer)) or seed < 0:
                raise DomainError(f"seed must be a non-negative integer, got {seed!r}")
            _sequence = np.random.SeedSequence(int(seed))
        self.seed = seed
        self._sequence = _sequence
        self._gen = np.random.Generator(np.random.Philox(_sequence))

    def child(self, *path):
        """Independent stream at integer spawn path ``path`` under this seed.

        Children are keyed by (root seed, full path), so the same path always
        yields the same stream regardless of what else has been drawn.
        """
        if not path:
            raise ValueError("child() requires at least one index")
        for idx in path:
            if not isinstance(idx, (int, np.integer)) or idx < 0:
                raise DomainError(f"child indices must be non-negative ints, got {idx!r}")
        key = self._sequence.spawn_key + tuple(int(i) for i in path)
        seq = np.random.SeedSequence(self._sequence.entropy, spawn_key=key)
        return Rng(self.seed, _sequence=seq)

    def child_named(self, label):
        """Child stream keyed by a stable string label (UTF-8 bytes as path)."""
        if not label:
            raise ValueError("child_named() requires a non-empty label")
        return self.child(*label.encode("utf-8"))

    def gaussian(self, shape, mean=0.0, std=1.0):
        if std < 0.0:
            raise DomainError(f"gaussian std must be >= 0, got {std}")
        z = self._gen.standard_normal(size=tuple(shape), dtype=np.float64)
        return mean + std * z

    def bernoulli_mask(self, shape, p):
        """0.0/1.0 mask; each element is 1 independently with probability p."""
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"keep probability must lie in [0, 1], got {p}")
        u = self._gen.random(size=tuple(shape), dtype=np.float64)
        return (u < p).astype(np.float64)

    def uniform(self, low, high, shape=()):
        return self._gen.uniform(low, high, size=tuple(shape))

    def integers(self, low, high, shape=()):
        return self._gen.integers(low, high, size=tuple(shape))

    def permutation(self, n):
        return self._gen.permutation(n)


def gaussian_sample(rng, shape, mean, std):
    """Tensor of the given shape drawn from N(mean, std^2)."""
    return rng.gaussian(shape, mean, std)


def bernoulli_mask(rng, shape, p):
    """Binary {0.0, 1.0} tensor with keep probability p per element."""
    return rng.bernoulli_mask(shape, p)
