"""Update-kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback is
bit-for-bit equivalent, so results never depend on which one loaded. Set
``LRDOPT_KERNELS=pure`` or ``=cython`` to force a backend (``cython`` fails
loudly if the extension is missing).
"""

import os

from . import pure

_FORCED = os.environ.get("LRDOPT_KERNELS", "auto").lower()

if _FORCED not in ("auto", "pure", "cython"):
    raise ValueError(
        f"LRDOPT_KERNELS must be 'auto', 'pure' or 'cython', got {_FORCED!r}"
    )

if _FORCED == "pure":
    active = pure
elif _FORCED == "cython":
    from . import _fused as active
else:
    try:
        from . import _fused as active
    except ImportError:
        active = pure

BACKEND = active.NAME


def available_backends():
    names = ["pure"]
    try:
        from . import _fused  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names


def get_backend(name):
    """Fetch a backend module by name (for tests and benchmarks)."""
    if name == "pure":
        return pure
    if name == "cython":
        from . import _fused
        return _fused
    raise ValueError(f"unknown kernel backend {name!r}")
