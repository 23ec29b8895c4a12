"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy kernels
take over. ``WAVEFEAT_BACKEND=python`` forces the fallback and
``WAVEFEAT_BACKEND=native`` makes a missing extension an import error.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["native"] = _ckernels


def available():
    return sorted(_BACKENDS)


def _initial():
    requested = os.environ.get("WAVEFEAT_BACKEND", "auto").strip().lower()
    if requested in ("", "auto"):
        return _BACKENDS.get("native", _pykernels)
    if requested not in ("python", "native"):
        raise ImportError(f"WAVEFEAT_BACKEND must be auto, python or native, got {requested!r}")
    if requested not in _BACKENDS:
        raise ImportError("WAVEFEAT_BACKEND=native but wavefeat._ckernels is not built")
    return _BACKENDS[requested]


kernels = _initial()


def set_backend(name):
    """Switch the active kernel module; returns the previous backend name."""
    global kernels
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; available: {available()}")
    previous = kernels.NAME
    kernels = _BACKENDS[name]
    return previous


def active():
    return kernels.NAME
