"""Kernel selection: the compiled extension when importable, else pure Python."""

from __future__ import annotations

import os

from . import _pykernels

_LIMIT = 2**61

try:
    if os.environ.get("HOLEFIELD_PURE"):
        raise ImportError("pure kernels requested")
    from . import _ckernels as _impl

    COMPILED = True
except ImportError:  # pragma: no cover - depends on the build
    _impl = _pykernels
    COMPILED = False


def _small(*seqs) -> bool:
    return all(-_LIMIT < e < _LIMIT for s in seqs for e in s[:1] + s[-1:])


def convolve(ea, ca, eb, cb, bound):
    if COMPILED and _small(ea, eb) and (bound is None or -_LIMIT < bound < _LIMIT):
        return _impl.convolve(ea, ca, eb, cb, bound)
    return _pykernels.convolve(ea, ca, eb, cb, bound)


def merge_add(ea, ca, eb, cb, bound):
    if COMPILED and _small(ea, eb) and (bound is None or -_LIMIT < bound < _LIMIT):
        return _impl.merge_add(ea, ca, eb, cb, bound)
    return _pykernels.merge_add(ea, ca, eb, cb, bound)
