"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting
``OSCILLORM_PURE_PYTHON=1`` forces the numpy fallback.
"""
from __future__ import annotations

import os

from . import _pykernels
from ._pykernels import KINDS

__all__ = ["BACKEND", "KINDS", "nudft", "bilinear_sum", "duhamel_sum", "kernel_code"]

_impl = _pykernels
BACKEND = "python"
if os.environ.get("OSCILLORM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def kernel_code(kind: str) -> int:
    try:
        return KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown kernel {kind!r}; expected one of {sorted(KINDS)}") from None


def nudft(x, y, scale, c):
    return _impl.nudft(x, y, float(scale), c)


def bilinear_sum(a, x, b, y, kind: str, param: float = 0.0) -> complex:
    return _impl.bilinear_sum(a, x, b, y, kernel_code(kind), float(param))


def duhamel_sum(s, ws, t, xabs, N, n, rho, wrho, shift=0.0) -> complex:
    if n not in (1, 2, 3):
        raise ValueError("spherical average implemented for n = 1, 2, 3")
    return _impl.duhamel_sum(s, ws, float(t), float(xabs), float(N), int(n), rho, wrho, float(shift))
