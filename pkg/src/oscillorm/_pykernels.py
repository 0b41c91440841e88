"""Pure numpy implementations of the hot loops (fallback for ``_ckernels``)."""
from __future__ import annotations

import numpy as np
from scipy.special import j0

KINDS = {"hilbert": 0, "w": 1, "v": 2, "lorentz": 3, "sqrt": 4}

_BLOCK = 1 << 22


def nudft(x, y, scale, c):
    """``out[m] = sum_i c[i] exp(1j * scale * x[i] * y[m])``; ``c`` may hold columns."""
    x = np.ascontiguousarray(x, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    c = np.ascontiguousarray(c, dtype=complex)
    out = np.empty((y.size,) + c.shape[1:], dtype=complex)
    step = max(1, _BLOCK // max(x.size, 1))
    for start in range(0, y.size, step):
        ph = np.multiply.outer(scale * y[start:start + step], x)
        out[start:start + step] = np.exp(1j * ph) @ c
    return out


def _kernel(kind, X, Y, param):
    if kind == 0:
        return 1.0 / (X + Y)
    if kind == 1:
        return 1.0 / (1.0 + param * np.abs(X * X - Y * Y))
    if kind == 2:
        d = np.abs(X * X - Y * Y)
        with np.errstate(divide="ignore"):
            return np.where(d > 0, 1.0 / np.sqrt(np.where(d > 0, d, 1.0)), 0.0)
    if kind == 3:
        return 1.0 / (1.0 + param * param * (X - Y) ** 2)
    if kind == 4:
        return 1.0 / (1.0 + np.sqrt(param * np.abs(X - Y)))
    raise ValueError(f"unknown kernel code {kind}")


def bilinear_sum(a, x, b, y, kind, param=0.0):
    """``sum_{i,m} a[i] b[m] K(x[i], y[m])`` for one of the built-in kernels."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = 0j
    step = max(1, _BLOCK // max(y.size, 1))
    for start in range(0, x.size, step):
        K = _kernel(kind, x[start:start + step, None], y[None, :], param)
        total += a[start:start + step] @ (K @ b)
    return complex(total)


def _sphere_average(n, z):
    if n == 1:
        return np.cos(z)
    if n == 2:
        return j0(z)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(z == 0, 1.0, np.sin(z) / np.where(z == 0, 1.0, z))


def duhamel_sum(s, ws, t, xabs, N, n, rho, wrho, shift=0.0):
    """Time integral of the forced free evolution of a small-ball forcing.

    ``sum_s ws (t-s)^(-n/2) e^{-i(N^2 s - shift)} e^{i xabs^2/(4(t-s))} A(s)``
    with ``A(s) = sum_rho wrho e^{i rho^2/(4(t-s))} S_n(xabs rho/(2(t-s)))``,
    ``S_n`` the spherical average of a plane wave.  ``wrho`` carries the
    radial measure.
    """
    s = np.asarray(s, dtype=float)
    ws = np.asarray(ws, dtype=float)
    rho = np.asarray(rho, dtype=float)
    wrho = np.asarray(wrho, dtype=float)
    total = 0j
    step = max(1, _BLOCK // max(rho.size, 1))
    for start in range(0, s.size, step):
        tau = t - s[start:start + step]
        beta = 0.25 / tau
        inner = (np.exp(1j * beta[:, None] * rho[None, :] ** 2)
                 * _sphere_average(n, 2 * beta[:, None] * xabs * rho[None, :])) @ wrho
        outer = ws[start:start + step] * tau ** (-0.5 * n) * np.exp(
            1j * (beta * xabs * xabs - N * N * s[start:start + step] + shift))
        total += outer @ inner
    return complex(total)
