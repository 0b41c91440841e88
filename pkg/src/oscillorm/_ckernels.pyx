# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, fabs, pow

cdef extern from "math.h" nogil:
    double j0(double)

cnp.import_array()


def nudft(x, y, double scale, c):
    c_arr = np.asarray(c, dtype=np.complex128)
    single = c_arr.ndim == 1
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef double complex[:, ::1] cv = np.array(c_arr.reshape(xv.shape[0], -1), dtype=np.complex128,
                                              copy=True, order="C")
    cdef Py_ssize_t i, m, col, ni = xv.shape[0], nm = yv.shape[0], nc = cv.shape[1]
    out = np.zeros((nm, nc), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef double ph, cr, ci
    cdef double complex e
    with nogil:
        for m in range(nm):
            for i in range(ni):
                ph = scale * xv[i] * yv[m]
                cr = cos(ph)
                ci = sin(ph)
                e = cr + 1j * ci
                for col in range(nc):
                    ov[m, col] = ov[m, col] + cv[i, col] * e
    return out[:, 0] if single else out


cdef inline double _kernel(int kind, double x, double y, double param) nogil:
    cdef double d
    if kind == 0:
        return 1.0 / (x + y)
    if kind == 1:
        return 1.0 / (1.0 + param * fabs(x * x - y * y))
    if kind == 2:
        d = fabs(x * x - y * y)
        return 1.0 / sqrt(d) if d > 0 else 0.0
    if kind == 3:
        return 1.0 / (1.0 + param * param * (x - y) * (x - y))
    return 1.0 / (1.0 + sqrt(param * fabs(x - y)))


def bilinear_sum(a, x, b, y, int kind, double param=0.0):
    if kind < 0 or kind > 4:
        raise ValueError(f"unknown kernel code {kind}")
    cdef double complex[::1] av = np.array(a, dtype=np.complex128, copy=True, order="C")
    cdef double complex[::1] bv = np.array(b, dtype=np.complex128, copy=True, order="C")
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t i, m, ni = xv.shape[0], nm = yv.shape[0]
    cdef double kv, rr, ri, tr = 0.0, ti = 0.0
    with nogil:
        for i in range(ni):
            rr = 0.0
            ri = 0.0
            for m in range(nm):
                kv = _kernel(kind, xv[i], yv[m], param)
                rr += kv * bv[m].real
                ri += kv * bv[m].imag
            tr += av[i].real * rr - av[i].imag * ri
            ti += av[i].real * ri + av[i].imag * rr
    return complex(tr, ti)


cdef inline double _sphere_average(int n, double z) nogil:
    if n == 1:
        return cos(z)
    if n == 2:
        return j0(z)
    return 1.0 if z == 0 else sin(z) / z


def duhamel_sum(s, ws, double t, double xabs, double N, int n, rho, wrho, double shift=0.0):
    if n < 1 or n > 3:
        raise ValueError("spherical average implemented for n = 1, 2, 3")
    cdef const double[::1] sv = np.ascontiguousarray(s, dtype=np.float64)
    cdef const double[::1] wsv = np.ascontiguousarray(ws, dtype=np.float64)
    cdef const double[::1] rv = np.ascontiguousarray(rho, dtype=np.float64)
    cdef const double[::1] wrv = np.ascontiguousarray(wrho, dtype=np.float64)
    cdef Py_ssize_t i, r, ns = sv.shape[0], nr = rv.shape[0]
    cdef double tau, beta, ar, ai, sa, ph, amp, or_, oi, tr = 0.0, ti = 0.0
    with nogil:
        for i in range(ns):
            tau = t - sv[i]
            beta = 0.25 / tau
            ar = 0.0
            ai = 0.0
            for r in range(nr):
                sa = wrv[r] * _sphere_average(n, 2.0 * beta * xabs * rv[r])
                ph = beta * rv[r] * rv[r]
                ar += sa * cos(ph)
                ai += sa * sin(ph)
            amp = wsv[i] * pow(tau, -0.5 * n)
            ph = beta * xabs * xabs - N * N * sv[i] + shift
            or_ = amp * cos(ph)
            oi = amp * sin(ph)
            tr += or_ * ar - oi * ai
            ti += or_ * ai + oi * ar
    return complex(tr, ti)
