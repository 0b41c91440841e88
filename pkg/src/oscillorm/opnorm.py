"""Discretized radial oscillatory operator and its L^p -> L^q norms.

The operator ``f -> \\int_B f(x) exp(i N |x|^j s^k) dx`` depends on ``x`` only
through ``|x|``, so it is discretized on the radial variable.  Both axes are
parametrized by ``u = rho^j`` and ``v = s^k``, which turns the kernel into
``exp(i N u v)``.  Each axis carries ``M`` uniform cells of width ``1/M``
with ``Q`` Gauss-Legendre nodes per cell; the first cell ``[0, 1/M]`` is
graded geometrically toward 0 and contains the focusing radius as a cell
edge.  Weights are rescaled per cell so that they reproduce the exact cell
measure.

Products of the uniform (body) cells are chirp convolutions:

    (i + x)(m + y) = ((i + x)^2 + (m + y)^2 - (i - m + x - y)^2) / 2

so for every pair of node offsets ``(x, y)`` the body block is Toeplitz after
diagonal chirp scaling, and ``apply``/``adjoint`` cost ``O(Q M log M)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.fft import fft, ifft, next_fast_len

from .errors import ConvergenceError, DegenerateError, DomainError, EstimationError, ResolutionError
from .kernels import nudft
from .theory import BallGeometry, LebesguePoint, PhaseFamily, interpolated_upper_bound

__all__ = [
    "RadialGrid",
    "SampledOperator",
    "CartesianOperator",
    "NormEstimate",
    "ExponentFit",
    "DEFAULT_LADDER",
    "DEFAULT_ETA",
    "build_operator",
    "build_cartesian_operator",
    "norm_2_2",
    "candidate_vectors",
    "construction_ratios",
    "lp_norm",
    "rayleigh_ratio",
    "duality_map",
    "power_ascent",
    "norm_lower_bound",
    "fit_exponent",
]

DEFAULT_LADDER = tuple(2.0 ** e for e in range(7, 14))
DEFAULT_ETA = 0.1
CELL_ORDER = 4
MIN_CELLS = 64
_HEAD_LEVELS = 8
_DENSE_LIMIT = 1 << 26


@dataclass(frozen=True)
class _Axis:
    t: np.ndarray           # transformed nodes (u or v)
    weights: np.ndarray
    nhead: int              # nodes inside the head cell [0, 1/M]
    cells: int


def _head_edges(h: float, brk: float | None) -> np.ndarray:
    edges = {h}
    low = h
    if brk is not None and 0 < brk < h:
        edges.add(brk)
        x = brk
        while 2 * x < h:
            x *= 2
            edges.add(x)
        low = brk
    edges.update(low * 2.0 ** -e for e in range(1, _HEAD_LEVELS + 1))
    return np.array([0.0, *sorted(edges)])


def _axis(cells: int, power: int, dim: int, brk: float | None, order: int) -> _Axis:
    h = 1.0 / cells
    edges = np.concatenate([_head_edges(h, brk), h * np.arange(2, cells + 1)])
    x, w = np.polynomial.legendre.leggauss(order)
    x, w = 0.5 * (x + 1), 0.5 * w
    lo, width = edges[:-1, None], np.diff(edges)[:, None]
    t = lo + width * x[None, :]
    # density of rho^(dim-1) d rho in the variable t = rho^power
    dens = t ** (dim / power - 1.0) / power
    raw = width * w[None, :] * dens
    mass = (edges[1:] ** (dim / power) - edges[:-1] ** (dim / power)) / dim
    weights = raw * (mass / raw.sum(axis=1))[:, None]
    nhead = order * (len(_head_edges(h, brk)) - 1)
    return _Axis(t.ravel(), weights.ravel(), nhead, cells)


@dataclass(frozen=True)
class RadialGrid:
    """Radial and time quadratures.

    ``rho_weights`` integrate against ``omega_{n-1} rho^(n-1) d rho`` (so they
    sum to the ball volume) and ``s_weights`` against ``ds`` on ``[0, 1]``.
    ``u_nodes = rho_nodes**j`` and ``v_nodes = s_nodes**k`` are kept because
    the kernel is ``exp(i N u v)``.
    """

    rho_nodes: np.ndarray
    rho_weights: np.ndarray
    s_nodes: np.ndarray
    s_weights: np.ndarray
    u_nodes: np.ndarray
    v_nodes: np.ndarray
    rho_head: int
    s_head: int
    cells: int
    order: int


def _grid(family: PhaseFamily, N: float, cells: int, order: int, eta: float) -> RadialGrid:
    geom = BallGeometry.of(family.n)
    brk_u = eta ** family.j / N if N > 0 else None
    brk_v = eta ** family.k / N if N > 0 else None
    ua = _axis(cells, family.j, family.n, brk_u, order)
    va = _axis(cells, family.k, 1, brk_v, order)
    return RadialGrid(
        rho_nodes=ua.t ** (1.0 / family.j),
        rho_weights=geom.sphere_area * ua.weights,
        s_nodes=va.t ** (1.0 / family.k),
        s_weights=va.weights,
        u_nodes=ua.t,
        v_nodes=va.t,
        rho_head=ua.nhead,
        s_head=va.nhead,
        cells=cells,
        order=order,
    )


class SampledOperator:
    """Weighted matrix ``(T f)_m = sum_i K[m, i] w_i f_i`` with ``K = exp(i N u_i v_m)``.

    ``apply`` and ``adjoint`` act on 1-D vectors or on column blocks.  The
    adjoint is taken in the weighted inner products, so
    ``<T f, g>_s = <f, T* g>_rho``.
    """

    def __init__(self, family: PhaseFamily, N: float, grid: RadialGrid, eta: float = DEFAULT_ETA):
        self.family = family
        self.N = float(N)
        self.grid = grid
        self.eta = eta
        self.geometry = BallGeometry.of(family.n)
        M, Q = grid.cells, grid.order
        self._hu, self._hv = grid.rho_head, grid.s_head
        u, v = grid.u_nodes, grid.v_nodes
        self._head_rows = np.exp(1j * self.N * np.multiply.outer(v[:self._hv], u))
        self._head_cols = np.exp(1j * self.N * np.multiply.outer(v[self._hv:], u[:self._hu]))
        # body nodes sit at (i + off[g]) / M for cells i = 1..M-1
        x, _ = np.polynomial.legendre.leggauss(Q)
        off = 0.5 * (x + 1)
        alpha = self.N / (M * M)
        idx = np.arange(1, M)[:, None] + off[None, :]
        self._chirp = np.exp(0.5j * alpha * idx * idx)
        self._L = next_fast_len(3 * (M - 1))
        d = np.arange(-(M - 2), M - 1).astype(float)
        # lag kernel for source offset g and target offset h: d + off[h] - off[g]
        lag = d[:, None, None] + off[None, None, :] - off[None, :, None]
        # stored as [lag, target, source] so a batched matmul does the offset sum
        spec = fft(np.exp(-0.5j * alpha * lag * lag), self._L, axis=0)
        self._spec = np.ascontiguousarray(spec.transpose(0, 2, 1))
        spec = fft(np.exp(0.5j * alpha * lag * lag), self._L, axis=0)
        self._spec_adj = np.ascontiguousarray(spec.transpose(0, 2, 1))

    @property
    def shape(self):
        return self.grid.s_nodes.size, self.grid.rho_nodes.size

    @cached_property
    def kernel(self) -> np.ndarray:
        """Dense ``K[m, i]``; only sensible for small grids."""
        rows, cols = self.shape
        if rows * cols > _DENSE_LIMIT:
            raise ResolutionError(f"dense kernel of shape {self.shape} is too large")
        return np.exp(1j * self.N * np.multiply.outer(self.grid.v_nodes, self.grid.u_nodes))

    def _toeplitz(self, body, spec, chirp):
        M, Q = self.grid.cells, self.grid.order
        cols = body.shape[-1]
        a = body.reshape(M - 1, Q, cols) * chirp[:, :, None]
        ahat = fft(a, self._L, axis=0)
        yhat = np.matmul(spec, ahat)
        y = ifft(yhat, axis=0)[M - 2:2 * M - 3]
        return (y * chirp[:, :, None]).reshape((M - 1) * Q, cols)

    def apply(self, f):
        f = np.asarray(f)
        vec = f.ndim == 1
        c = (f.reshape(f.shape[0], -1) * self.grid.rho_weights[:, None]).astype(complex)
        hu, hv = self._hu, self._hv
        out = np.empty((self.shape[0], c.shape[1]), dtype=complex)
        out[:hv] = self._head_rows @ c
        out[hv:] = self._toeplitz(c[hu:], self._spec, self._chirp) + self._head_cols @ c[:hu]
        return out[:, 0] if vec else out

    def adjoint(self, g):
        g = np.asarray(g)
        vec = g.ndim == 1
        c = (g.reshape(g.shape[0], -1) * self.grid.s_weights[:, None]).astype(complex)
        hu, hv = self._hu, self._hv
        out = self._head_rows.conj().T @ c[:hv]
        out[:hu] += self._head_cols.conj().T @ c[hv:]
        out[hu:] += self._toeplitz(c[hv:], self._spec_adj, self._chirp.conj())
        return out[:, 0] if vec else out

    def apply_direct(self, f):
        """``apply`` by direct summation (no FFT); for cross-checks."""
        c = np.asarray(f, dtype=complex) * self.grid.rho_weights
        return nudft(self.grid.u_nodes, self.grid.v_nodes, self.N, c)


class CartesianOperator:
    """Dense operator on a masked tensor grid of the unit disk (oracle only)."""

    def __init__(self, family: PhaseFamily, N: float, xy: np.ndarray, weights: np.ndarray,
                 s_nodes: np.ndarray, s_weights: np.ndarray):
        self.family = family
        self.N = float(N)
        self.xy = xy
        self.weights = weights
        self.s_nodes = s_nodes
        self.s_weights = s_weights
        r = np.hypot(xy[:, 0], xy[:, 1])
        self.kernel = np.exp(1j * self.N * np.multiply.outer(s_nodes ** family.k, r ** family.j))

    @property
    def shape(self):
        return self.kernel.shape

    @property
    def rho_weights(self):
        return self.weights

    def apply(self, f):
        return self.kernel @ (np.asarray(f).T * self.weights).T

    def adjoint(self, g):
        return self.kernel.conj().T @ (np.asarray(g).T * self.s_weights).T


def _weights(op):
    if isinstance(op, SampledOperator):
        return op.grid.rho_weights, op.grid.s_weights
    return op.weights, op.s_weights


def build_operator(family: PhaseFamily, N: float, points_per_period: int = 16,
                   eta: float = DEFAULT_ETA, cells: int | None = None,
                   order: int = CELL_ORDER) -> SampledOperator:
    """Discretize the radially reduced operator at frequency ``N``.

    The default cell count is ``max(64, ceil(ppp N / (2 pi Q)))`` so each
    axis carries at least ``ppp`` nodes per kernel period.  An explicit
    ``cells`` below that, or ``ppp < 8``, is refused.
    """
    if not N >= 0 or not math.isfinite(N):
        raise DomainError(f"N={N!r} must be finite and non-negative")
    if points_per_period < 8:
        raise ResolutionError(f"points_per_period={points_per_period} < 8 would alias")
    if not 0 < eta <= 0.25:
        raise DomainError(f"eta={eta!r} outside (0, 1/4]")
    need = max(MIN_CELLS, math.ceil(points_per_period * N / (2 * math.pi * order)))
    if cells is None:
        cells = need
    elif cells < need:
        raise ResolutionError(f"{cells} cells cannot resolve N={N} (need {need})")
    return SampledOperator(family, N, _grid(family, N, cells, order, eta), eta)


def build_cartesian_operator(family: PhaseFamily, N: float, side_points: int = 256,
                             s_cells: int = MIN_CELLS) -> CartesianOperator:
    """Midpoint tensor grid on ``[-1, 1]^2`` masked to the unit disk."""
    if family.n != 2:
        raise DomainError("the cartesian oracle is implemented for n = 2 only")
    if not 2 <= side_points <= 256:
        raise DomainError("side_points must lie in [2, 256]")
    h = 2.0 / side_points
    c = -1 + h * (np.arange(side_points) + 0.5)
    X, Y = np.meshgrid(c, c, indexing="ij")
    mask = X * X + Y * Y < 1.0
    xy = np.column_stack([X[mask], Y[mask]])
    weights = np.full(xy.shape[0], h * h)
    s_cells = max(s_cells, math.ceil(16 * N / (2 * math.pi * CELL_ORDER)))
    va = _axis(s_cells, family.k, 1, None, CELL_ORDER)
    return CartesianOperator(family, N, xy, weights, va.t ** (1.0 / family.k), va.weights)


def lp_norm(f, weights, p: float):
    """Discrete weighted L^p norm, column-wise for 2-D input."""
    af = np.abs(f)
    top = af.max(axis=0)
    if math.isinf(p):
        return top
    # factor out the largest modulus so that large p neither overflows nor underflows
    safe = np.where(top > 0, top, 1.0)
    w = weights if af.ndim == 1 else weights[:, None]
    return top * (w * (af / safe) ** p).sum(axis=0) ** (1.0 / p)


def rayleigh_ratio(op, f, point: LebesguePoint) -> float:
    """``||T f||_q / ||f||_p`` in the discrete weighted norms."""
    wr, ws = _weights(op)
    num = lp_norm(op.apply(f), ws, point.q)
    return float(num / lp_norm(f, wr, point.p))


def duality_map(x, r: float):
    """``x |x|^(r-2)``, with the value 0 wherever ``x = 0``."""
    ax = np.abs(x)
    if r == 2:
        return x
    if math.isinf(r):
        # limit of the unit-max scaled map: the phase on the maximizing entries
        top = ax.max(axis=0)
        on = (ax >= top * (1 - 1e-12)) & (ax > 0)
        return np.where(on, x / np.where(on, ax, 1.0), 0.0)
    nz = ax > 0
    safe = np.where(nz, ax, 1.0)
    return np.where(nz, x * safe ** (r - 2), 0.0)


@dataclass(frozen=True)
class NormEstimate:
    lower: float
    upper: float
    method_lower: str
    method_upper: str
    lower_by_start: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.lower > self.upper * (1 + 1e-6):
            raise EstimationError(f"lower {self.lower!r} exceeds upper {self.upper!r}")


def norm_2_2(op, tol: float = 1e-7, block: int = 4, max_iter: int = 3000, seed: int = 0) -> float:
    """Largest singular value of ``D_s^(1/2) K D_rho^(1/2)``.

    Block power (subspace) iteration on the Gram map ``T* T`` with a
    Rayleigh-Ritz step; stops once the top Ritz value moves by less than
    ``tol`` relatively.
    """
    if not 0 < tol <= 1e-3:
        raise DomainError(f"tol={tol!r} outside (0, 1e-3]")
    wr, _ = _weights(op)
    sq = np.sqrt(wr)
    rng = np.random.default_rng(seed)
    n = wr.size
    b = min(block, n)
    X = rng.standard_normal((n, b)) + 1j * rng.standard_normal((n, b))
    prev = None
    for it in range(max_iter):
        X, _ = np.linalg.qr(X)
        # Gram map in symmetrized coordinates: D^(1/2) T* T D^(-1/2)
        Y = sq[:, None] * op.adjoint(op.apply(X / sq[:, None]))
        H = X.conj().T @ Y
        evals, evecs = np.linalg.eigh(0.5 * (H + H.conj().T))
        top = float(evals[-1])
        if top <= 0:
            return 0.0
        if prev is not None and abs(top - prev) <= tol * top:
            return math.sqrt(top)
        prev = top
        X = Y @ evecs[:, ::-1]
    resid = abs(top - prev) / top
    raise ConvergenceError(f"power iteration stalled at relative change {resid:.3e}", residual=resid)


def candidate_vectors(family: PhaseFamily, N: float, grid: RadialGrid, eta: float = DEFAULT_ETA):
    """Focusing, constant and oscillatory test vectors on ``grid``."""
    if not 0 < eta <= 0.25:
        raise DomainError(f"eta={eta!r} outside (0, 1/4]")
    rho = grid.rho_nodes
    if N > 0:
        # compare on u = rho^j, where the focusing radius is a cell edge
        cut = eta ** family.j / N
        focusing = (grid.u_nodes <= cut * (1 + 1e-12)).astype(complex)
        if not focusing.any():
            raise DegenerateError(f"focusing radius {eta * N ** (-1 / family.j):.3e} below the grid")
    else:
        focusing = np.ones(rho.size, dtype=complex)
    constant = np.ones(rho.size, dtype=complex)
    oscillatory = np.exp(2j * N * (rho * rho - rho))
    return focusing, constant, oscillatory


def _radius_axis(cells: int, dim: int, brk: float, order: int):
    """Gauss cells uniform in ``rho`` with ``brk`` as an extra edge."""
    h = 1.0 / cells
    if brk < h:
        edges = np.concatenate([_head_edges(h, brk), h * np.arange(2, cells + 1)])
    else:
        edges = np.union1d(h * np.arange(cells + 1), [brk])
    x, w = np.polynomial.legendre.leggauss(order)
    x, w = 0.5 * (x + 1), 0.5 * w
    lo, width = edges[:-1, None], np.diff(edges)[:, None]
    rho = (lo + width * x[None, :]).ravel()
    return rho, (width * w[None, :]).ravel() * rho ** (dim - 1)


def construction_ratios(family: PhaseFamily, N: float, points, points_per_period: int = 8,
                        eta: float = DEFAULT_ETA, order: int = CELL_ORDER) -> dict:
    """``||T f||_q / ||f||_p`` for the focusing, constant and oscillatory vectors.

    Unlike the operator grid, which is uniform in ``rho^j``, the radius
    grid here is uniform in ``rho`` and resolves frequency ``2N``, so the
    oscillatory vector ``exp(2iN(rho^2 - rho))`` is sampled adequately all
    the way down to the centre.  ``T f`` is evaluated by direct summation on
    the operator's time grid.  Returns ``{kind: [ratio per point]}``.
    """
    if not N > 0:
        raise DomainError("N must be positive")
    if points_per_period < 8:
        raise ResolutionError(f"points_per_period={points_per_period} < 8 would alias")
    if not 0 < eta <= 0.25:
        raise DomainError(f"eta={eta!r} outside (0, 1/4]")
    points = list(points)
    geom = BallGeometry.of(family.n)
    cells = max(MIN_CELLS, math.ceil(points_per_period * 2 * N / (2 * math.pi * order)))
    radius = eta * N ** (-1.0 / family.j)
    rho, wr = _radius_axis(cells, family.n, radius, order)
    wr = geom.sphere_area * wr
    s_cells = max(MIN_CELLS, math.ceil(points_per_period * N / (2 * math.pi * order)))
    va = _axis(s_cells, family.k, 1, eta ** family.k / N, order)
    F = np.column_stack([
        (rho <= radius * (1 + 1e-12)).astype(complex),
        np.ones(rho.size, dtype=complex),
        np.exp(2j * N * (rho * rho - rho)),
    ])
    TF = nudft(rho ** family.j, va.t, N, F * wr[:, None])
    out = {}
    for col, kind in enumerate(("focusing", "constant", "oscillatory")):
        out[kind] = [float(lp_norm(TF[:, col], va.weights, pt.q) / lp_norm(F[:, col], wr, pt.p))
                     for pt in points]
    return out


def _dual_direction(X, r: float):
    """``duality_map`` up to a positive factor per column, safe for any ``r``.

    Moduli are divided by the column maximum before the power, so the
    largest entry is exactly 1 and survives even when ``r`` is so large
    that every other entry underflows.
    """
    if r == 2:
        return X
    ax = np.abs(X)
    top = ax.max(axis=0)
    scaled = ax / np.where(top > 0, top, 1.0)
    nz = ax > 0
    with np.errstate(under="ignore"):
        return np.where(nz, X / np.where(nz, ax, 1.0) * scaled ** (r - 1), 0.0)


def power_ascent(op, F, point: LebesguePoint, steps: int = 200, tol: float = 1e-7):
    """Nonlinear power ascent ``f <- J_p'(T* J_q(T f))`` on each column of ``F``.

    Returns the best ratio reached per column.  Columns stop once the ratio
    no longer improves by ``tol`` relatively.
    """
    wr, ws = _weights(op)
    p, q = point.p, point.q
    pd = 1.0 if math.isinf(p) else point.p_dual
    F = np.array(F, dtype=complex, copy=True)
    best = np.zeros(F.shape[1])
    active = np.arange(F.shape[1])
    for _ in range(steps):
        if not active.size:
            break
        G = F[:, active]
        norms = lp_norm(G, wr, p)
        if np.any(norms == 0):
            raise DegenerateError("ascent produced a zero vector")
        G = G / norms
        TG = op.apply(G)
        val = lp_norm(TG, ws, q)
        done = val <= best[active] * (1 + tol)
        best[active] = np.maximum(best[active], val)
        F[:, active] = _dual_direction(op.adjoint(_dual_direction(TG, q)), pd)
        active = active[~done]
    return best


def _endpoint(op, point: LebesguePoint):
    """Exact discrete norms at ``p = 1`` or ``q = inf`` (unimodular kernel)."""
    wr, ws = _weights(op)
    if point.a == 1:
        # a point mass at any column: ||K[:, i]||_q over a probability measure
        return 1.0
    if point.b == 0:
        # every row has modulus one, so its dual norm is |B|^(1/p')
        return float(wr.sum() ** (1 - point.a))
    return None


def norm_lower_bound(op, point: LebesguePoint, restarts: int = 8, seed: int = 0,
                     steps: int = 200, c22: float | None = None, tol: float = 1e-7) -> NormEstimate:
    """Sandwich ``||T||_{p->q}`` between test-vector ascent and interpolation."""
    if restarts < 1:
        raise DomainError("restarts must be >= 1")
    exact = _endpoint(op, point)
    if exact is not None:
        return NormEstimate(exact, exact, "endpoint", "endpoint")
    if c22 is None:
        c22 = norm_2_2(op, tol=1e-9)
    geom = op.geometry if isinstance(op, SampledOperator) else BallGeometry.of(op.family.n)
    upper = interpolated_upper_bound(c22, geom, point)
    labels = ["focusing", "constant", "oscillatory"]
    if isinstance(op, SampledOperator):
        starts = list(candidate_vectors(op.family, op.N, op.grid, op.eta))
    else:
        starts, labels = [], []
    rng = np.random.default_rng(seed)
    n = op.shape[1]
    R = rng.standard_normal((n, restarts)) + 1j * rng.standard_normal((n, restarts))
    F = np.column_stack(starts + [R]) if starts else R
    labels = labels + [f"random{i}" for i in range(restarts)]
    for attempt in range(4):
        try:
            vals = power_ascent(op, F, point, steps=steps, tol=tol)
            break
        except DegenerateError:
            R = rng.standard_normal((n, restarts)) + 1j * rng.standard_normal((n, restarts))
            F = R
            labels = [f"random{i}" for i in range(restarts)]
    else:
        raise EstimationError("every ascent start degenerated to zero")
    by_start = dict(zip(labels, map(float, vals)))
    best = max(by_start, key=by_start.get)
    method = best if best in ("focusing", "constant", "oscillatory") else "ascent"
    return NormEstimate(float(vals.max()), float(upper), method, "interpolation", by_start)


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    max_residual: float
    ladder: tuple

    def __post_init__(self):
        lad = np.asarray(self.ladder)
        if lad.size < 4 or np.any(np.diff(lad) <= 0):
            raise DomainError("ladder must be strictly increasing with at least 4 rungs")


def fit_exponent(pairs) -> ExponentFit:
    """Least-squares fit of ``log norm`` against ``log N``."""
    pairs = sorted(pairs)
    if len(pairs) < 4:
        raise DomainError("need at least 4 (N, norm) pairs")
    Ns = np.array([p[0] for p in pairs], dtype=float)
    vals = np.array([p[1] for p in pairs], dtype=float)
    if np.any(vals <= 0) or np.any(Ns <= 0):
        raise DomainError("norms and frequencies must be positive")
    lx, ly = np.log(Ns), np.log(vals)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return ExponentFit(float(slope), float(intercept), float(np.abs(resid).max()), tuple(Ns))
