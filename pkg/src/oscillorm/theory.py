"""Closed-form exponent surface and the interpolation upper-bound chain.

The operators studied here are

    T f(s) = \\int_B f(x) exp(i N |x|^j s^k) dx,   s in [0, 1],

with ``B`` the unit ball of R^n.  A point ``(a, b)`` of the unit square
stands for the exponent pair ``(1/p, 1/q)``; ``a = 0`` is ``p = inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "LebesguePoint",
    "PhaseFamily",
    "BallGeometry",
    "sigma",
    "theoretical_exponent",
    "interpolated_upper_bound",
]


@dataclass(frozen=True)
class LebesguePoint:
    """Reciprocal exponents ``a = 1/p`` and ``b = 1/q``."""

    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0) or math.isnan(v):
                raise DomainError(f"{name}={v!r} outside [0, 1]")

    @classmethod
    def from_exponents(cls, p: float, q: float) -> "LebesguePoint":
        return cls(_recip(p), _recip(q))

    @property
    def p(self) -> float:
        return math.inf if self.a == 0 else 1.0 / self.a

    @property
    def q(self) -> float:
        return math.inf if self.b == 0 else 1.0 / self.b

    @property
    def p_dual(self) -> float:
        return math.inf if self.a == 1 else 1.0 / (1.0 - self.a)

    @property
    def q_dual(self) -> float:
        return math.inf if self.b == 1 else 1.0 / (1.0 - self.b)


def _recip(p: float) -> float:
    if p < 1:
        raise DomainError(f"Lebesgue exponent {p!r} < 1")
    return 0.0 if math.isinf(p) else 1.0 / p


@dataclass(frozen=True)
class PhaseFamily:
    """Phase ``N |x|^j s^k`` on the ball of dimension ``n``."""

    j: int
    k: int
    n: int

    def __post_init__(self):
        if self.j not in (1, 2) or self.k not in (1, 2):
            raise DomainError(f"(j, k)=({self.j}, {self.k}) not in {{1,2}}^2")
        if self.n < 1:
            raise DomainError(f"dimension n={self.n} < 1")

    def __str__(self):
        return f"({self.j},{self.k},{self.n})"

    @property
    def tag(self) -> str:
        return f"j{self.j}k{self.k}n{self.n}"


@dataclass(frozen=True)
class BallGeometry:
    """Unit ball volume and unit sphere area in dimension ``n``."""

    n: int
    volume: float
    sphere_area: float

    @classmethod
    def of(cls, n: int) -> "BallGeometry":
        if n < 1:
            raise DomainError(f"dimension n={n} < 1")
        vol = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
        return cls(n, vol, n * vol)

    def ball_volume(self, radius: float) -> float:
        return self.volume * radius**self.n


def sigma(point: LebesguePoint) -> float:
    """Piecewise-linear interpolation profile on the unit square.

    Branches are tried in the order ``2b``, ``2(1-a)``, ``1``; they agree on
    the shared edges so the tie rule is unobservable.
    """
    a, b = point.a, point.b
    if a <= 1 - b and b <= 0.5:
        return 2 * b
    if a >= 0.5 and a + b >= 1:
        return 2 * (1 - a)
    return 1.0


def theoretical_exponent(family: PhaseFamily, point: LebesguePoint) -> float:
    """Claimed decay rate ``alpha`` in ``||T||_{p->q} ~ N^(-alpha)``."""
    if family.n == 1 and family.j == 2:
        return 0.25 * sigma(point)
    return sigma(point) / (2 * family.k)


def interpolated_upper_bound(c22: float, geom: BallGeometry, point: LebesguePoint) -> float:
    """Bound on ``||T||_{p->q}`` from the ``L^2 -> L^2`` constant ``c22``.

    Riesz-Thorin between ``L^1 -> L^inf`` (norm 1) and ``L^2 -> L^2`` gives
    ``c22^(2(1-a))`` on the anti-diagonal; Hoelder on [0,1] extends it down
    in ``q``; Hoelder on the ball extends it in ``p`` at the cost of a power
    of ``|B|``.
    """
    if not c22 > 0:
        raise DomainError(f"c22={c22!r} must be positive")
    a, b = point.a, point.b
    vol = geom.volume
    if a <= 1 - b and b <= 0.5:
        return vol ** (1 - a - b) * c22 ** (2 * b)
    if a >= 0.5 and a + b >= 1:
        return c22 ** (2 * (1 - a))
    return vol ** (0.5 - a) * c22
