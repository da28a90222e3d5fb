"""Cubic boundary interpolant g and exact sup-norms of its derivatives.

g is the unique cubic with g(0)=a, g(1)=b, g'(0)=c, g'(1)=d.  Its
derivative norms on [0,1] feed the solution-envelope bounds, so sup_norm
works from closed-form critical points rather than sampling.
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class BoundaryData:
    """Clamped boundary values u(0)=a, u(1)=b, u'(0)=c, u'(1)=d."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"boundary value {name} is not finite")


@dataclass(frozen=True)
class CubicPoly:
    """c0 + c1 t + c2 t^2 + c3 t^3; evaluation accepts scalars or arrays."""

    c0: float
    c1: float
    c2: float
    c3: float

    def __call__(self, t):
        return self.c0 + t * (self.c1 + t * (self.c2 + t * self.c3))


def hermite_interpolant(bd: BoundaryData) -> CubicPoly:
    """The unique cubic matching the four boundary values."""
    return CubicPoly(
        bd.a,
        bd.c,
        3.0 * (bd.b - bd.a) - 2.0 * bd.c - bd.d,
        2.0 * (bd.a - bd.b) + bd.c + bd.d,
    )


def derivative(p: CubicPoly, order: int) -> CubicPoly:
    """Exact coefficient differentiation; degree drops, top coefficients zero."""
    if order not in (0, 1, 2, 3):
        raise ValueError(f"derivative order must be 0..3, got {order!r}")
    c = (p.c0, p.c1, p.c2, p.c3)
    for _ in range(order):
        c = (c[1], 2.0 * c[2], 3.0 * c[3], 0.0)
    return CubicPoly(*c)


def _interior_critical_points(p: CubicPoly):
    # roots of p' = c1 + 2 c2 t + 3 c3 t^2 inside (0,1)
    aq, bq, cq = 3.0 * p.c3, 2.0 * p.c2, p.c1
    roots = []
    if aq == 0.0:
        if bq != 0.0:
            roots.append(-cq / bq)
    else:
        disc = bq * bq - 4.0 * aq * cq
        if disc >= 0.0:
            r = math.sqrt(disc)
            roots.append((-bq + r) / (2.0 * aq))
            roots.append((-bq - r) / (2.0 * aq))
    return [r for r in roots if 0.0 < r < 1.0]


def sup_norm(p: CubicPoly) -> float:
    """max of |p| on [0,1], exact via endpoints plus critical points."""
    candidates = [0.0, 1.0] + _interior_critical_points(p)
    return max(abs(p(t)) for t in candidates)
