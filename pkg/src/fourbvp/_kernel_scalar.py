"""Closed-form Green kernel of u'''' = psi on [0,1] with clamped data.

The kernel G(t,s) solves u''''=psi, u(0)=u(1)=u'(0)=u'(1)=0 via
u(t) = integral of G(t,s) psi(s).  It is piecewise polynomial with branches
meeting at s = t:

    G(t,s) = s^2 (1-t)^2 (3t - s - 2ts) / 6      for s <= t
    G(t,s) = t^2 (1-s)^2 (3s - t - 2ts) / 6      for t <= s

green1/green2/green3 are the first three t-derivatives.  G, G1, G2 are
continuous across s = t; G3 jumps by exactly 1 there, and green3_star
replaces the seam value by the average of the one-sided limits so that
trapezoidal quadrature through the seam stays second-order accurate.

All branch tests are exact floating comparisons: both branches agree
bitwise at s == t for orders 0-2, and order-3 callers that care about the
seam go through green3_star.  Only multiplications are used (no **) so the
numba-compiled and vectorized numpy versions of these formulas produce
bit-identical results.
"""


def green0(t, s):
    """G(t,s)."""
    if s <= t:
        w = 1.0 - t
        return s * s * w * w * (3.0 * t - s - 2.0 * t * s) / 6.0
    w = 1.0 - s
    return t * t * w * w * (3.0 * s - t - 2.0 * t * s) / 6.0


def green1(t, s):
    """dG/dt."""
    if s <= t:
        w = t - 1.0
        return (-(s * s * (2.0 * t - 2.0) * (s - 3.0 * t + 2.0 * s * t)) / 6.0
                - (s * s * (2.0 * s - 3.0) * w * w) / 6.0)
    w = s - 1.0
    return (-(t * t * (2.0 * s + 1.0) * w * w) / 6.0
            - (t * w * w * (t - 3.0 * s + 2.0 * s * t)) / 3.0)


def green2(t, s):
    """d2G/dt2."""
    if s <= t:
        return (-(s * s * (s - 3.0 * t + 2.0 * s * t)) / 3.0
                - (s * s * (2.0 * s - 3.0) * (2.0 * t - 2.0)) / 3.0)
    w = s - 1.0
    return (-(w * w * (t - 3.0 * s + 2.0 * s * t)) / 3.0
            - (2.0 * t * (2.0 * s + 1.0) * w * w) / 3.0)


def green3(t, s):
    """d3G/dt3; the seam s == t takes the left-limit branch s^2(3-2s)."""
    if s <= t:
        return s * s * (3.0 - 2.0 * s)
    return s * s * (3.0 - 2.0 * s) - 1.0


def green3_star(t, s):
    """d3G/dt3 with the seam value replaced by the one-sided average."""
    if s < t:
        return s * s * (3.0 - 2.0 * s)
    if s > t:
        return s * s * (3.0 - 2.0 * s) - 1.0
    return t * t * (3.0 - 2.0 * t) - 0.5
