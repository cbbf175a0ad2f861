"""Closed-form counts for arithmetic boundaries c, c+d, c+2d, ...

These are independent routes to numbers the recursions also produce; tests
pin them against each other.
"""
from __future__ import annotations

import math

from .errors import PreconditionViolated
from .rings import SigmaPoly, rat
from .series import TruncatedSeries


def lp_arith_closed(c: int, d: int, n: int) -> int:
    """Lattice count under boundary c + i*d: c/(c + n(d+1)) * binom(c + n(d+1), n)."""
    if c < 1 or d < 0 or n < 0:
        raise PreconditionViolated("need c >= 1, d >= 0, n >= 0")
    top = c + n * (d + 1)
    q, r = divmod(c * math.comb(top, n), top)
    if r:
        raise ArithmeticError("closed form failed to divide exactly")
    return q


def t_polynomial(b: int, c: int, d: int, n: int, m: int) -> SigmaPoly:
    """Auxiliary sigma-polynomial T_{n,m}; zero for negative m."""
    if b < 1 or c < 1 or d < 0 or n < 0:
        raise PreconditionViolated("need b >= 1, c >= 1, d >= 0, n >= 0")
    if m < 0:
        return SigmaPoly()
    s = c + n * d
    out = []
    for j in range(m // b + 1):
        out.append(math.comb(s - 1, j) * math.comb(s + m - b * j, m - b * j))
    return SigmaPoly(out)


def sp1b_closed(b: int, c: int, d: int, n: int) -> SigmaPoly:
    """Weighted (1,b)-count under boundary c + i*d, as a sigma-polynomial.

    Lagrange inversion on phi = (1 + sigma*t^b)/(1 - t) gives
    n*SP_n = [t^(n-1)] c*(1 + b*sigma*t^(b-1) + (1-b)*sigma*t^b) * phi^(c+nd)/(1-t),
    so SP_n = (c/n) * [T_{n,n-1} + sigma*b*T_{n,n-b} + sigma*(1-b)*T_{n,n-b-1}]
    for n >= 1, with out-of-range T taken as zero.
    """
    if n == 0:
        return SigmaPoly((1,))
    sigma = SigmaPoly.variable()
    combo = (
        t_polynomial(b, c, d, n, n - 1)
        + sigma * b * t_polynomial(b, c, d, n, n - b)
        + sigma * (1 - b) * t_polynomial(b, c, d, n, n - b - 1)
    )
    scaled = combo * rat(c) / rat(n)
    out = []
    for coeff in scaled.coeffs:
        q = rat(coeff)
        if q.denominator != 1:
            raise ArithmeticError("closed form failed to divide exactly")
        out.append(int(q.numerator))
    return SigmaPoly(out)


def sp11_closed_series(c: int, order: int) -> TruncatedSeries:
    """Generating function of the (1,1)-counts under boundary c + i.

    (t/z)^c where t(z) is the power-series root of t^2 - (1 - sigma z) t + z
    vanishing at 0; coefficients are sigma-polynomials.
    """
    if c < 1:
        raise PreconditionViolated("need c >= 1")
    work = order + 1
    sigma = SigmaPoly.variable()
    radicand = TruncatedSeries([SigmaPoly((1,)), -(sigma * 2 + 4), sigma * sigma], work)
    root = radicand.sqrt()
    linear = TruncatedSeries([SigmaPoly((1,)), -sigma], work)
    t = (linear - root) * (rat(1) / 2)
    ratio = t.shift_down(1)
    out = (ratio ** c).truncate(order)
    cleaned = []
    for p in out.coeffs:
        if isinstance(p, SigmaPoly):
            cs = []
            for q in p.coeffs:
                q = rat(q)
                if q.denominator != 1:
                    raise ArithmeticError("series coefficient failed to clear denominators")
                cs.append(int(q.numerator))
            cleaned.append(SigmaPoly(cs))
        else:
            q = rat(p)
            if q.denominator != 1:
                raise ArithmeticError("series coefficient failed to clear denominators")
            cleaned.append(SigmaPoly((int(q.numerator),)))
    return TruncatedSeries(cleaned, order)
