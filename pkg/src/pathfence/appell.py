"""Triangular count recursions and the functional relation behind them.

The counting sequences satisfy one umbral-style relation

    sum_n  count_n * t^n * base(t)^{s_n}  =  1,

where base(t) is (1 - t) for pure lattice paths and (1 - t) * F(t) for
(a, b)-paths; F substitutes the diagonal weight into the Gould series.
Extracting coefficients gives triangular recursions that compute each count
from the earlier ones with binomial (or binomial-times-sigma) multipliers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .boundary import Boundary, StepShape, slope_condition
from .errors import (
    PreconditionViolated,
    ResidualNonzero,
    SlopeConditionViolated,
    UnsupportedShape,
)
from .oracles import _sigma_weight
from .rings import SigmaPoly, rat
from .series import TruncatedSeries


def lp_recursion(bnd: Boundary, n_max: int) -> list[int]:
    """Lattice path counts through n_max via the alternating binomial recursion."""
    if n_max < 0:
        raise PreconditionViolated("n must be non-negative")
    counts = [1]
    for n in range(1, n_max + 1):
        acc = 0
        for m in range(n):
            term = counts[m] * math.comb(bnd.term(m), n - m)
            acc = acc - term if (n - m) % 2 == 0 else acc + term
        counts.append(acc)
    return counts


def _column_multiplier(shape: StepShape, s: int, k: int, w):
    """Coefficient of t^k in the column series attached to boundary term s."""
    a, b = shape
    acc = 0
    j = 0
    while k - j * (b - 1) >= 0:
        m = k - j * (b - 1)
        c = math.comb(s + j * a, m) * math.comb(m, j)
        if c:
            term = c * w ** j
            acc = acc + term if m % 2 == 0 else acc - term
        if b == 1 and j >= k:
            break
        j += 1
    return acc


def _rhs_coefficient(shape: StepShape, n: int, w):
    a, b = shape
    acc = 0
    d = 0
    while n - d * (b - 1) >= 0:
        m = n - d * (b - 1)
        c = math.comb(d * a, m) * math.comb(m, d)
        if c:
            term = c * w ** d
            acc = acc + term if m % 2 == 0 else acc - term
        if b == 1 and d >= n:
            break
        d += 1
    return acc


def _sp_counts(bnd: Boundary, shape: StepShape, n_max: int, sigma, check_slope: bool):
    a, b = shape
    if b < 1:
        raise UnsupportedShape("diagonal step must rise (b >= 1)")
    if check_slope:
        check = slope_condition(bnd, shape)
        if not check:
            raise SlopeConditionViolated(
                "boundary admits a crossing diagonal chord at height %d"
                % check.counterexample,
                index=check.counterexample,
            )
    if n_max < 0:
        raise PreconditionViolated("n must be non-negative")
    w = _sigma_weight(sigma)
    counts = [1 * w ** 0]
    for n in range(1, n_max + 1):
        acc = _rhs_coefficient(shape, n, w)
        for m in range(n):
            acc = acc - counts[m] * _column_multiplier(shape, bnd.term(m), n - m, w)
        counts.append(acc)
    return counts


def sp_recursion(bnd: Boundary, shape: StepShape, n_max: int, sigma=None) -> list:
    """Weighted (a,b)-path counts through n_max; boundary must pass the slope check."""
    return _sp_counts(bnd, shape, n_max, sigma, check_slope=True)


def parity_check(bnd: Boundary, n_max: int) -> bool:
    """All (1,1) counts at sigma = -1 vanish for n >= 1.

    This is a formal identity of the recursion (the relation collapses to
    sum count_n t^n = 1 because the base series degenerates to 1), so no
    slope check is applied.
    """
    counts = _sp_counts(bnd, StepShape(1, 1), n_max, rat(-1), check_slope=False)
    return all(c == 0 for c in counts[1:])


def parking_recursion(bnd: Boundary, n_max: int) -> list[int]:
    """Parking-style counts through n_max from the exponential-side recursion."""
    if n_max < 0:
        raise PreconditionViolated("n must be non-negative")
    counts = [1]
    for n in range(1, n_max + 1):
        acc = 0
        for m in range(n):
            term = math.comb(n, m) * counts[m] * bnd.term(m) ** (n - m)
            acc = acc - term if (n - m) % 2 == 0 else acc + term
        counts.append(acc)
    return counts


def gould_series(a: int, order: int) -> TruncatedSeries:
    """The series f with f(z) - 1 = z * f(z)^a, integer coefficients.

    Coefficient m is binom(a*m + 1, m) / (a*m + 1), which divides exactly.
    """
    if a < 0:
        raise UnsupportedShape("negative diagonal width")
    out = []
    for m in range(order + 1):
        num = math.comb(a * m + 1, m)
        q, r = divmod(num, a * m + 1)
        if r:
            raise ArithmeticError("Gould coefficient failed to divide")
        out.append(q)
    return TruncatedSeries(out, order)


def diagonal_factor(shape: StepShape, order: int, sigma=None) -> TruncatedSeries:
    """F(t): the Gould series with -sigma * t^b * (1-t)^(a-1) substituted."""
    a, b = shape
    if b < 1:
        raise UnsupportedShape("diagonal step must rise (b >= 1)")
    w = _sigma_weight(sigma)
    if a >= 1:
        poly = TruncatedSeries([1, -1], order) ** (a - 1)
    else:
        poly = TruncatedSeries([1] * (order + 1), order)
    inner = (poly * (-w)).shift_up(b).truncate(order)
    return gould_series(a, order).compose(inner)


def base_series(order: int, shape: StepShape | None = None, sigma=None) -> TruncatedSeries:
    """The series raised to boundary powers in the functional relation."""
    lattice = TruncatedSeries([1, -1], order)
    if shape is None:
        return lattice
    return lattice * diagonal_factor(shape, order, sigma)


def counts_for(bnd: Boundary, n_max: int, shape: StepShape | None = None, sigma=None):
    if shape is None:
        return lp_recursion(bnd, n_max)
    return sp_recursion(bnd, shape, n_max, sigma)


@dataclass(frozen=True)
class AppellData:
    """The functional relation reduced past the boundary prefix.

    With r = len(prefix counts), p the last prefix boundary term (0 for an
    empty prefix), and offsets b_j the period block, the tail counts satisfy

        sum_j  Q_j(z) * t^j * base^{b_j}  =  reduced_rhs,   z = t^k * base^l.
    """

    boundary: Boundary
    shape: StepShape | None
    sigma: object
    order: int
    base: TruncatedSeries
    prefix_counts: tuple
    period_exponents: tuple[int, ...]
    reduced_rhs: TruncatedSeries

    @property
    def height(self) -> int:
        return len(self.period_exponents)

    @property
    def width(self) -> int:
        return self.period_exponents[-1]

    @property
    def prefix_len(self) -> int:
        return len(self.prefix_counts)


def appell_data(
    bnd: Boundary,
    order: int,
    shape: StepShape | None = None,
    sigma=None,
) -> AppellData:
    """Assemble the reduced relation data at the given truncation order."""
    r = bnd.prefix_len
    p = bnd.offset
    work = order + r
    base = base_series(work, shape, sigma)
    prefix_counts = tuple(counts_for(bnd, r - 1, shape, sigma)) if r else ()
    numerator = TruncatedSeries.one(work)
    for i, c in enumerate(prefix_counts):
        numerator = numerator - (base ** bnd.term(i) * c).shift_up(i).truncate(work)
    reduced = numerator.shift_down(r)
    if p:
        reduced = reduced * (base.invert() ** p)
    return AppellData(
        boundary=bnd,
        shape=shape,
        sigma=sigma,
        order=order,
        base=base.truncate(order),
        prefix_counts=prefix_counts,
        period_exponents=bnd.period,
        reduced_rhs=reduced.truncate(order),
    )


def appell_residual(
    bnd: Boundary,
    order: int,
    shape: StepShape | None = None,
    sigma=None,
    counts=None,
) -> int:
    """Verify sum_n count_n t^n base^{s_n} = 1 through t^order; returns order.

    Counts default to the triangular recursions; a precomputed list can be
    passed to check a different route.  Raises ResidualNonzero at the first
    failing coefficient.
    """
    if counts is None:
        counts = counts_for(bnd, order, shape, sigma)
    if len(counts) < order + 1:
        raise PreconditionViolated("need counts through the requested order")
    base = base_series(order, shape, sigma)
    power = base ** bnd.term(0)
    total = TruncatedSeries.zero(order)
    prev = bnd.term(0)
    for n in range(order + 1):
        s_n = bnd.term(n)
        if s_n != prev:
            power = (power * base ** (s_n - prev)).truncate(order)
            prev = s_n
        total = total + (power * counts[n]).shift_up(n).truncate(order)
    for i in range(order + 1):
        want = 1 if i == 0 else 0
        if total.coeffs[i] != want:
            raise ResidualNonzero(
                "relation residual nonzero at t^%d" % i, order=i
            )
    return order
