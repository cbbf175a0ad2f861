"""Ordinary generating functions for ultimately periodic boundaries.

The functional relation ties the counts to powers of a base series.  When
the boundary is ultimately periodic with height k and width l, substituting
the k fractional-power-series solutions of z = t^k * base(t)^l turns the
relation into a k x k linear system whose unknowns are the "section" series
Q_j(z) = sum_q count_{r + qk + j} z^q.  This module solves that system with
exact arithmetic, plus the product formulas available for the tennis-ball
family of boundaries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .appell import AppellData, appell_data
from .boundary import Boundary, StepShape
from .errors import (
    BranchResidualNonzero,
    DomainError,
    InsufficientOrder,
    PrecisionFault,
    PreconditionViolated,
    SingularWithinPrecision,
)
from .rings import CycloNum, Rat, rat
from .series import RamifiedSeries, TruncatedSeries, linear_solve_series


def _branch_step(w: TruncatedSeries, h: TruncatedSeries, k: int):
    """Residual and derivative for the normalized branch equation.

    With tau = u*w(u), the equation z = tau^k h(tau) divided by u^k reads
    G(w) = w^k h(u w) - 1 = 0.  Returns (G, dG/dw) at w's order.
    """
    p = w.order
    inner = w.shift_up(1)
    hv = h.truncate(min(h.order, p)).compose(inner)
    hd = h.derivative()
    hdv = hd.truncate(min(hd.order, p)).compose(inner).shift_up(1).truncate(p)
    wkm1 = w ** (k - 1)
    wk = (wkm1 * w).truncate(p)
    g = wk * hv - 1
    gp = wkm1 * hv * k + wk * hdv
    return g.truncate(p), gp.truncate(p)


def solve_branch_zero(h: TruncatedSeries, k: int, order: int) -> RamifiedSeries:
    """Principal solution tau_0 = u + c_2 u^2 + ... of z = t^k h(t), z = u^k.

    h must have constant term exactly 1 and be known at least to order-1.
    The result carries coefficients through u^order and satisfies the
    equation to u-order k + order - 1 (verified before returning).
    """
    if k < 1:
        raise PreconditionViolated("ramification must be a positive integer")
    if order < 1:
        raise PreconditionViolated("need at least the leading branch coefficient")
    if h.coefficient(0) != 1:
        raise PreconditionViolated("base series must have constant term 1")
    work = order - 1
    if h.order < work:
        raise InsufficientOrder(
            "base series known to order %d, branch needs %d" % (h.order, work)
        )
    w = TruncatedSeries([rat(1)], 0)
    p = 0
    while p < work:
        p = min(work, 2 * p + 1)
        w = TruncatedSeries(list(w.coeffs), p)
        g, gp = _branch_step(w, h, k)
        w = w - g * gp.invert()
    g, _ = _branch_step(w, h, k)
    if g.valuation() is not None:
        raise BranchResidualNonzero(
            "branch iteration failed to close the residual", order=g.valuation()
        )
    return RamifiedSeries(k, 1, list(w.coeffs), order)


def _solve_branch_reference(h: TruncatedSeries, k: int, order: int) -> RamifiedSeries:
    """Coefficient-by-coefficient branch solver (slow; kept for cross-checks).

    With tau = u*w, matching the coefficient of u^j in w^k h(uw) = 1
    determines c_{j+1} after division by k, since the unknown only enters
    through the linear term k*c_{j+1}.
    """
    if h.coefficient(0) != 1:
        raise PreconditionViolated("base series must have constant term 1")
    if h.order < order - 1:
        raise InsufficientOrder(
            "base series known to order %d, branch needs %d" % (h.order, order - 1)
        )
    cs = [rat(1)]
    for j in range(1, order):
        w = TruncatedSeries(cs + [0], j)
        g = (w ** k) * h.truncate(min(h.order, j)).compose(w.shift_up(1))
        cs.append(-rat(g.coefficient(j)) / k)
    return RamifiedSeries(k, 1, cs, order)


@dataclass(frozen=True)
class PuiseuxBranchSet:
    """All k fractional-power-series solutions with zero constant term."""

    k: int
    tau0: RamifiedSeries
    branches: tuple


def all_branches(tau0: RamifiedSeries, k: int, h: TruncatedSeries) -> PuiseuxBranchSet:
    """Twist tau_0 into the k solutions and re-verify each by substitution.

    The branch tau_m multiplies the coefficient of u^i by zeta^(mi); it
    solves the same equation because the defining relations are homogeneous
    of known degree in that grading.
    """
    if tau0.ram != k:
        raise PreconditionViolated("branch ramification disagrees with k")
    branches = []
    for m in range(k):
        tm = tau0.twisted(m)
        lhs = (tm ** k) * tm.compose_truncated(h)
        res = lhs - RamifiedSeries.u_power(k, k, lhs.top)
        if not res.is_known_zero():
            raise BranchResidualNonzero(
                "twisted branch %d fails the defining equation" % m,
                order=res.valuation(),
            )
        branches.append(tm)
    return PuiseuxBranchSet(k=k, tau0=tau0, branches=tuple(branches))


@dataclass(frozen=True)
class SectionGF:
    """The k section series of a boundary, with their provenance."""

    sections: tuple
    boundary: Boundary
    shape: StepShape | None
    sigma: object
    prefix_len: int

    @property
    def height(self) -> int:
        return len(self.sections)


def _det_field(rows):
    """Exact determinant by elimination with division; entries form a field."""
    n = len(rows)
    rows = [list(r) for r in rows]
    sign = 1
    det = None
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        pivot = rows[col][col]
        det = pivot if det is None else det * pivot
        for r in range(col + 1, n):
            f = rows[r][col] / pivot
            if f != 0:
                rows[r] = [rows[r][j] - f * rows[col][j] for j in range(n)]
    return det if sign == 1 else -det


def _vandermonde_unity(k: int):
    zeta = CycloNum.zeta(k)
    powers = [zeta ** i for i in range(k)]
    acc = CycloNum.from_rational(k, 1)
    for i in range(k):
        for j in range(i + 1, k):
            acc = acc * (powers[j] - powers[i])
    return acc


def _section_budget(k: int, q_max: int, exponents) -> int:
    return k * q_max + k * (k - 1) // 2 + k * max(exponents) + 8


def _solve_sections(data: AppellData, q_max: int) -> list:
    k = data.height
    exps = data.period_exponents
    width = data.width
    w_order = _section_budget(k, q_max, exps)
    fresh = appell_data(data.boundary, w_order, data.shape, data.sigma)
    h = (fresh.base ** width).truncate(w_order)
    tau0 = solve_branch_zero(h, k, w_order)
    bset = all_branches(tau0, k, h)
    matrix = []
    rhs = []
    for tau in bset.branches:
        base_at = tau.compose_truncated(fresh.base)
        powers = {}
        for e in exps:
            if e not in powers:
                powers[e] = base_at ** e
        tau_pow = RamifiedSeries.constant(k, 1, tau.top)
        row = []
        for j, e in enumerate(exps):
            if j:
                tau_pow = tau_pow * tau
            row.append(tau_pow * powers[e])
        matrix.append(row)
        rhs.append(tau.compose_truncated(fresh.reduced_rhs))
    lead = [
        [
            c if isinstance(c, CycloNum) else CycloNum.from_rational(k, c)
            for c in (matrix[i][j].coefficient(j) for j in range(k))
        ]
        for i in range(k)
    ]
    det = _det_field(lead)
    if det == 0:
        raise SingularWithinPrecision("section matrix leading determinant vanished")
    if det != _vandermonde_unity(k):
        raise PrecisionFault("section matrix leading determinant is not the unity alternant")
    solution = linear_solve_series(matrix, rhs)
    out = []
    for q in solution:
        qz = q.z_series()
        if qz.order < q_max:
            raise InsufficientOrder(
                "section series provable to z-order %d, wanted %d" % (qz.order, q_max)
            )
        out.append(qz.truncate(q_max))
    return out


def section_gfs(data: AppellData, q_max: int) -> SectionGF:
    """Solve for the section series Q_j(z) = sum_q count_{r+qk+j} z^q.

    Runs the whole pipeline twice, the second time with a larger truncation
    budget, and insists the two answers agree on the requested window.
    Numeric diagonal weights only; the twisted branches live in a cyclotomic
    extension that has no room for a free weight variable.
    """
    if data.shape is not None and data.sigma is None:
        raise DomainError("section solving needs a numeric diagonal weight")
    first = _solve_sections(data, q_max)
    second = _solve_sections(data, q_max + 2)
    for a, b in zip(first, second):
        if not a.matches(b, through=q_max):
            raise PrecisionFault("section series changed between truncation budgets")
    return SectionGF(
        sections=tuple(s.truncate(q_max) for s in second),
        boundary=data.boundary,
        shape=data.shape,
        sigma=data.sigma,
        prefix_len=data.prefix_len,
    )


def assemble_ogf(sections: SectionGF, prefix_counts) -> TruncatedSeries:
    """Interleave the sections and reattach the prefix.

    count_n for n >= r sits in section j = (n - r) mod k at z-degree
    (n - r) div k; the result is contiguous through the largest complete
    window all sections cover.
    """
    prefix = list(prefix_counts)
    if len(prefix) != sections.prefix_len:
        raise PreconditionViolated(
            "prefix of length %d does not match sections built with prefix %d"
            % (len(prefix), sections.prefix_len)
        )
    k = sections.height
    r = len(prefix)
    q_min = min(s.order for s in sections.sections)
    n_max = r + k * q_min + (k - 1)
    out = [0] * (n_max + 1)
    for i, c in enumerate(prefix):
        out[i] = c
    for j, sec in enumerate(sections.sections):
        for q in range(sec.order + 1):
            n = r + k * q + j
            if n <= n_max:
                out[n] = sec.coeffs[q]
    return TruncatedSeries(out, n_max)


def ogf_series(
    bnd: Boundary,
    order: int,
    shape: StepShape | None = None,
    sigma=None,
) -> TruncatedSeries:
    """Full generating function sum_n count_n z^n through z^order."""
    data = appell_data(bnd, 1, shape, sigma)
    r = data.prefix_len
    k = data.height
    q_max = max(0, -(-(order - r - (k - 1)) // k))
    sections = section_gfs(data, q_max)
    return assemble_ogf(sections, data.prefix_counts).truncate(order)


def tennis_q0_product(k: int, l: int, order: int) -> TruncatedSeries:
    """First tennis-ball section by the branch product formula.

    Q_0(z) = ((-1)^(k+1)/z) * prod_j tau_j/(1 - tau_j) over the k solutions
    of z = t^k (1-t)^l with zero constant term.
    """
    if k < 1 or l < 1:
        raise PreconditionViolated("tennis parameters must be positive")
    w_order = k * order + k + 8
    h = (TruncatedSeries([1, -1], w_order) ** l).truncate(w_order)
    tau0 = solve_branch_zero(h, k, w_order)
    bset = all_branches(tau0, k, h)
    prod = RamifiedSeries.constant(k, CycloNum.from_rational(k, 1), w_order + k)
    for tau in bset.branches:
        prod = prod * (tau * (1 - tau).invert())
    signed = prod if k % 2 == 1 else -prod
    result = signed.shift(-k).z_series()
    if result.order < order:
        raise InsufficientOrder(
            "tennis product provable to z-order %d, wanted %d" % (result.order, order)
        )
    return result.truncate(order)


def _catalan_numbers(n_max: int) -> list[int]:
    return [math.comb(2 * n, n) // (n + 1) for n in range(n_max + 1)]


def tennis_catalan_product(k: int, order: int) -> TruncatedSeries:
    """Square tennis-ball case k = l via twisted shifted Catalan factors.

    ((-1)^(k+1)/z) * prod_j (C(zeta^j u) - 1), u = z^(1/k), where C is the
    Catalan series; the factor C(y) - 1 = y + y^2 + 2y^3 + ... is exactly
    y/(1-y') for the branch y' of y = t(1-t), which is how the product
    collapses to the general formula at l = k.
    """
    if k < 1:
        raise PreconditionViolated("tennis parameters must be positive")
    w_order = k * order + k + 2
    cats = _catalan_numbers(w_order)
    tail = RamifiedSeries(k, 0, [0] + cats[1:], w_order)
    prod = RamifiedSeries.constant(k, CycloNum.from_rational(k, 1), w_order + k)
    for j in range(k):
        prod = prod * tail.twisted(j)
    signed = prod if k % 2 == 1 else -prod
    result = signed.shift(-k).z_series()
    if result.order < order:
        raise InsufficientOrder(
            "catalan product provable to z-order %d, wanted %d" % (result.order, order)
        )
    return result.truncate(order)


def alternant_check(taus) -> bool:
    """Determinant identity behind the tennis-ball product formula.

    The matrix has first column tau_i^(k-1)/(1-tau_i) and then the
    Vandermonde columns 1, tau_i, ..., tau_i^(k-2); its determinant must
    equal (-1)^(k+1) * prod_{i<j}(tau_j - tau_i) / prod_j (1 - tau_j).
    """
    ts = [rat(x) for x in taus]
    k = len(ts)
    if k < 1:
        raise PreconditionViolated("need at least one evaluation point")
    if len(set(ts)) != k or any(t == 1 for t in ts):
        raise PreconditionViolated("points must be pairwise distinct and different from 1")
    rows = []
    for t in ts:
        rows.append([t ** (k - 1) / (1 - t)] + [t ** j for j in range(k - 1)])
    det = _det_field(rows)
    num = rat(1)
    for i in range(k):
        for j in range(i + 1, k):
            num = num * (ts[j] - ts[i])
    den = rat(1)
    for t in ts:
        den = den * (1 - t)
    expected = num / den
    if k % 2 == 0:
        expected = -expected
    return det == expected
