"""Algebraicity certificates for computed generating functions.

A certificate is a nonzero bivariate polynomial P(z, y) with integer
coefficients such that P(z, F(z)) vanishes through a stated truncation
order.  Candidates are guessed from an exact rational nullspace of the
coefficient matrix of the monomials z^i F(z)^j and then re-verified at
twice the guessing order.  A verified candidate witnesses consistency
with algebraicity; it is not a minimality proof.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .appell import counts_for
from .boundary import Boundary, StepShape
from .errors import InsufficientOrder, PreconditionViolated
from .rings import rat
from .series import TruncatedSeries


@dataclass(frozen=True)
class AnnihilatorCandidate:
    """Integer coefficient grid, coeffs[i][j] multiplying z^i y^j."""

    dz: int
    dy: int
    coeffs: tuple
    verified_order: int

    def to_json_dict(self) -> dict:
        return {
            "dz": self.dz,
            "dy": self.dy,
            "coeffs": [list(row) for row in self.coeffs],
            "verified_order": self.verified_order,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "AnnihilatorCandidate":
        coeffs = tuple(tuple(int(c) for c in row) for row in doc["coeffs"])
        return cls(
            dz=int(doc["dz"]),
            dy=int(doc["dy"]),
            coeffs=coeffs,
            verified_order=int(doc["verified_order"]),
        )


def _nullspace_vector(rows, ncols):
    """First basis vector of the nullspace under the given column order.

    Reduced row echelon form over exact rationals; the earliest pivot-free
    column becomes the free variable set to 1, which fixes the output
    deterministically.
    """
    mat = [[rat(x) for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    if not free:
        return None
    f0 = free[0]
    vec = [rat(0)] * ncols
    vec[f0] = rat(1)
    for row_index, c in enumerate(pivots):
        vec[c] = -mat[row_index][f0]
    return vec


def _normalize_grid(vec, dz, dy):
    """Scale a rational monomial vector to integers, content 1, and a
    positive coefficient on the leading monomial (highest y-degree, then
    highest z-degree)."""
    denom_lcm = 1
    for v in vec:
        d = int(rat(v).denominator)
        denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
    ints = [int(rat(v).numerator) * (denom_lcm // int(rat(v).denominator)) for v in vec]
    content = 0
    for v in ints:
        content = gcd(content, abs(v))
    ints = [v // content for v in ints]
    lead = 0
    for j in range(dy, -1, -1):
        for i in range(dz, -1, -1):
            v = ints[j * (dz + 1) + i]
            if v != 0:
                lead = v
                break
        if lead:
            break
    if lead < 0:
        ints = [-v for v in ints]
    grid = tuple(
        tuple(ints[j * (dz + 1) + i] for j in range(dy + 1)) for i in range(dz + 1)
    )
    return grid


def _monomial_rows(F: TruncatedSeries, dz: int, dy: int, m_order: int):
    """Row m lists the z^m coefficient of every monomial z^i F^j, columns
    ordered j-major with i ascending inside."""
    powers = [TruncatedSeries.one(m_order)]
    base = F.truncate(m_order)
    for _ in range(dy):
        powers.append((powers[-1] * base).truncate(m_order))
    rows = []
    for m in range(m_order + 1):
        row = []
        for j in range(dy + 1):
            pj = powers[j].coeffs
            for i in range(dz + 1):
                row.append(pj[m - i] if 0 <= m - i else 0)
        rows.append(row)
    return rows


_SCREEN_PRIME = (1 << 61) - 1


def _nullspace_exists_mod_p(rows, ncols, p=_SCREEN_PRIME) -> bool:
    """Rank test after reduction mod a fixed prime.

    Full rank mod p proves full rank over the rationals, so a False here is
    conclusive; True may rarely be a false alarm, which the exact solve then
    dismisses.  Entries whose denominator the prime divides make the
    reduction meaningless, so that case conservatively returns True.
    """
    mat = []
    for row in rows:
        out = []
        for x in row:
            q = rat(x)
            den = int(q.denominator) % p
            if den == 0:
                return True
            out.append(int(q.numerator) % p * pow(den, p - 2, p) % p)
        mat.append(out)
    rank = 0
    nrows = len(mat)
    for c in range(ncols):
        pr = None
        for i in range(rank, nrows):
            if mat[i][c]:
                pr = i
                break
        if pr is None:
            continue
        mat[rank], mat[pr] = mat[pr], mat[rank]
        inv = pow(mat[rank][c], p - 2, p)
        mat[rank] = [x * inv % p for x in mat[rank]]
        piv_row = mat[rank]
        for i in range(nrows):
            if i != rank and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], piv_row)]
        rank += 1
        if rank == nrows:
            break
    return rank < ncols


def guess_annihilator(F: TruncatedSeries, dz: int, dy: int):
    """Search for P of bidegree (dz, dy) with P(z, F) = 0 through the
    guessing order (dz+1)(dy+1)+10.  Returns None when only the zero
    polynomial fits."""
    if dz < 0 or dy < 1:
        raise PreconditionViolated("need dz >= 0 and dy >= 1")
    m_order = (dz + 1) * (dy + 1) + 10
    if F.order < m_order:
        raise InsufficientOrder(
            "series known to order %d, guessing needs %d" % (F.order, m_order)
        )
    ncols = (dz + 1) * (dy + 1)
    rows = _monomial_rows(F, dz, dy, m_order)
    if not _nullspace_exists_mod_p(rows, ncols):
        return None
    vec = _nullspace_vector(rows, ncols)
    if vec is None:
        return None
    grid = _normalize_grid(vec, dz, dy)
    return AnnihilatorCandidate(dz=dz, dy=dy, coeffs=grid, verified_order=m_order)


def evaluate_annihilator(cand: AnnihilatorCandidate, F: TruncatedSeries) -> TruncatedSeries:
    """P(z, F) as a truncated series at F's order."""
    order = F.order
    acc = TruncatedSeries.zero(order)
    for j in range(cand.dy, -1, -1):
        zpoly = TruncatedSeries([cand.coeffs[i][j] for i in range(cand.dz + 1)], order)
        acc = (acc * F).truncate(order) + zpoly
    return acc


def verify_annihilator(cand: AnnihilatorCandidate, F: TruncatedSeries, order: int) -> bool:
    """Does P(z, F) vanish through z^order?"""
    if F.order < order:
        raise InsufficientOrder(
            "series known to order %d, verification wants %d" % (F.order, order)
        )
    residual = evaluate_annihilator(cand, F.truncate(order))
    return residual.valuation() is None


def find_annihilator(provider, max_dz: int, max_dy: int):
    """Smallest-bidegree verified certificate, deepening y-degree first.

    provider(order) must return the series known through that order.  Every
    candidate is re-verified at twice its guessing order before being
    returned, and the stored verified_order reflects the larger check.
    Returns None when the budget is exhausted.
    """
    for dy in range(1, max_dy + 1):
        for dz in range(0, max_dz + 1):
            m_order = (dz + 1) * (dy + 1) + 10
            cand = guess_annihilator(provider(m_order), dz, dy)
            if cand is None:
                continue
            check = 2 * m_order
            if not verify_annihilator(cand, provider(check), check):
                continue
            return AnnihilatorCandidate(
                dz=cand.dz, dy=cand.dy, coeffs=cand.coeffs, verified_order=check
            )
    return None


def counts_series_provider(bnd: Boundary, shape: StepShape | None = None, sigma=None):
    """Provider for the full count generating function, from the recursion."""

    def provider(order: int) -> TruncatedSeries:
        return TruncatedSeries(counts_for(bnd, order, shape, sigma), order)

    return provider


def section_series_provider(
    bnd: Boundary, j: int, shape: StepShape | None = None, sigma=None
):
    """Provider for section j: counts with index r + qk + j as a series in q."""
    k = bnd.height
    r = bnd.prefix_len
    if not 0 <= j < k:
        raise PreconditionViolated("section index out of range")

    def provider(order: int) -> TruncatedSeries:
        counts = counts_for(bnd, r + k * order + j, shape, sigma)
        return TruncatedSeries([counts[r + k * q + j] for q in range(order + 1)], order)

    return provider
