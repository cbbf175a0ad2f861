"""Ground-truth enumeration by dynamic programming.

These counters walk the actual path lattice cell by cell and know nothing
about recursions or generating functions; the fast routes are tested against
them.  Paths use unit east and north steps plus an optional (a, b) diagonal
carrying weight sigma, start at (0, 0), end at (s_n - 1, n), and must keep
every point at height band i strictly left of s_i.
"""
from __future__ import annotations

import itertools
import math

from .boundary import Boundary, StepShape, slope_condition
from .errors import (
    PreconditionViolated,
    SlopeConditionViolated,
    TooLarge,
    UnsupportedShape,
)
from .rings import SigmaPoly, rat


def count_lp_table(bnd: Boundary, n_max: int) -> list[int]:
    """Lattice path counts for n = 0..n_max, by prefix-sum DP.

    A path to (s_n - 1, n) is the non-decreasing sequence of its east
    positions x_0 <= ... <= x_{n-1} with x_i < s_i.
    """
    if n_max < 0:
        raise PreconditionViolated("n must be non-negative")
    out = [1]
    if n_max == 0:
        return out
    width = bnd.term(n_max - 1)
    row = [1 if v < bnd.term(0) else 0 for v in range(width)]
    out.append(sum(row))
    for i in range(1, n_max):
        si = bnd.term(i)
        acc = 0
        nxt = [0] * width
        for v in range(width):
            acc += row[v]
            if v < si:
                nxt[v] = acc
        row = nxt
        out.append(sum(row))
    return out


def count_lp_dp(bnd: Boundary, n: int) -> int:
    return count_lp_table(bnd, n)[n]


def count_rect_lattice(x: int, n: int) -> int:
    """Lattice paths from (0,0) to (x-1, n) in the plain x-wide rectangle."""
    if x < 1:
        raise PreconditionViolated("rectangle width must be positive")
    if n < 0:
        raise PreconditionViolated("n must be non-negative")
    row = [1] * x
    for _ in range(n):
        acc = 0
        for v in range(x):
            acc += row[v]
            row[v] = acc
    return row[x - 1]


def _sigma_weight(sigma):
    if sigma is None:
        return SigmaPoly.variable()
    return rat(sigma)


def count_rect_ab(shape: StepShape, x: int, n: int, sigma=None):
    """Weighted (a,b)-path count to (x-1, n) in the plain rectangle.

    Returns a SigmaPoly for symbolic sigma (the default), else an exact
    rational.  The diagonal contributes one factor sigma per use.
    """
    a, b = shape
    if b < 1:
        raise UnsupportedShape("diagonal step must rise (b >= 1)")
    if x < 1 or n < 0:
        raise PreconditionViolated("need x >= 1 and n >= 0")
    w = _sigma_weight(sigma)
    grid = [[0] * (n + 1) for _ in range(x)]
    grid[0][0] = 1
    for v in range(n + 1):
        for u in range(x):
            cell = grid[u][v]
            if u > 0:
                cell = cell + grid[u - 1][v]
            if v > 0:
                cell = cell + grid[u][v - 1]
            if v >= b and u >= a:
                cell = cell + w * grid[u - a][v - b]
            grid[u][v] = cell
    return grid[x - 1][n]


def _diagonal_ok(bnd: Boundary, u: int, v: int, a: int, b: int) -> bool:
    """May a diagonal leave (u, v)?  Chord must stay strictly left at each band."""
    for i in range(v, v + b):
        if u * b + a * (i - v) >= bnd.term(i) * b:
            return False
    return True


def count_sp_table(bnd: Boundary, shape: StepShape, n_max: int, sigma=None) -> list:
    """Boundary-constrained weighted (a,b)-path counts for n = 0..n_max."""
    a, b = shape
    if b < 1:
        raise UnsupportedShape("diagonal step must rise (b >= 1)")
    check = slope_condition(bnd, shape)
    if not check:
        raise SlopeConditionViolated(
            "boundary admits a crossing diagonal chord at height %d" % check.counterexample,
            index=check.counterexample,
        )
    if n_max < 0:
        raise PreconditionViolated("n must be non-negative")
    w = _sigma_weight(sigma)
    width = bnd.term(n_max)
    grid = [[0] * (n_max + 1) for _ in range(width)]
    grid[0][0] = 1
    for v in range(n_max + 1):
        for u in range(width):
            cell = grid[u][v]
            if u > 0:
                cell = cell + grid[u - 1][v]
            if v > 0 and u < bnd.term(v - 1):
                cell = cell + grid[u][v - 1]
            if v >= b and u >= a and _diagonal_ok(bnd, u - a, v - b, a, b):
                cell = cell + w * grid[u - a][v - b]
            grid[u][v] = cell
    return [grid[bnd.term(m) - 1][m] for m in range(n_max + 1)]


def count_sp_dp(bnd: Boundary, shape: StepShape, n: int, sigma=None):
    return count_sp_table(bnd, shape, n, sigma)[n]


def count_parking_bf(bnd: Boundary, n: int) -> int:
    """Parking-style count: sequences in [0, s_{n-1})^n whose sorted version
    satisfies x_(i) < s_i.

    Enumerates sorted multisets and weights each by its number of
    rearrangements; the condition only depends on the multiset.  Guarded by
    the raw search-space bound s_{n-1}^n <= 10^8.
    """
    if n < 0:
        raise PreconditionViolated("n must be non-negative")
    if n == 0:
        return 1
    top = bnd.term(n - 1)
    if top ** n > 10 ** 8:
        raise TooLarge("raw search space s_{n-1}^n exceeds 10^8")
    total = 0
    fact_n = math.factorial(n)
    for combo in itertools.combinations_with_replacement(range(top), n):
        if all(combo[i] < bnd.term(i) for i in range(n)):
            weight = fact_n
            run = 1
            for i in range(1, n):
                if combo[i] == combo[i - 1]:
                    run += 1
                else:
                    weight //= math.factorial(run)
                    run = 1
            weight //= math.factorial(run)
            total += weight
    return total


def decomposition_check(bnd: Boundary, x: int, n: int, shape: StepShape | None = None) -> bool:
    """Verify the rectangle-splitting identity against the DP counters.

    Every rectangle path splits at the last height where it still respects
    the boundary: count_rect(x, n) must equal
    sum_m count_path(m) * count_rect(x - s_m, n - m), for x > s_n.
    """
    if x <= bnd.term(n):
        raise PreconditionViolated("rectangle must be wider than the boundary: x > s_n")
    if shape is None:
        lhs = count_rect_lattice(x, n)
        paths = count_lp_table(bnd, n)
        rhs = sum(
            paths[m] * count_rect_lattice(x - bnd.term(m), n - m) for m in range(n + 1)
        )
    else:
        lhs = count_rect_ab(shape, x, n)
        paths = count_sp_table(bnd, shape, n)
        rhs = sum(
            (paths[m] * count_rect_ab(shape, x - bnd.term(m), n - m) for m in range(n + 1)),
            SigmaPoly(),
        )
    return lhs == rhs
