"""Ultimately periodic right boundaries and step shapes.

A boundary is the integer sequence s_0 <= s_1 <= ... that paths must stay
strictly left of.  It is stored as a finite prefix plus a repeating block of
offsets: with prefix (a_0..a_{r-1}), period block (b_0..b_{k-1}), width
l = b_{k-1} and p = a_{r-1} (or 0 for an empty prefix),

    s_i        = a_i                    for i < r
    s_{r+qk+j} = p + b_j + q*l          for q >= 0, 0 <= j < k.

Construction canonicalizes, so boundaries describing the same term sequence
compare equal.  Prefix entries are positive; period entries are offsets and
may be zero (a constant boundary c is prefix [c], period [0]).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError
from .rings import rat


class StepShape(NamedTuple):
    """Diagonal step (a, b): a to the right, b up, alongside unit E and N."""

    a: int
    b: int


def _validate_raw(prefix, period):
    prefix = [int(x) for x in prefix]
    period = [int(x) for x in period]
    if not period:
        raise DomainError("period block must contain at least one entry")
    for x in prefix:
        if x < 1:
            raise DomainError("prefix terms must be positive integers")
    for x, y in zip(prefix, prefix[1:]):
        if y < x:
            raise DomainError("prefix terms must be non-decreasing")
    for x in period:
        if x < 0:
            raise DomainError("period offsets must be non-negative integers")
    for x, y in zip(period, period[1:]):
        if y < x:
            raise DomainError("period offsets must be non-decreasing")
    if not prefix and period[0] < 1:
        raise DomainError("with an empty prefix the first period offset must be positive")
    return prefix, period


def _raw_term(prefix, period, n):
    r = len(prefix)
    if n < r:
        return prefix[n]
    p = prefix[-1] if prefix else 0
    k = len(period)
    q, j = divmod(n - r, k)
    return p + period[j] + q * period[-1]


def _canonical(prefix, period):
    r_raw, k_raw = len(prefix), len(period)
    need = r_raw + 2 * k_raw + 1
    terms = [_raw_term(prefix, period, n) for n in range(need + 1)]
    diffs = [terms[n + 1] - terms[n] for n in range(need)]

    k = k_raw
    for d in range(1, k_raw + 1):
        if k_raw % d:
            continue
        if all(diffs[n] == diffs[n + d] for n in range(r_raw, r_raw + k_raw)):
            k = d
            break
    width = sum(diffs[r_raw : r_raw + k])

    n0 = r_raw
    while n0 > 0 and diffs[n0 - 1] == diffs[n0 - 1 + k]:
        n0 -= 1
    # A prefix of length r regenerates the terms iff the diffs are k-periodic
    # from r on AND the block's last offset equals the width, which for r >= 1
    # needs the periodicity relation at r - 1 as well; minimality of n0 rules
    # out r = n0 when n0 >= 1.
    if n0 == 0:
        r = 0 if terms[k - 1] == width else 1
    else:
        r = n0 + 1

    new_prefix = tuple(terms[:r])
    p = new_prefix[-1] if new_prefix else 0
    new_period = tuple(terms[r + j] - p for j in range(k))
    return new_prefix, new_period


class Boundary:
    """Canonical ultimately periodic boundary."""

    __slots__ = ("prefix", "period")

    def __init__(self, prefix=(), period=(1,)):
        raw_prefix, raw_period = _validate_raw(prefix, period)
        self.prefix, self.period = _canonical(raw_prefix, raw_period)

    @property
    def prefix_len(self) -> int:
        return len(self.prefix)

    @property
    def height(self) -> int:
        return len(self.period)

    @property
    def width(self) -> int:
        return self.period[-1]

    @property
    def offset(self) -> int:
        return self.prefix[-1] if self.prefix else 0

    def term(self, n: int) -> int:
        if n < 0:
            raise ValueError("boundary terms are indexed from 0")
        return _raw_term(self.prefix, self.period, n)

    def terms(self, count: int) -> list[int]:
        return [self.term(n) for n in range(count)]

    def to_json_dict(self) -> dict:
        return {"prefix": list(self.prefix), "period": list(self.period)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Boundary":
        return cls(data.get("prefix", []), data.get("period", []))

    def __eq__(self, other):
        if not isinstance(other, Boundary):
            return NotImplemented
        return self.prefix == other.prefix and self.period == other.period

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.prefix, self.period))

    def __repr__(self):
        return "Boundary(prefix=%r, period=%r)" % (list(self.prefix), list(self.period))


def make_tennis(k: int, l: int) -> Boundary:
    """Boundary 1, l+1, ..., l+1 (k copies), 2l+1, ... for the tennis ball flow."""
    if k < 1 or l < 1:
        raise DomainError("tennis boundary needs positive block height and width")
    return Boundary([1], [l] * k)


def make_arithmetic(c: int, d: int) -> Boundary:
    """Boundary with term(i) = c + i*d exactly (d = 0 gives the constant boundary)."""
    if c < 1:
        raise DomainError("arithmetic boundary needs a positive starting term")
    if d < 0:
        raise DomainError("arithmetic boundary needs a non-negative difference")
    return Boundary([c], [d])


def make_staircase(gamma) -> Boundary:
    """Boundary ceil(i/gamma) + 1 for a positive rational slope gamma."""
    g = rat(gamma)
    if g <= 0:
        raise DomainError("staircase slope must be positive")
    num = int(g.numerator)
    den = int(g.denominator)
    count = num + 1
    terms = [-((-i * den) // num) + 1 for i in range(count + 1)]
    if terms[num - 1] == den:
        return Boundary([], terms[:num])
    return Boundary([terms[0]], [terms[1 + j] - terms[0] for j in range(num)])


@dataclass(frozen=True)
class SlopeCheck:
    ok: bool
    counterexample: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def slope_condition(bnd: Boundary, shape: StepShape | None) -> SlopeCheck:
    """Check that no diagonal chord can sneak past the boundary.

    Requires s_{j+i} * b > (s_j - 1) * b + i * a for i = 1..b at every base
    height j.  The check runs over the finite window j < r + 2k + b, after
    which the inequalities repeat with the period.  Conventions: no shape
    (pure lattice) and (0, 0) hold trivially; (a, 0) with a > 0 never holds.
    """
    if shape is None:
        return SlopeCheck(True)
    a, b = shape
    if a < 0 or b < 0:
        raise DomainError("step shape components must be non-negative")
    if b == 0:
        return SlopeCheck(a == 0, None if a == 0 else 0)
    window = bnd.prefix_len + 2 * bnd.height + b
    for j in range(window):
        sj = bnd.term(j)
        for i in range(1, b + 1):
            if bnd.term(j + i) * b <= (sj - 1) * b + i * a:
                return SlopeCheck(False, j)
    return SlopeCheck(True)
