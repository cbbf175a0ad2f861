"""Truncated power series and ramified series with explicit order tracking.

Every series object knows the highest exponent whose coefficient it can
vouch for, and every operation propagates that bound conservatively.  No
operation ever reports a coefficient beyond the provable order; shortening
the requested order never changes the coefficients that remain.

Coefficients are duck typed: ints, rationals, SigmaPoly and CycloNum all
work, because the ring classes accept plain ints in their operators.
"""
from __future__ import annotations

from .errors import (
    BadConstantTerm,
    NonRationalOutput,
    NonUnitConstantTerm,
    NonzeroInnerConstant,
    PreconditionViolated,
    SingularWithinPrecision,
)
from .rings import CycloNum, Rat, SigmaPoly, rat


def _unit_inverse(c):
    """Inverse of a coefficient that must be a unit of its ring."""
    if isinstance(c, SigmaPoly):
        if c.degree != 0:
            raise NonUnitConstantTerm("sigma-polynomial of positive degree is not a unit")
        return SigmaPoly((1 / rat(c.coeffs[0]),))
    if isinstance(c, CycloNum):
        if not c:
            raise NonUnitConstantTerm("zero constant term")
        return c.inverse()
    if c == 0:
        raise NonUnitConstantTerm("zero constant term")
    return 1 / rat(c)


class TruncatedSeries:
    """Power series known through t^order, coefficients lowest first."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=None):
        cs = list(coeffs)
        if order is None:
            if not cs:
                raise ValueError("a truncated series needs at least its constant term")
            order = len(cs) - 1
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        if len(cs) < order + 1:
            cs += [0] * (order + 1 - len(cs))
        else:
            cs = cs[: order + 1]
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def constant(cls, value, order):
        return cls([value], order)

    @classmethod
    def one(cls, order):
        return cls.constant(1, order)

    @classmethod
    def zero(cls, order):
        return cls.constant(0, order)

    @classmethod
    def identity(cls, order):
        """The series t."""
        return cls([0, 1], order)

    def coefficient(self, i: int):
        if i < 0:
            return 0
        if i > self.order:
            raise ValueError("coefficient %d beyond provable order %d" % (i, self.order))
        return self.coeffs[i]

    def valuation(self):
        """Smallest known exponent with nonzero coefficient, or None."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def map_coefficients(self, fn) -> "TruncatedSeries":
        return TruncatedSeries([fn(c) for c in self.coeffs], self.order)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            cs = list(self.coeffs)
            cs[0] = cs[0] + other
            return TruncatedSeries(cs, self.order)
        n = min(self.order, other.order)
        return TruncatedSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            cs = list(self.coeffs)
            cs[0] = cs[0] - other
            return TruncatedSeries(cs, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([c * other for c in self.coeffs], self.order)
        n = min(self.order, other.order)
        out = [0] * (n + 1)
        for i, ca in enumerate(self.coeffs[: n + 1]):
            if ca == 0:
                continue
            for j in range(n + 1 - i):
                cb = other.coeffs[j]
                if cb != 0:
                    out[i + j] = out[i + j] + ca * cb
        return TruncatedSeries(out, n)

    def __rmul__(self, other):
        return TruncatedSeries([other * c for c in self.coeffs], self.order)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = TruncatedSeries.one(self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def invert(self) -> "TruncatedSeries":
        inv0 = _unit_inverse(self.coeffs[0])
        n = self.order
        out = [inv0] + [0] * n
        for m in range(1, n + 1):
            acc = 0
            for i in range(1, m + 1):
                ai = self.coeffs[i]
                if ai != 0:
                    acc = acc + ai * out[m - i]
            out[m] = -(inv0 * acc)
        return TruncatedSeries(out, n)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """Substitute inner(t) for the variable; inner must vanish at 0."""
        if inner.coeffs[0] != 0:
            raise NonzeroInnerConstant("inner series has nonzero constant term")
        v = inner.valuation()
        if v is None:
            return TruncatedSeries.constant(self.coeffs[0], inner.order)
        n = min(inner.order, (self.order + 1) * v - 1)
        acc = TruncatedSeries.constant(self.coeffs[self.order], n)
        trimmed = inner.truncate(n) if inner.order > n else inner
        for j in range(self.order - 1, -1, -1):
            acc = acc * trimmed + self.coeffs[j]
        return acc

    def sqrt(self) -> "TruncatedSeries":
        """Square root of a series with constant term exactly 1."""
        if self.coeffs[0] != 1:
            raise BadConstantTerm("square root requires constant term 1")
        half = rat(1) / 2
        n = self.order
        out = [1] + [0] * n
        for m in range(1, n + 1):
            acc = 0
            for i in range(1, m):
                acc = acc + out[i] * out[m - i]
            out[m] = (self.coeffs[m] - acc) * half
        return TruncatedSeries(out, n)

    def derivative(self) -> "TruncatedSeries":
        if self.order == 0:
            return TruncatedSeries.zero(0)
        return TruncatedSeries(
            [(i + 1) * self.coeffs[i + 1] for i in range(self.order)], self.order - 1
        )

    def shift_up(self, m: int) -> "TruncatedSeries":
        return TruncatedSeries([0] * m + list(self.coeffs), self.order + m)

    def shift_down(self, m: int) -> "TruncatedSeries":
        for i in range(m):
            if self.coeffs[i] != 0:
                raise PreconditionViolated(
                    "cannot divide by t^%d: nonzero coefficient at t^%d" % (m, i)
                )
        return TruncatedSeries(self.coeffs[m:], self.order - m)

    def matches(self, other: "TruncatedSeries", through: int | None = None) -> bool:
        n = min(self.order, other.order)
        if through is not None:
            if through > n:
                raise ValueError("comparison order exceeds provable orders")
            n = through
        return all(self.coeffs[i] == other.coeffs[i] for i in range(n + 1))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and all(
            x == y for x, y in zip(self.coeffs, other.coeffs)
        )

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return "TruncatedSeries(%r, order=%d)" % (list(self.coeffs), self.order)


class RamifiedSeries:
    """Series in u = z^(1/ramification) with a bounded pole at the origin.

    Stores coefficients for exponents -pole .. top; top is the highest
    exponent whose coefficient is guaranteed.  Exponents below -pole are
    exactly zero.
    """

    __slots__ = ("ram", "pole", "coeffs", "top")

    def __init__(self, ram: int, lo_exp: int, coeffs, top: int | None = None):
        if ram < 1:
            raise ValueError("ramification must be a positive integer")
        cs = list(coeffs)
        if top is None:
            top = lo_exp + len(cs) - 1
        if top < lo_exp - 1:
            raise ValueError("empty coefficient window")
        cs = cs[: top - lo_exp + 1]
        cs += [0] * (top - lo_exp + 1 - len(cs))
        while lo_exp < 0 and cs and cs[0] == 0:
            cs.pop(0)
            lo_exp += 1
        if lo_exp > 0:
            cs = [0] * lo_exp + cs
            lo_exp = 0
        self.ram = ram
        self.pole = -lo_exp
        self.coeffs = tuple(cs)
        self.top = top

    @classmethod
    def from_truncated(cls, ts: TruncatedSeries, ram: int) -> "RamifiedSeries":
        return cls(ram, 0, list(ts.coeffs), ts.order)

    @classmethod
    def constant(cls, ram: int, value, top: int) -> "RamifiedSeries":
        return cls(ram, 0, [value], top)

    @classmethod
    def u_power(cls, ram: int, e: int, top: int) -> "RamifiedSeries":
        if e > top:
            raise ValueError("exponent beyond requested order")
        return cls(ram, e, [1], top)

    def coefficient(self, e: int):
        if e > self.top:
            raise ValueError("coefficient u^%d beyond provable order %d" % (e, self.top))
        if e < -self.pole:
            return 0
        return self.coeffs[e + self.pole]

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i - self.pole
        return None

    def is_known_zero(self) -> bool:
        return self.valuation() is None

    def truncate_top(self, top: int) -> "RamifiedSeries":
        if top > self.top:
            raise ValueError("cannot extend a ramified series")
        return RamifiedSeries(self.ram, -self.pole, list(self.coeffs), top)

    def _check_ram(self, other: "RamifiedSeries"):
        if self.ram != other.ram:
            raise ValueError("mixed ramifications")

    def __add__(self, other):
        if not isinstance(other, RamifiedSeries):
            cs = list(self.coeffs)
            if self.pole > 0:
                cs[self.pole] = cs[self.pole] + other
                return RamifiedSeries(self.ram, -self.pole, cs, self.top)
            cs[0] = cs[0] + other
            return RamifiedSeries(self.ram, 0, cs, self.top)
        self._check_ram(other)
        lo = -max(self.pole, other.pole)
        top = min(self.top, other.top)
        out = []
        for e in range(lo, top + 1):
            a = self.coeffs[e + self.pole] if -self.pole <= e else 0
            b = other.coeffs[e + other.pole] if -other.pole <= e else 0
            out.append(a + b)
        return RamifiedSeries(self.ram, lo, out, top)

    __radd__ = __add__

    def __neg__(self):
        return RamifiedSeries(self.ram, -self.pole, [-c for c in self.coeffs], self.top)

    def __sub__(self, other):
        if not isinstance(other, RamifiedSeries):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RamifiedSeries):
            return RamifiedSeries(
                self.ram, -self.pole, [c * other for c in self.coeffs], self.top
            )
        self._check_ram(other)
        va = self.valuation()
        vb = other.valuation()
        va_eff = va if va is not None else self.top + 1
        vb_eff = vb if vb is not None else other.top + 1
        top = min(self.top + vb_eff, other.top + va_eff)
        lo = -(self.pole + other.pole)
        out = [0] * (top - lo + 1)
        for i, ca in enumerate(self.coeffs):
            if ca == 0:
                continue
            ea = i - self.pole
            for j, cb in enumerate(other.coeffs):
                if cb == 0:
                    continue
                e = ea + j - other.pole
                if e > top:
                    break
                out[e - lo] = out[e - lo] + ca * cb
        return RamifiedSeries(self.ram, lo, out, top)

    def __rmul__(self, other):
        return RamifiedSeries(
            self.ram, -self.pole, [other * c for c in self.coeffs], self.top
        )

    def invert(self) -> "RamifiedSeries":
        v = self.valuation()
        if v is None:
            raise SingularWithinPrecision(
                "inversion of a series with no detectable nonzero coefficient"
            )
        unit = self.coeffs[v + self.pole:]
        n_unit = self.top - v
        inv0 = _unit_inverse(unit[0])
        out = [inv0] + [0] * n_unit
        for m in range(1, n_unit + 1):
            acc = 0
            for i in range(1, m + 1):
                ai = unit[i]
                if ai != 0:
                    acc = acc + ai * out[m - i]
            out[m] = -(inv0 * acc)
        return RamifiedSeries(self.ram, -v, out, n_unit - v)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = RamifiedSeries.constant(self.ram, 1, self.top + max(
            (exponent - 1), 0
        ) * max(self.valuation() or 0, 0))
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, m: int) -> "RamifiedSeries":
        """Multiply by u^m (m may be negative)."""
        return RamifiedSeries(self.ram, -self.pole + m, list(self.coeffs), self.top + m)

    def twisted(self, m: int) -> "RamifiedSeries":
        """Multiply the coefficient of u^e by zeta^(m e), zeta primitive of order ram."""
        k = self.ram
        zeta = CycloNum.zeta(k)
        powers = [zeta ** j for j in range(k)]
        out = []
        for i, c in enumerate(self.coeffs):
            e = i - self.pole
            out.append(powers[(m * e) % k] * c)
        return RamifiedSeries(self.ram, -self.pole, out, self.top)

    def compose_truncated(self, outer: TruncatedSeries) -> "RamifiedSeries":
        """Evaluate outer at this series, which must have valuation >= 1."""
        if self.pole > 0 and any(c != 0 for c in self.coeffs[: self.pole]):
            raise NonzeroInnerConstant("substituted series has a pole")
        if self.pole == 0 and self.coeffs[0] != 0:
            raise NonzeroInnerConstant("substituted series has nonzero constant term")
        v = self.valuation()
        if v is None:
            return RamifiedSeries.constant(self.ram, outer.coeffs[0], self.top)
        cap = min(self.top, (outer.order + 1) * v - 1)
        inner = self.truncate_top(cap) if self.top > cap else self
        acc = RamifiedSeries.constant(self.ram, outer.coeffs[outer.order], cap)
        for j in range(outer.order - 1, -1, -1):
            acc = (acc * inner).truncate_top(cap) + outer.coeffs[j]
        return acc

    def rational_coefficients(self) -> "RamifiedSeries":
        """Collapse CycloNum coefficients that are rational to plain rationals."""
        out = []
        for c in self.coeffs:
            if isinstance(c, CycloNum):
                if not c.is_rational:
                    raise NonRationalOutput("non-rational cyclotomic component survived")
                out.append(c.rational_value())
            else:
                out.append(c)
        return RamifiedSeries(self.ram, -self.pole, out, self.top)

    def z_series(self) -> TruncatedSeries:
        """Reinterpret as a power series in z = u^ram.

        Requires every known coefficient at a negative exponent or at an
        exponent not divisible by the ramification to vanish, and every
        surviving coefficient to be rational.
        """
        k = self.ram
        for i, c in enumerate(self.coeffs):
            e = i - self.pole
            if (e < 0 or e % k != 0) and c != 0:
                raise NonRationalOutput(
                    "coefficient at u^%d (ramification %d) did not cancel" % (e, k)
                )
        if self.top < 0:
            raise SingularWithinPrecision("not a single full z coefficient is known")
        order_z = self.top // k
        out = []
        for q in range(order_z + 1):
            c = self.coefficient(q * k)
            if isinstance(c, CycloNum):
                if not c.is_rational:
                    raise NonRationalOutput("non-rational cyclotomic component survived")
                c = c.rational_value()
            out.append(c)
        return TruncatedSeries(out, order_z)

    def __eq__(self, other):
        if not isinstance(other, RamifiedSeries):
            return NotImplemented
        if self.ram != other.ram:
            return False
        lo = -max(self.pole, other.pole)
        top = min(self.top, other.top)
        if self.top != other.top:
            return False
        for e in range(lo, top + 1):
            a = self.coeffs[e + self.pole] if -self.pole <= e else 0
            b = other.coeffs[e + other.pole] if -other.pole <= e else 0
            if not (a == b):
                return False
        return True

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __repr__(self):
        return "RamifiedSeries(ram=%d, lo=%d, %r, top=%d)" % (
            self.ram,
            -self.pole,
            list(self.coeffs),
            self.top,
        )


def linear_solve_series(matrix, rhs):
    """Solve M x = rhs over ramified series, tracking provable orders.

    Forward elimination is division free (cross multiplication with the
    minimal-valuation pivot); the only divisions happen during back
    substitution.  Raises SingularWithinPrecision when no pivot with a
    detectable nonzero coefficient exists in some column.
    """
    n = len(matrix)
    rows = [list(matrix[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        best = None
        best_val = None
        for r in range(col, n):
            v = rows[r][col].valuation()
            if v is not None and (best_val is None or v < best_val):
                best, best_val = r, v
        if best is None:
            raise SingularWithinPrecision(
                "no usable pivot in column %d within the working order" % col
            )
        rows[col], rows[best] = rows[best], rows[col]
        pivot = rows[col][col]
        for r in range(col + 1, n):
            f = rows[r][col]
            if f.is_known_zero():
                continue
            rows[r] = [
                pivot * rows[r][j] - f * rows[col][j] for j in range(n + 1)
            ]
    solution = [None] * n
    for i in range(n - 1, -1, -1):
        acc = rows[i][n]
        for j in range(i + 1, n):
            acc = acc - rows[i][j] * solution[j]
        solution[i] = acc * rows[i][i].invert()
    return solution
