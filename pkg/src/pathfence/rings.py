"""Exact scalar rings: rationals, sigma-polynomials, cyclotomic numbers.

Everything here is exact. No floats anywhere; rationals are gmpy2.mpq when
available (stdlib Fraction otherwise), and both print as "p/q" or a bare
decimal integer, which is the interchange format.
"""
from __future__ import annotations

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rat


def rat(value) -> Rat:
    """Coerce an int, string ("p/q" or decimal), or rational to Rat."""
    if isinstance(value, (int, str)):
        return Rat(value)
    return Rat(value.numerator, value.denominator)


def is_integral(value) -> bool:
    if isinstance(value, int):
        return True
    return value.denominator == 1


def scalar_str(value) -> str:
    """Decimal string for integers, "p/q" for non-integer rationals."""
    if isinstance(value, int):
        return str(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "%s/%s" % (value.numerator, value.denominator)


class SigmaPoly:
    """Dense polynomial in the diagonal-step weight sigma.

    Coefficients are ints or rationals, lowest degree first, no trailing
    zeros.  The zero polynomial has an empty coefficient tuple.  Arithmetic
    accepts plain ints and rationals on either side, so code that mixes
    scalar counts with weighted counts does not need explicit lifting.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def variable(cls):
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integer(self) -> bool:
        return all(is_integral(c) for c in self.coeffs)

    def evaluate(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    __call__ = evaluate

    @staticmethod
    def _coerce(other):
        if isinstance(other, SigmaPoly):
            return other
        if isinstance(other, int) or type(other) is Rat or hasattr(other, "denominator"):
            return SigmaPoly((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return SigmaPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return SigmaPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return SigmaPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return SigmaPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, SigmaPoly):
            if scalar.degree == 0:
                scalar = scalar.coeffs[0]
            else:
                return NotImplemented
        q = rat(scalar)
        return SigmaPoly(tuple(c / q for c in self.coeffs))

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative power of a sigma-polynomial")
        result = SigmaPoly((1,))
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return len(self.coeffs) == len(o.coeffs) and all(
            x == y for x, y in zip(self.coeffs, o.coeffs)
        )

    def __ne__(self, other):
        r = self.__eq__(other)
        if r is NotImplemented:
            return r
        return not r

    def __hash__(self):
        return hash(tuple(rat(c) for c in self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "SigmaPoly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(scalar_str(c))
            elif i == 1:
                parts.append("%s*sigma" % scalar_str(c))
            else:
                parts.append("%s*sigma^%d" % (scalar_str(c), i))
        return " + ".join(parts)


def _poly_trim(cs):
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _poly_div_exact_int(num, den):
    """Divide integer polynomials exactly (lowest degree first); den monic-led."""
    num = list(num)
    den = list(den)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1]
        q, r = divmod(c, lead)
        if r != 0:
            raise ArithmeticError("non-exact polynomial division")
        out[shift] = q
        if q:
            for j, d in enumerate(den):
                num[shift + j] -= q * d
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


_CYCLO_CACHE: dict[int, tuple[int, ...]] = {}


def cyclotomic_modulus(k: int) -> tuple[int, ...]:
    """Integer coefficients of the k-th cyclotomic polynomial, lowest first.

    Built by exact division: x^k - 1 divided by the cyclotomic polynomials of
    all proper divisors of k.
    """
    if k < 1:
        raise ValueError("cyclotomic order must be a positive integer")
    if k in _CYCLO_CACHE:
        return _CYCLO_CACHE[k]
    num = [-1] + [0] * (k - 1) + [1]
    for d in range(1, k):
        if k % d == 0:
            num = _poly_div_exact_int(num, list(cyclotomic_modulus(d)))
    result = tuple(num)
    _CYCLO_CACHE[k] = result
    return result


class CycloNum:
    """Element of the rationals extended by a primitive k-th root of unity.

    Residues are stored modulo the k-th cyclotomic polynomial, as a fixed
    length-phi(k) tuple of rationals, lowest power first.  For k = 1 and
    k = 2 the field degenerates to the rationals themselves.
    """

    __slots__ = ("order", "residue")

    def __init__(self, order: int, residue):
        self.order = order
        deg = len(cyclotomic_modulus(order)) - 1
        res = [rat(c) for c in residue]
        if len(res) > deg:
            res = self._reduce(order, res)
        res += [Rat(0)] * (deg - len(res))
        self.residue = tuple(res)

    @staticmethod
    def _reduce(order: int, coeffs):
        mod = cyclotomic_modulus(order)
        deg = len(mod) - 1
        cs = list(coeffs)
        for i in range(len(cs) - 1, deg - 1, -1):
            c = cs[i]
            if c != 0:
                for j in range(deg):
                    cs[i - deg + j] -= c * mod[j]
            cs.pop()
        return cs

    @classmethod
    def from_rational(cls, order: int, value):
        return cls(order, (rat(value),))

    @classmethod
    def zeta(cls, order: int):
        return cls(order, (0, 1))

    def _coerce(self, other):
        if isinstance(other, CycloNum):
            if other.order != self.order:
                raise ValueError("mixed cyclotomic orders")
            return other
        if isinstance(other, int) or type(other) is Rat or hasattr(other, "denominator"):
            return CycloNum.from_rational(self.order, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloNum(self.order, tuple(a + b for a, b in zip(self.residue, o.residue)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.order, tuple(-a for a in self.residue))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.residue, o.residue
        out = [Rat(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return CycloNum(self.order, self._reduce(self.order, out))

    __rmul__ = __mul__

    def inverse(self):
        """Field inverse via the extended Euclidean algorithm in Q[x]."""
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        mod = [rat(c) for c in cyclotomic_modulus(self.order)]
        r0, r1 = mod, _poly_trim(list(self.residue))
        s0, s1 = [], [Rat(1)]
        while True:
            if len(r1) == 1:
                inv = 1 / r1[0]
                return CycloNum(self.order, tuple(c * inv for c in s1))
            q, rem = _poly_divmod_rat(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub_rat(s0, _poly_mul_rat(q, s1))
            if not r1:
                raise ZeroDivisionError("residue shares a factor with the modulus")

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycloNum.from_rational(self.order, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.residue[1:])

    def rational_value(self):
        if not self.is_rational:
            raise ValueError("cyclotomic number has non-rational components")
        return self.residue[0]

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.residue == o.residue

    def __ne__(self, other):
        r = self.__eq__(other)
        if r is NotImplemented:
            return r
        return not r

    def __bool__(self):
        return any(c != 0 for c in self.residue)

    def __hash__(self):
        return hash((self.order, self.residue))

    def __repr__(self):
        return "CycloNum(%d, %s)" % (self.order, list(map(scalar_str, self.residue)))


def _poly_divmod_rat(num, den):
    num = list(num)
    q = [Rat(0)] * max(len(num) - len(den) + 1, 0)
    inv_lead = 1 / den[-1]
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1] * inv_lead
        q[shift] = c
        if c != 0:
            for j, d in enumerate(den):
                num[shift + j] -= c * d
    return q, _poly_trim(num[: len(den) - 1])


def _poly_mul_rat(a, b):
    if not a or not b:
        return []
    out = [Rat(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _poly_trim(out)


def _poly_sub_rat(a, b):
    out = [Rat(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _poly_trim(out)
