"""Exact arithmetic over the dyadic rationals.

Dyadic is the coordinate type for everything in this package: breakpoints,
values, labelling positions, rotation offsets.  All arithmetic is exact and
no routine anywhere rounds or touches floating point.  A separate exact
rational type (fractions.Fraction) appears only inside rotation-number
fixed-point solving, where fixed points of affine pieces with slope != 1
can fall outside the dyadics.
"""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = ["Dyadic", "ZERO", "ONE", "HALF"]

_PAT_POW = re.compile(r"^(-?\d+)/2\^(\d+)$")
_PAT_INT = re.compile(r"^(-?\d+)$")
_PAT_DEC = re.compile(r"^(-?)(\d+)\.(\d+)$")


class Dyadic:
    """num / 2**exp with arbitrary-precision num and machine-int exp >= 0.

    Normalized so that exp == 0 or num is odd; the representation of a
    value is unique, so equality and hashing are structural.  Instances are
    immutable by convention and safe to share between threads.
    """

    __slots__ = ("num", "exp")

    def __init__(self, num: int = 0, exp: int = 0):
        if not isinstance(num, int) or not isinstance(exp, int):
            raise TypeError(f"Dyadic takes integers, got {num!r}, {exp!r}")
        if exp < 0:
            raise ValueError("exponent must be non-negative")
        if num == 0:
            exp = 0
        elif exp:
            low = (num & -num).bit_length() - 1
            k = low if low < exp else exp
            if k:
                num >>= k
                exp -= k
        self.num = num
        self.exp = exp

    # -- construction ----------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse 'p/2^e', a plain integer, or a decimal dyadic literal.

        Decimal literals are accepted only when the value is exactly
        dyadic ('0.3125' works, '0.1' is rejected).
        """
        s = text.strip()
        m = _PAT_POW.match(s)
        if m:
            return cls(int(m.group(1)), int(m.group(2)))
        m = _PAT_INT.match(s)
        if m:
            return cls(int(m.group(1)))
        m = _PAT_DEC.match(s)
        if m:
            sign, whole, frac = m.groups()
            e = len(frac)
            num = int(whole) * 10**e + int(frac)
            # p/10^e is dyadic iff 5^e divides p
            five = 5**e
            if num % five:
                raise ValueError(f"{text!r} is not a dyadic rational")
            num //= five
            if sign == "-":
                num = -num
            return cls(num, e)
        raise ValueError(f"cannot parse dyadic literal {text!r}")

    @classmethod
    def from_fraction(cls, fr: Fraction) -> "Dyadic":
        den = fr.denominator
        if den & (den - 1):
            raise ValueError(f"{fr} is not dyadic")
        return cls(fr.numerator, den.bit_length() - 1)

    # -- conversions -----------------------------------------------------

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __str__(self) -> str:
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/2^{self.exp}"

    def __repr__(self) -> str:
        return f"Dyadic({self.num}, {self.exp})"

    def decimal_str(self) -> str:
        """Exact decimal expansion (dyadics always terminate in base 10)."""
        if self.exp == 0:
            return str(self.num)
        digits = abs(self.num) * 5**self.exp
        s = str(digits).rjust(self.exp + 1, "0")
        whole, frac = s[: -self.exp], s[-self.exp :]
        sign = "-" if self.num < 0 else ""
        return f"{sign}{whole}.{frac}"

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _co(x):
        if isinstance(x, Dyadic):
            return x
        if isinstance(x, int):
            return Dyadic(x)
        return None

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        e = self.exp if self.exp >= o.exp else o.exp
        return Dyadic((self.num << (e - self.exp)) + (o.num << (e - o.exp)), e)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        e = self.exp if self.exp >= o.exp else o.exp
        return Dyadic((self.num << (e - self.exp)) - (o.num << (e - o.exp)), e)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return Dyadic(self.num * o.num, self.exp + o.exp)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def __abs__(self):
        return Dyadic(abs(self.num), self.exp)

    def __bool__(self):
        return self.num != 0

    def div_exact(self, other) -> "Dyadic":
        """Exact quotient; raises ValueError when the result is not dyadic."""
        o = self._co(other)
        if o is None or o.num == 0:
            raise ValueError("division by zero or non-dyadic operand")
        # (a/2^e) / (b/2^f) = a * 2^f / (b * 2^e); normalized b has odd part |b|
        num, den = self.num, o.num
        if den < 0:
            num, den = -num, -den
        odd = den >> ((den & -den).bit_length() - 1)
        if odd != 1 and num % odd:
            raise ValueError(f"{self} / {o} is not a dyadic rational")
        num //= odd
        shift = (den // odd).bit_length() - 1
        # value = num * 2^(o.exp - self.exp - shift)
        e = self.exp + shift - o.exp
        if e >= 0:
            return Dyadic(num, e)
        return Dyadic(num << -e, 0)

    def mul_pow2(self, k: int) -> "Dyadic":
        """Multiply by 2**k (k may be negative)."""
        if k >= 0:
            e = self.exp - k
            if e >= 0:
                return Dyadic(self.num, e)
            return Dyadic(self.num << -e, 0)
        return Dyadic(self.num, self.exp - k)

    def half(self) -> "Dyadic":
        return Dyadic(self.num, self.exp + 1)

    # -- order -----------------------------------------------------------

    def _cmp(self, o: "Dyadic") -> int:
        e = self.exp if self.exp >= o.exp else o.exp
        a = self.num << (e - self.exp)
        b = o.num << (e - o.exp)
        return (a > b) - (a < b)

    def __eq__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.exp == o.exp

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) < 0

    def __le__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) <= 0

    def __gt__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) > 0

    def __ge__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) >= 0

    def __hash__(self):
        return hash((self.num, self.exp))

    # -- integer structure -------------------------------------------------

    def floor(self) -> int:
        """Greatest integer <= value (arithmetic shift floors negatives)."""
        return self.num >> self.exp

    def ceil(self) -> int:
        return -((-self.num) >> self.exp)

    def is_integer(self) -> bool:
        return self.exp == 0

    def is_half_integer(self) -> bool:
        """True when the value lies on the half-integer lattice (1/2)Z."""
        return self.exp <= 1

    def floor_div(self, k: int) -> int:
        """floor(self / k) for a positive integer k."""
        if k <= 0:
            raise ValueError("positive divisor required")
        return self.num // (k << self.exp)

    def log2(self):
        """k when the value equals 2**k, else None.  Requires a positive value."""
        if self.num <= 0:
            raise ValueError("log2 requires a positive value")
        if self.exp:
            return -self.exp if self.num == 1 else None
        n = self.num
        if n & (n - 1):
            return None
        return n.bit_length() - 1


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)
