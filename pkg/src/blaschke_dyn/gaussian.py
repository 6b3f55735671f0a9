"""Exact arithmetic in the Gaussian integers Z[i] and the field Q(i).

Gaussian integers are plain ``(re, im)`` tuples of Python ints.  A
:class:`GaussianRational` is kept in lowest terms with its denominator
normalised to the associate whose argument lies in [0, pi/2), so equal
numbers have identical representations and hash alike.
"""

import math
import re
from fractions import Fraction

from .errors import DomainError

ZERO = (0, 0)
ONE = (1, 0)
I_UNIT = (0, 1)
UNITS = ((1, 0), (0, 1), (-1, 0), (0, -1))


# ---------------------------------------------------------------------------
# Gaussian integers
# ---------------------------------------------------------------------------

def g_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def g_sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def g_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def g_neg(a):
    return (-a[0], -a[1])


def g_conj(a):
    return (a[0], -a[1])


def g_norm(a):
    return a[0] * a[0] + a[1] * a[1]


def g_is_zero(a):
    return a[0] == 0 and a[1] == 0


def _round_div(x, n):
    # nearest integer to x/n for n > 0, ties toward +infinity
    return (2 * x + n) // (2 * n)


def g_divmod(a, b):
    """Euclidean division a = q b + r with q rounded to the nearest lattice point.

    The remainder satisfies N(r) <= N(b)/2.
    """
    n = g_norm(b)
    if n == 0:
        raise ZeroDivisionError("Gaussian division by zero")
    num = g_mul(a, g_conj(b))
    q = (_round_div(num[0], n), _round_div(num[1], n))
    return q, g_sub(a, g_mul(q, b))


def g_exact_div(a, b):
    """a / b when b divides a; raises otherwise."""
    q, r = g_divmod(a, b)
    if not g_is_zero(r):
        raise ArithmeticError("not an exact Gaussian division")
    return q


def g_gcd(a, b):
    """Euclidean gcd, normalised to the canonical associate."""
    # pull out the rational-integer content first (cheap, C-level gcd)
    c = math.gcd(a[0], a[1], b[0], b[1])
    if c == 0:
        return ZERO
    if c > 1:
        a = (a[0] // c, a[1] // c)
        b = (b[0] // c, b[1] // c)
    while not g_is_zero(b):
        _, r = g_divmod(a, b)
        a, b = b, r
    return g_mul(canonical_associate(a), (c, 0))


def canonical_associate(a):
    """The associate u*a (u a unit) with argument in [0, pi/2); zero stays zero."""
    x, y = a
    if x > 0 and y >= 0:
        return a
    if x <= 0 and y > 0:
        return (y, -x)        # multiply by -i
    if x < 0 and y <= 0:
        return (-x, -y)       # multiply by -1
    if x >= 0 and y < 0:
        return (-y, x)        # multiply by i
    return a


def unit_to_canonical(a):
    """The unit u with u*a = canonical_associate(a)."""
    x, y = a
    if x > 0 and y >= 0:
        return ONE
    if x <= 0 and y > 0:
        return (0, -1)
    if x < 0 and y <= 0:
        return (-1, 0)
    if x >= 0 and y < 0:
        return I_UNIT
    return ONE


def g_bits(a):
    return max(abs(a[0]).bit_length(), abs(a[1]).bit_length())


def g_pow(a, k):
    out = ONE
    base = a
    while k:
        if k & 1:
            out = g_mul(out, base)
        base = g_mul(base, base)
        k >>= 1
    return out


# ---------------------------------------------------------------------------
# Q(i) and the point at infinity
# ---------------------------------------------------------------------------

class GaussianRational:
    """An element of Q(i), or the point at infinity of P^1(Q(i)).

    Stored as numerator/denominator Gaussian integers in lowest terms.
    Infinity is the single representative 1/0.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE, _reduced=False):
        num = _as_gint(num)
        den = _as_gint(den)
        if not _reduced:
            num, den = _normalise(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # construction helpers
    @classmethod
    def from_parts(cls, re_part, im_part=0):
        """From real and imaginary parts given as int, Fraction or 'p/q' strings."""
        a = Fraction(re_part)
        b = Fraction(im_part)
        den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return cls((a.numerator * (den // a.denominator), b.numerator * (den // b.denominator)),
                   (den, 0))

    @classmethod
    def infinity(cls):
        return cls(ONE, ZERO, _reduced=True)

    @classmethod
    def parse(cls, text):
        return parse_gaussian(text)

    # predicates and parts
    @property
    def is_infinite(self):
        return g_is_zero(self.den)

    @property
    def is_zero(self):
        return g_is_zero(self.num)

    def parts(self):
        """(real, imaginary) as Fractions."""
        if self.is_infinite:
            raise DomainError("the point at infinity has no real/imaginary parts")
        n = g_norm(self.den)
        p = g_mul(self.num, g_conj(self.den))
        return Fraction(p[0], n), Fraction(p[1], n)

    @property
    def real(self):
        return self.parts()[0]

    @property
    def imag(self):
        return self.parts()[1]

    def norm(self):
        """|x|^2 as an exact Fraction."""
        if self.is_infinite:
            raise DomainError("norm of infinity")
        return Fraction(g_norm(self.num), g_norm(self.den))

    def bits(self):
        return max(g_bits(self.num), g_bits(self.den))

    def conjugate(self):
        if self.is_infinite:
            return self
        return GaussianRational(g_conj(self.num), g_conj(self.den))

    # arithmetic (finite values only)
    def _check_finite(self, other):
        if self.is_infinite or other.is_infinite:
            raise DomainError("arithmetic with the point at infinity")

    def __add__(self, other):
        other = as_gaussian(other)
        self._check_finite(other)
        return GaussianRational(g_add(g_mul(self.num, other.den), g_mul(other.num, self.den)),
                                g_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        if self.is_infinite:
            return self
        return GaussianRational(g_neg(self.num), self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-as_gaussian(other))

    def __rsub__(self, other):
        return as_gaussian(other) - self

    def __mul__(self, other):
        other = as_gaussian(other)
        self._check_finite(other)
        return GaussianRational(g_mul(self.num, other.num), g_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_gaussian(other)
        self._check_finite(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(g_mul(self.num, other.den), g_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return as_gaussian(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(ONE) / (self ** (-k))
        return GaussianRational(g_pow(self.num, k), g_pow(self.den, k))

    # comparison and hashing use the canonical representation
    def __eq__(self, other):
        try:
            other = as_gaussian(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __complex__(self):
        if self.is_infinite:
            return complex(math.inf, 0.0)
        re_part, im_part = self.parts()
        return complex(float(re_part), float(im_part))

    def __repr__(self):
        return f"GaussianRational({format_gaussian(self)!r})"

    def __str__(self):
        return format_gaussian(self)


def _as_gint(v):
    if isinstance(v, tuple) and len(v) == 2:
        return (int(v[0]), int(v[1]))
    if isinstance(v, int):
        return (v, 0)
    if isinstance(v, complex) and v.real.is_integer() and v.imag.is_integer():
        return (int(v.real), int(v.imag))
    raise TypeError(f"not a Gaussian integer: {v!r}")


def _normalise(num, den):
    if g_is_zero(den):
        if g_is_zero(num):
            raise DomainError("0/0 is not a point of P^1")
        return ONE, ZERO
    if g_is_zero(num):
        return ZERO, ONE
    g = g_gcd(num, den)
    if g != ONE:
        num = g_exact_div(num, g)
        den = g_exact_div(den, g)
    u = unit_to_canonical(den)
    return g_mul(num, u), g_mul(den, u)


def as_gaussian(x):
    """Coerce ints, Fractions, Gaussian-integer tuples and strings."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a Gaussian rational")
    if isinstance(x, int):
        return GaussianRational((x, 0))
    if isinstance(x, Fraction):
        return GaussianRational.from_parts(x)
    if isinstance(x, tuple):
        return GaussianRational(x)
    if isinstance(x, str):
        return parse_gaussian(x)
    raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")


# ---------------------------------------------------------------------------
# text format  "a/b+c/d*i"
# ---------------------------------------------------------------------------

_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?i)?")


def parse_gaussian(text):
    """Parse strings such as ``1/2``, ``-3/4*i``, ``1/2+1/3*i``, ``1/2 + 1/3 i``, ``inf``."""
    s = "".join(str(text).split())
    if not s:
        raise DomainError("empty Gaussian rational")
    if s.lower() in ("inf", "infinity", "oo"):
        return GaussianRational.infinity()
    re_part = Fraction(0)
    im_part = Fraction(0)
    pos = 0
    seen = False
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise DomainError(f"cannot parse Gaussian rational {text!r}")
        if seen and not m.group(1):
            raise DomainError(f"missing sign between terms in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        value = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            if m.group(3) == "*i" and m.group(2) is None:
                raise DomainError(f"dangling '*i' in {text!r}")
            im_part += sign * value
        else:
            re_part += sign * value
        pos = m.end()
        seen = True
    return GaussianRational.from_parts(re_part, im_part)


def _fmt_fraction(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_gaussian(x):
    if x.is_infinite:
        return "inf"
    a, b = x.parts()
    if b == 0:
        return _fmt_fraction(a)
    imag = ("-" if b < 0 else "") + ("i" if abs(b) == 1 else _fmt_fraction(abs(b)) + "*i")
    if a == 0:
        return imag
    return _fmt_fraction(a) + ("+" if b > 0 else "") + imag


def naive_height(x):
    """Logarithmic Weil height on P^1(Q(i)): half the log of the larger coordinate norm."""
    x = as_gaussian(x)
    m = max(g_norm(x.num), g_norm(x.den))
    return 0.5 * math.log(m) if m > 1 else 0.0
