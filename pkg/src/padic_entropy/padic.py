"""Exact p-adic valuations and norms on rationals, and the symbolic entropy value type.

Every scalar in this package is a :class:`fractions.Fraction`; the rationals form
a dense subfield of the p-adic numbers on which valuations are exact, so no
floating point or truncated p-adic expansion is ever needed.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ParseError

#: Marker for the valuation of zero.  This is the only place a float appears in
#: the arithmetic layer, and it never participates in exact results.
INFINITY = math.inf

#: A p-adic valuation: an integer, or INFINITY for v_p(0).
Valuation = Union[int, float]

_MILLER_RABIN_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MILLER_RABIN_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def ensure_prime(p) -> int:
    """Return ``p`` as an int after checking primality; raise ParseError otherwise."""
    if isinstance(p, bool) or not isinstance(p, int):
        raise ParseError(f"prime must be an integer, got {p!r}")
    if not is_prime(p):
        raise ParseError(f"{p} is not prime")
    return p


def parse_rational(value) -> Fraction:
    """Parse a wire-format rational: an int, or a string 'num' / 'num/den'.

    Floats are rejected outright; exactness is the whole point.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise ParseError(f"malformed rational {value!r} (expected 'num' or 'num/den')")
        return Fraction(text)
    raise ParseError(f"not a rational: {value!r} (floats are not accepted)")


def format_rational(x: Fraction) -> str:
    """Canonical 'num/den' (or 'num') rendering of a reduced fraction."""
    return str(Fraction(x))


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        v += 1
        n //= p
    return v


def vp(x, p: int) -> Valuation:
    """The p-adic valuation of a rational: the l in x = p^l * (unit at p).

    Returns INFINITY exactly when x == 0.
    """
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return _int_valuation(abs(x.numerator), p) - _int_valuation(x.denominator, p)


def pnorm(x, p: int) -> Fraction:
    """The p-adic norm |x|_p = p^(-vp(x)), with |0|_p = 0."""
    v = vp(x, p)
    if v == INFINITY:
        return Fraction(0)
    return Fraction(1, p**v) if v >= 0 else Fraction(p ** (-v))


def is_p_integral(x, p: int) -> bool:
    """Whether x lies in Z_(p), i.e. vp(x) >= 0."""
    return Fraction(x).denominator % p != 0


def reduce_mod_p_power(x: Fraction, exponent: int, p: int) -> Fraction:
    """Canonical representative of x modulo p^exponent * Z_(p), in [0, p^exponent).

    The representative is of the form m * p^v with v = vp(x) and
    0 <= m < p^(exponent - v); with exponent = 0 this is the canonical form of
    a Pruefer-group element (a p-power-denominator rational in [0, 1)).
    """
    x = Fraction(x)
    v = vp(x, p)
    if v == INFINITY or v >= exponent:
        return Fraction(0)
    span = exponent - v
    modulus = p**span
    # x = p^v * num/den with num, den prime to p; reduce the unit mod p^span.
    num = x.numerator
    den = x.denominator
    if v >= 0:
        num //= p**v
    else:
        den //= p ** (-v)
    unit_residue = num * pow(den, -1, modulus) % modulus
    return Fraction(unit_residue) * Fraction(p) ** v


class EntropyValue:
    """A finite formal sum of m_p * log(p) with non-negative integer exponents.

    The empty sum is entropy zero.  Values are exact and compare exactly;
    conversion to a decimal number of nats happens only at display time.
    Infinite entropy is unrepresentable by design: every map in scope has
    finite entropy, and code paths that cannot certify a finite value raise
    instead of returning.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = dict(terms)
        clean: dict[int, int] = {}
        for prime, exponent in items.items():
            if isinstance(exponent, bool) or not isinstance(exponent, int):
                raise ValueError(f"exponent for log({prime}) must be an integer")
            if exponent < 0:
                raise ValueError(f"negative exponent {exponent} for log({prime})")
            if exponent == 0:
                continue
            ensure_prime(prime)
            clean[prime] = exponent
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def zero(cls) -> "EntropyValue":
        return cls()

    @classmethod
    def log_p(cls, p: int, exponent: int) -> "EntropyValue":
        """exponent * log(p)."""
        return cls({p: exponent})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def exponent(self, p: int) -> int:
        return self._terms.get(p, 0)

    def __add__(self, other: "EntropyValue") -> "EntropyValue":
        if not isinstance(other, EntropyValue):
            return NotImplemented
        total = dict(self._terms)
        for prime, exponent in other._terms.items():
            total[prime] = total.get(prime, 0) + exponent
        return EntropyValue(total)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EntropyValue):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __le__(self, other: "EntropyValue") -> bool:
        """Pointwise comparison of exponents (partial order)."""
        if not isinstance(other, EntropyValue):
            return NotImplemented
        return all(m <= other.exponent(p) for p, m in self._terms.items())

    def approx_nats(self) -> float:
        """Decimal rendering sum(m_p * ln p); display only, never compared."""
        return sum(m * math.log(p) for p, m in self._terms.items())

    def to_json(self) -> dict:
        return {
            "terms": {str(p): m for p, m in self._terms.items()},
            "approx_nats": self.approx_nats(),
        }

    def render(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            (f"log({p})" if m == 1 else f"{m}*log({p})") for p, m in self._terms.items()
        )

    def __repr__(self) -> str:
        return f"EntropyValue({self.render()})"
