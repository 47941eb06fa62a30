"""Newton polygons, root valuation multisets, and the closed-form entropy/scale.

The p-adic Yuzvinski formula needs only the p-adic norms of the eigenvalues of
a matrix; those norms are read off the Newton polygon of the characteristic
polynomial, so no field extension of Q_p is ever constructed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .linalg import Matrix, MonicPolynomial
from .padic import INFINITY, EntropyValue, ensure_prime, format_rational, vp


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points (i, vp(a_i)) of a monic polynomial.

    ``segments`` lists (slope, horizontal length) with strictly increasing
    slopes; roots equal to zero are not part of the hull and are tracked by
    ``zero_root_multiplicity``.
    """

    segments: tuple[tuple[Fraction, int], ...]
    zero_root_multiplicity: int
    degree: int

    def to_json(self) -> dict:
        return {
            "segments": [
                {"slope": format_rational(s), "length": length}
                for s, length in self.segments
            ],
            "zero_root_multiplicity": self.zero_root_multiplicity,
            "degree": self.degree,
        }


@dataclass(frozen=True)
class RootValuationMultiset:
    """Multiset of p-adic valuations of the roots, zero roots at +infinity.

    Entries are (valuation, multiplicity) sorted by valuation; multiplicities
    sum to the polynomial degree.
    """

    entries: tuple[tuple[Fraction | float, int], ...]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.entries)

    def finite_entries(self) -> list[tuple[Fraction, int]]:
        return [(v, m) for v, m in self.entries if v != INFINITY]

    def to_json(self) -> list[dict]:
        return [
            {
                "valuation": "infinity" if v == INFINITY else format_rational(v),
                "multiplicity": m,
            }
            for v, m in self.entries
        ]


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Lower convex hull of points sorted by abscissa (monotone chain)."""
    hull: list[tuple[int, int]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # pop the middle point if it lies on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(f: MonicPolynomial, p: int) -> NewtonPolygon:
    """The Newton polygon of a monic polynomial at p."""
    p = ensure_prime(p)
    n = f.degree
    points = [
        (i, vp(f.coefficient(i), p)) for i in range(n + 1) if f.coefficient(i) != 0
    ]
    zero_mult = points[0][0]  # smallest index with nonzero coefficient
    hull = _lower_hull(points)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return NewtonPolygon(tuple(segments), zero_mult, n)


def root_valuations(f: MonicPolynomial, p: int) -> RootValuationMultiset:
    """Valuations of the roots of f in an algebraic closure of Q_p.

    A polygon segment of slope s and horizontal length l yields l roots of
    valuation -s; zero roots appear with valuation +infinity.
    """
    polygon = newton_polygon(f, p)
    counts: dict[Fraction, int] = {}
    for slope, length in polygon.segments:
        counts[-slope] = counts.get(-slope, 0) + length
    entries: list[tuple[Fraction | float, int]] = sorted(counts.items())
    if polygon.zero_root_multiplicity:
        entries.append((INFINITY, polygon.zero_root_multiplicity))
    return RootValuationMultiset(tuple(entries))


def polynomial_entropy_exponent(f: MonicPolynomial, p: int) -> int:
    """sum of -v over root valuations v < 0, counted with multiplicity.

    Always a non-negative integer: hull vertices are integer points, so the
    total rise over the positive-slope segments is an integer.
    """
    total = Fraction(0)
    for v, m in root_valuations(f, p).finite_entries():
        if v < 0:
            total += -v * m
    if total.denominator != 1:
        raise AssertionError(f"non-integral entropy exponent {total} for {f!r}")
    return int(total)


def yuzvinski_entropy(matrix: Matrix, p: int) -> EntropyValue:
    """Closed-form topological entropy of a rational matrix acting on Q_p^n.

    Equals sum of log|lambda|_p over the eigenvalues with p-adic norm > 1,
    computed through the Newton polygon of the characteristic polynomial.
    """
    p = ensure_prime(p)
    exponent = polynomial_entropy_exponent(matrix.charpoly(), p)
    return EntropyValue({p: exponent})


def yuzvinski_scale(matrix: Matrix, p: int) -> int:
    """Closed-form scale: the product of the eigenvalue norms > 1.

    The logarithm of this value is exactly ``yuzvinski_entropy``.
    """
    p = ensure_prime(p)
    return p ** polynomial_entropy_exponent(matrix.charpoly(), p)


_TERM_RE = re.compile(
    r"""(?P<sign>[+-]?)
        (?P<coeff>\(?\d+(?:/\d+)?\)?)?
        (?:\*?(?P<var>[Xx])(?:\^(?P<exp>\d+))?)?""",
    re.VERBOSE,
)


def parse_monic_polynomial(text: str) -> MonicPolynomial:
    """Parse strings like 'X^2-10/3X+1' or 'X^3 + (1/2)*X - 5/7'.

    The polynomial must be monic; powers may appear in any order but at most
    once each.
    """
    compact = text.replace(" ", "")
    if not compact:
        raise ParseError("empty polynomial")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(compact):
        match = _TERM_RE.match(compact, pos)
        if not match or match.end() == pos:
            raise ParseError(f"cannot parse polynomial at '...{compact[pos:]}'")
        coeff_text = match.group("coeff")
        var = match.group("var")
        if coeff_text is None and var is None:
            raise ParseError(f"cannot parse polynomial at '...{compact[pos:]}'")
        try:
            coeff = Fraction(coeff_text.strip("()")) if coeff_text else Fraction(1)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in coefficient '{coeff_text}'") from None
        if match.group("sign") == "-":
            coeff = -coeff
        if var is None:
            power = 0
        elif match.group("exp") is None:
            power = 1
        else:
            power = int(match.group("exp"))
        if power in coeffs:
            raise ParseError(f"repeated power X^{power} in polynomial")
        coeffs[power] = coeff
        pos = match.end()
    degree = max(coeffs)
    if coeffs[degree] != 1:
        raise ParseError(
            f"polynomial is not monic (leading coefficient {coeffs[degree]})"
        )
    return MonicPolynomial(
        tuple(coeffs.get(i, Fraction(0)) for i in range(degree))
    )
