"""Exact rational matrix algebra and p-local lattice arithmetic.

A p-local lattice is a full-rank module over Z_(p) (rationals with denominator
prime to p) inside rational n-space; these are exactly the compact open
subgroups of Q_p^n in rational coordinates, and every index between them is a
pure power of p.  Lattices are kept in a canonical lower-triangular column
Hermite form, so equality of lattices is equality of bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError
from .padic import INFINITY, ensure_prime, format_rational, parse_rational, reduce_mod_p_power, vp


def _coerce_entry(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating-point matrix entries are not allowed")
    return Fraction(x)


class Matrix:
    """An immutable matrix with exact rational entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(_coerce_entry(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("ragged rows")
        object.__setattr__(self, "rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[0] * ncols for _ in range(nrows)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Matrix":
        if not columns:
            return cls([])
        return cls([[col[i] for col in columns] for i in range(len(columns[0]))])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[list[Fraction]]:
        return [list(self.column(j)) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix.from_columns(self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in row] for row in self.rows])

    def _check_same_shape(self, other: "Matrix"):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(
                    f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
                )
            cols = other.ncols
            return Matrix(
                [
                    [
                        sum((a * other.rows[k][j] for k, a in enumerate(row)), Fraction(0))
                        for j in range(cols)
                    ]
                    for row in self.rows
                ]
            )
        return Matrix([[a * _coerce_entry(other) for a in row] for row in self.rows])

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square:
            raise ValueError("matrix power requires a square matrix")
        if k < 0:
            raise ValueError("negative matrix powers are not supported")
        result = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def apply(self, vector: Sequence) -> tuple[Fraction, ...]:
        vec = [_coerce_entry(x) for x in vector]
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum((a * x for a, x in zip(row, vec)), Fraction(0)) for row in self.rows
        )

    def trace(self) -> Fraction:
        if not self.is_square:
            raise ValueError("trace requires a square matrix")
        return sum((self.rows[i][i] for i in range(self.nrows)), Fraction(0))

    def det(self) -> Fraction:
        """Determinant by exact Gaussian elimination."""
        if not self.is_square:
            raise ValueError("determinant requires a square matrix")
        n = self.nrows
        work = [list(row) for row in self.rows]
        sign = 1
        result = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                sign = -sign
            result *= work[col][col]
            inv = 1 / work[col][col]
            for r in range(col + 1, n):
                factor = work[r][col] * inv
                if factor:
                    work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        return sign * result

    def inverse(self) -> "Matrix":
        """Exact inverse via Gauss-Jordan; raises ValueError on singular input."""
        if not self.is_square:
            raise ValueError("inverse requires a square matrix")
        n = self.nrows
        work = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
            if pivot is None:
                raise ValueError("matrix is singular")
            work[col], work[pivot] = work[pivot], work[col]
            inv = 1 / work[col][col]
            work[col] = [a * inv for a in work[col]]
            for r in range(n):
                if r != col and work[r][col]:
                    factor = work[r][col]
                    work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        return Matrix([row[n:] for row in work])

    def charpoly(self) -> "MonicPolynomial":
        """Characteristic polynomial det(X*I - A) by the Faddeev-LeVerrier recursion.

        The only divisions are by the integers 1..n, so the computation is
        exact over the rationals.
        """
        if not self.is_square:
            raise ValueError("characteristic polynomial requires a square matrix")
        n = self.nrows
        coeffs = [Fraction(0)] * n  # a_0 .. a_{n-1}; leading coefficient is 1
        m = Matrix.identity(n)
        for k in range(1, n + 1):
            am = self * m
            c = -am.trace() / k
            coeffs[n - k] = c
            if k < n:
                m = am + Matrix.diagonal([c] * n)
        return MonicPolynomial(tuple(coeffs))

    def to_json(self) -> list[list[str]]:
        return [[format_rational(a) for a in row] for row in self.rows]

    @classmethod
    def from_json(cls, data, expected_shape: tuple[int, int] | None = None) -> "Matrix":
        from .errors import ParseError

        if not isinstance(data, list) or any(not isinstance(row, list) for row in data):
            raise ParseError("matrix must be a list of rows")
        if len({len(row) for row in data}) > 1:
            raise ParseError("matrix rows must all have the same length")
        mat = cls([[parse_rational(x) for x in row] for row in data])
        if expected_shape is not None and (mat.nrows, mat.ncols) != expected_shape:
            raise ValidationError(
                f"expected a {expected_shape[0]}x{expected_shape[1]} matrix, "
                f"got {mat.nrows}x{mat.ncols}"
            )
        return mat

    def __repr__(self) -> str:
        return f"Matrix({[[str(a) for a in row] for row in self.rows]})"


def hstack(*matrices: Matrix) -> Matrix:
    mats = [m for m in matrices if m.ncols > 0 or m.nrows > 0]
    if not mats:
        return Matrix([])
    nrows = mats[0].nrows
    if any(m.nrows != nrows for m in mats):
        raise ValueError("hstack requires equal row counts")
    return Matrix([sum((list(m.rows[i]) for m in mats), []) for i in range(nrows)])


def vstack(*matrices: Matrix) -> Matrix:
    mats = list(matrices)
    if not mats:
        return Matrix([])
    ncols = mats[0].ncols
    if any(m.ncols != ncols for m in mats):
        raise ValueError("vstack requires equal column counts")
    rows = []
    for m in mats:
        rows.extend(list(row) for row in m.rows)
    return Matrix(rows)


@dataclass(frozen=True)
class MonicPolynomial:
    """A monic polynomial X^n + a_{n-1} X^{n-1} + ... + a_0 over the rationals.

    ``coefficients`` lists a_0 .. a_{n-1}; the leading 1 is implicit.
    """

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(Fraction(c) for c in self.coefficients)
        )

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    def coefficient(self, i: int) -> Fraction:
        """a_i, including the implicit leading a_n = 1."""
        if i == self.degree:
            return Fraction(1)
        return self.coefficients[i]

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(1)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def to_string(self) -> str:
        if self.degree == 0:
            return "1"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coefficient(i)
            if c == 0:
                continue
            if i == self.degree:
                body = "X" if i == 1 else f"X^{i}"
                parts.append(body)
                continue
            sign = " - " if c < 0 else " + "
            mag = abs(c)
            if i == 0:
                term = str(mag)
            else:
                x_part = "X" if i == 1 else f"X^{i}"
                term = x_part if mag == 1 else f"{mag}*{x_part}"
            parts.append(sign + term)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"MonicPolynomial({self.to_string()})"


def companion_matrix(poly: MonicPolynomial) -> Matrix:
    """The companion matrix, whose characteristic polynomial is ``poly``."""
    n = poly.degree
    if n == 0:
        return Matrix([])
    return Matrix(
        [
            [
                -poly.coefficients[i] if j == n - 1 else Fraction(int(i == j + 1))
                for j in range(n)
            ]
            for i in range(n)
        ]
    )


def _unit_part(x: Fraction, p: int) -> Fraction:
    """x / p^vp(x); requires x != 0."""
    v = vp(x, p)
    return x / Fraction(p) ** v


class Lattice:
    """A full-rank p-local lattice in rational n-space, in canonical form.

    The basis is the lower-triangular column Hermite form over Z_(p): the
    diagonal holds pure p-powers p^{a_i}, and each off-diagonal entry in row i
    is the canonical representative of its class modulo p^{a_i} Z_(p).  Two
    lattices are equal iff their canonical bases are equal.
    """

    __slots__ = ("p", "dim", "basis", "pivot_exponents")

    def __init__(self, p: int, generators: Matrix):
        p = ensure_prime(p)
        dim = generators.nrows
        if generators.ncols < dim:
            raise ValidationError(
                f"{generators.ncols} generators cannot span dimension {dim}"
            )
        basis_cols, pivots = _column_hermite(p, generators)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "basis", Matrix.from_columns(basis_cols) if dim else Matrix([]))
        object.__setattr__(self, "pivot_exponents", tuple(pivots))

    def __setattr__(self, name, value):
        raise AttributeError("Lattice is immutable")

    @classmethod
    def standard(cls, p: int, dim: int) -> "Lattice":
        """Z^n viewed p-locally (the standard compact open subgroup)."""
        return cls(p, Matrix.identity(dim))

    @classmethod
    def from_diagonal_exponents(cls, p: int, exponents: Sequence[int]) -> "Lattice":
        """The box lattice p^{k_1} Z x ... x p^{k_n} Z."""
        return cls(p, Matrix.diagonal([Fraction(p) ** k for k in exponents]))

    @property
    def det_exponent(self) -> int:
        """vp of the basis determinant (the sum of pivot exponents)."""
        return sum(self.pivot_exponents)

    def basis_inverse(self) -> Matrix:
        return self.basis.inverse() if self.dim else Matrix([])

    def coordinates(self, vector: Sequence) -> tuple[Fraction, ...]:
        """Coordinates of a vector in the canonical basis (forward substitution)."""
        vec = [Fraction(x) for x in vector]
        if len(vec) != self.dim:
            raise ValidationError("vector dimension mismatch")
        coords: list[Fraction] = []
        for i in range(self.dim):
            residual = vec[i] - sum(
                (self.basis.rows[i][j] * coords[j] for j in range(i)), Fraction(0)
            )
            coords.append(residual / self.basis.rows[i][i])
        return tuple(coords)

    def contains_vector(self, vector: Sequence) -> bool:
        return all(
            c == 0 or vp(c, self.p) >= 0 for c in self.coordinates(vector)
        )

    def contains_lattice(self, other: "Lattice") -> bool:
        self._check_compatible(other)
        return all(
            self.contains_vector(other.basis.column(j)) for j in range(self.dim)
        )

    def _check_compatible(self, other: "Lattice"):
        if self.p != other.p:
            raise ValidationError(f"prime mismatch: {self.p} vs {other.p}")
        if self.dim != other.dim:
            raise ValidationError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Lattice)
            and self.p == other.p
            and self.dim == other.dim
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.p, self.dim, self.basis))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "dim": self.dim,
            "basis": self.basis.to_json(),
            "pivot_exponents": list(self.pivot_exponents),
        }

    def __repr__(self) -> str:
        return f"Lattice(p={self.p}, dim={self.dim}, basis={self.basis.to_json()})"


def _column_hermite(p: int, generators: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Canonical p-local column Hermite form of a full-row-rank generator matrix.

    Column operations over Z_(p) (swaps, unit scalings, adding Z_(p)-multiples)
    preserve the p-local column span.  Phase one triangularizes with pivots of
    minimal valuation; phase two normalizes pivots to pure p-powers and reduces
    each off-diagonal entry to its canonical representative mod the pivot.
    """
    dim = generators.nrows
    cols = generators.columns()
    pivots: list[int] = []
    for i in range(dim):
        best = None
        best_v = None
        for j in range(i, len(cols)):
            v = vp(cols[j][i], p)
            if v != INFINITY and (best_v is None or v < best_v):
                best, best_v = j, v
        if best is None:
            raise ValidationError(
                f"generators are rank-deficient (no pivot in row {i})"
            )
        cols[i], cols[best] = cols[best], cols[i]
        unit = _unit_part(cols[i][i], p)
        cols[i] = [x / unit for x in cols[i]]  # pivot becomes exactly p^best_v
        pivots.append(best_v)
        pivot_power = Fraction(p) ** best_v
        for j in range(i + 1, len(cols)):
            if cols[j][i] == 0:
                continue
            factor = cols[j][i] / pivot_power  # p-integral by pivot minimality
            cols[j] = [x - factor * y for x, y in zip(cols[j], cols[i])]
    cols = cols[:dim]
    # Reduce below-diagonal entries to canonical representatives, top row first;
    # reducing row i only touches rows >= i, so earlier rows stay canonical.
    for i in range(dim):
        for j in range(i):
            entry = cols[j][i]
            rep = reduce_mod_p_power(entry, pivots[i], p)
            if entry != rep:
                factor = (entry - rep) / Fraction(p) ** pivots[i]
                cols[j] = [x - factor * y for x, y in zip(cols[j], cols[i])]
    return cols, pivots


def lattice_canonicalize(p: int, generators: Matrix) -> Lattice:
    """The lattice spanned p-locally by the columns of ``generators``."""
    return Lattice(p, generators)


def lattice_index(outer: Lattice, inner: Lattice) -> int:
    """[outer : inner] for inner a sublattice of outer; always a power of p."""
    outer._check_compatible(inner)
    if not outer.contains_lattice(inner):
        raise ValidationError("index requires the second lattice to be contained in the first")
    exponent = inner.det_exponent - outer.det_exponent
    return outer.p**exponent


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    """The smallest lattice containing both summands."""
    a._check_compatible(b)
    return Lattice(a.p, hstack(a.basis, b.basis))


def lattice_intersection(a: Lattice, b: Lattice) -> Lattice:
    a._check_compatible(b)
    return integral_preimage_lattice(a.p, vstack(a.basis_inverse(), b.basis_inverse()))


def integral_preimage_lattice(p: int, constraints: Matrix) -> Lattice:
    """The lattice {x : constraints * x is p-integral in every coordinate}.

    Requires full column rank (otherwise the solution set contains a line and
    is not a lattice).  Row operations over Z_(p) preserve the solution set, so
    the constraint matrix is brought to row echelon form [T; 0] with T upper
    triangular; the answer is then the column span of T^{-1}.
    """
    p = ensure_prime(p)
    n = constraints.ncols
    if n == 0:
        return Lattice(p, Matrix([]))
    rows = [list(r) for r in constraints.rows]
    pivot_rows: list[int] = []
    used: set[int] = set()
    for col in range(n):
        best = None
        best_v = None
        for i in range(len(rows)):
            if i in used:
                continue
            v = vp(rows[i][col], p)
            if v != INFINITY and (best_v is None or v < best_v):
                best, best_v = i, v
        if best is None:
            raise ValidationError(
                f"constraint matrix is column-rank deficient (column {col})"
            )
        used.add(best)
        pivot_rows.append(best)
        pivot = rows[best][col]
        for i in range(len(rows)):
            if i in used or rows[i][col] == 0:
                continue
            factor = rows[i][col] / pivot  # p-integral by minimality of the pivot
            rows[i] = [x - factor * y for x, y in zip(rows[i], rows[best])]
    triangular = Matrix([rows[i] for i in pivot_rows])
    return Lattice(p, triangular.inverse())
