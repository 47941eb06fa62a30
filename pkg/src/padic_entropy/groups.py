"""Finite-rank locally compact abelian p-groups and their block endomorphisms.

A group of finite p-rank splits as Z_p^{n1} x Q_p^{n2} x Z(p^inf)^{n3} x F
with F a finite p-group, and a continuous endomorphism is a 4x4 grid of
blocks between the components.  Seven of the sixteen blocks are forced to be
zero because no nonzero continuous homomorphism exists between the component
pairs; the remaining blocks carry integrality/compatibility constraints.

Prüfer elements are represented by their canonical rational representative in
[0, 1) with a p-power denominator, taken modulo the p-integral rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .errors import ParseError, ValidationError
from .linalg import Matrix
from .newton import yuzvinski_entropy
from .padic import (
    EntropyValue,
    ensure_prime,
    format_rational,
    is_p_integral,
    reduce_mod_p_power,
)

#: Component tags, in the fixed order used for block indexing.
COMPONENTS = ("zp", "qp", "pr", "fin")

#: Blocks with no nonzero continuous homomorphism, with the reason why.
FORCED_ZERO_BLOCKS: dict[tuple[str, str], str] = {
    ("zp", "qp"): "no continuous hom Q_p -> Z_p: the image of a divisible group "
    "is divisible and Z_p has no nonzero divisible subgroup",
    ("zp", "pr"): "no hom Z(p^inf) -> Z_p: a divisible image inside the reduced "
    "group Z_p is trivial",
    ("zp", "fin"): "no hom from a finite p-group into the torsion-free group Z_p",
    ("qp", "pr"): "no hom Z(p^inf) -> Q_p: a torsion image in a torsion-free "
    "group is trivial",
    ("qp", "fin"): "no hom from a finite group into the torsion-free group Q_p",
    ("fin", "qp"): "no hom Q_p -> finite: a divisible image in a finite group "
    "is trivial",
    ("fin", "pr"): "no hom Z(p^inf) -> finite: a divisible image in a finite "
    "group is trivial",
}


class EntropyClass(str, Enum):
    """Classification of a group by the entropy values its endomorphisms attain."""

    E0 = "E0"
    E_FINITE_NOT_E0 = "EFiniteNotE0"


@dataclass(frozen=True)
class FiniteRankPGroup:
    """Z_p^{n1} x Q_p^{n2} x Z(p^inf)^{n3} x (+) Z(p^{k_i})."""

    p: int
    n1: int = 0
    n2: int = 0
    n3: int = 0
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        ensure_prime(self.p)
        for name in ("n1", "n2", "n3"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative")
        object.__setattr__(self, "torsion_orders", tuple(self.torsion_orders))
        if any(k < 1 for k in self.torsion_orders):
            raise ValidationError("torsion orders must be positive exponents")

    @property
    def n4(self) -> int:
        return len(self.torsion_orders)

    @property
    def rank_p(self) -> int:
        return self.n1 + self.n2 + self.n3 + self.n4

    @property
    def zp_rank(self) -> int:
        """rk_{Z_p}: the rank of the torsion-free part."""
        return self.n1 + self.n2

    @property
    def p_rank(self) -> int:
        """r_p: the dimension of the p-socle."""
        return self.n3 + self.n4

    def component_dim(self, tag: str) -> int:
        return {"zp": self.n1, "qp": self.n2, "pr": self.n3, "fin": self.n4}[tag]

    def dual(self) -> "FiniteRankPGroup":
        """Pontryagin dual: swaps the Z_p and Pruefer exponents."""
        return FiniteRankPGroup(self.p, self.n3, self.n2, self.n1, self.torsion_orders)

    def classify(self) -> EntropyClass:
        """E0 exactly when there is no Q_p factor; always finite entropy."""
        return EntropyClass.E0 if self.n2 == 0 else EntropyClass.E_FINITE_NOT_E0

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n1": self.n1,
            "n2": self.n2,
            "n3": self.n3,
            "torsion": list(self.torsion_orders),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FiniteRankPGroup":
        if not isinstance(data, Mapping):
            raise ParseError("group must be an object")
        unknown = set(data) - {"p", "n1", "n2", "n3", "torsion"}
        if unknown:
            raise ParseError(f"unknown group fields: {sorted(unknown)}")
        if "p" not in data:
            raise ParseError("group is missing the prime 'p'")
        counts = {}
        for name in ("n1", "n2", "n3"):
            value = data.get(name, 0)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ParseError(f"{name} must be a non-negative integer")
            counts[name] = value
        torsion = data.get("torsion", [])
        if not isinstance(torsion, list) or any(
            isinstance(k, bool) or not isinstance(k, int) or k < 1 for k in torsion
        ):
            raise ParseError("torsion must be a list of positive integers")
        return cls(ensure_prime(data["p"]), counts["n1"], counts["n2"], counts["n3"], tuple(torsion))

    def __repr__(self) -> str:
        return (
            f"FiniteRankPGroup(p={self.p}, Z_p^{self.n1} x Q_p^{self.n2} x "
            f"Pruefer^{self.n3} x {list(self.torsion_orders)})"
        )


def _block_key(target: str, source: str) -> str:
    return f"{target}<-{source}"


def _parse_block_key(key: str) -> tuple[str, str]:
    parts = key.split("<-")
    if len(parts) != 2 or parts[0] not in COMPONENTS or parts[1] not in COMPONENTS:
        raise ParseError(f"unknown block key {key!r} (expected 'target<-source')")
    return parts[0], parts[1]


class BlockEndomorphism:
    """A continuous endomorphism as a grid of component blocks; omitted = zero.

    Construction checks shapes and canonicalizes representatives (Prüfer rows
    modulo the p-integral rationals, finite rows modulo the target order when
    the entries are p-integral).  Semantic constraints are reported by
    :meth:`validate`.
    """

    __slots__ = ("group", "blocks")

    def __init__(self, group: FiniteRankPGroup, blocks: Mapping[tuple[str, str], Matrix]):
        self.group = group
        clean: dict[tuple[str, str], Matrix] = {}
        for (target, source), matrix in blocks.items():
            if target not in COMPONENTS or source not in COMPONENTS:
                raise ParseError(f"unknown block ({target}, {source})")
            shape = (group.component_dim(target), group.component_dim(source))
            if (matrix.nrows, matrix.ncols) != shape:
                raise ValidationError(
                    f"block {_block_key(target, source)} must be {shape[0]}x{shape[1]}, "
                    f"got {matrix.nrows}x{matrix.ncols}"
                )
            if 0 in shape:
                continue
            matrix = self._canonicalize_block(target, source, matrix)
            clean[(target, source)] = matrix
        self.blocks = clean

    def _canonicalize_block(self, target: str, source: str, matrix: Matrix) -> Matrix:
        p = self.group.p
        if target == "pr" and source in ("zp", "pr", "fin"):
            if source == "pr":
                return matrix  # multiplier entries, not classes; checked in validate()
            return Matrix(
                [[reduce_mod_p_power(x, 0, p) for x in row] for row in matrix.rows]
            )
        if target == "fin":
            orders = self.group.torsion_orders
            return Matrix(
                [
                    [
                        reduce_mod_p_power(x, orders[i], p) if is_p_integral(x, p) else x
                        for x in row
                    ]
                    for i, row in enumerate(matrix.rows)
                ]
            )
        return matrix

    def block(self, target: str, source: str) -> Matrix | None:
        return self.blocks.get((target, source))

    def validate(self) -> list[str]:
        """All hom-constraint violations, empty when the endomorphism is valid."""
        p = self.group.p
        violations: list[str] = []
        for (target, source), matrix in self.blocks.items():
            key = _block_key(target, source)
            if (target, source) in FORCED_ZERO_BLOCKS:
                if any(x != 0 for row in matrix.rows for x in row):
                    violations.append(
                        f"block {key} must vanish: {FORCED_ZERO_BLOCKS[(target, source)]}"
                    )
                continue
            if (target, source) in (("zp", "zp"), ("pr", "pr")):
                for i, row in enumerate(matrix.rows):
                    for j, x in enumerate(row):
                        if not is_p_integral(x, p):
                            violations.append(
                                f"block {key} entry ({i},{j}) = {format_rational(x)} "
                                f"is not p-integral: multiplication must preserve Z_p"
                            )
            elif target == "fin":
                orders = self.group.torsion_orders
                for i, row in enumerate(matrix.rows):
                    for j, x in enumerate(row):
                        if not is_p_integral(x, p):
                            violations.append(
                                f"block {key} entry ({i},{j}) = {format_rational(x)} "
                                f"is not p-integral: residues mod p^{orders[i]} required"
                            )
                        elif source == "fin":
                            required = max(0, orders[i] - self.group.torsion_orders[j])
                            if x % (p**required) != 0:
                                violations.append(
                                    f"block {key} entry ({i},{j}) = {format_rational(x)} "
                                    f"must be divisible by p^{required} to be a hom "
                                    f"Z(p^{self.group.torsion_orders[j]}) -> Z(p^{orders[i]})"
                                )
            elif (target, source) == ("pr", "fin"):
                for i, row in enumerate(matrix.rows):
                    for j, x in enumerate(row):
                        order = self.group.torsion_orders[j]
                        if Fraction(x).denominator > p**order:
                            violations.append(
                                f"block {key} entry ({i},{j}) = {format_rational(x)} "
                                f"has order exceeding p^{order}, the order of the source"
                            )
        return violations

    def ensure_valid(self):
        violations = self.validate()
        if violations:
            raise ValidationError(
                f"invalid endomorphism ({len(violations)} violation(s))", violations
            )

    def apply(self, element: "MixedElement") -> "MixedElement":
        """Block-matrix action; Prüfer rows land in [0,1), finite rows mod p^{k_i}."""
        self.ensure_valid()
        if element.group != self.group:
            raise ValidationError("element does not belong to this endomorphism's group")
        g = self.group
        parts: dict[str, list[Fraction]] = {
            "zp": list(element.zp),
            "qp": list(element.qp),
            "pr": list(element.pr),
            "fin": [Fraction(x) for x in element.fin],
        }
        out: dict[str, list[Fraction]] = {}
        for target in COMPONENTS:
            dim = g.component_dim(target)
            acc = [Fraction(0)] * dim
            for source in COMPONENTS:
                matrix = self.blocks.get((target, source))
                if matrix is None:
                    continue
                for i in range(dim):
                    acc[i] += sum(
                        (matrix.rows[i][j] * x for j, x in enumerate(parts[source])),
                        Fraction(0),
                    )
            out[target] = acc
        return MixedElement(
            g,
            zp=out["zp"],
            qp=out["qp"],
            pr=out["pr"],
            fin=out["fin"],
        )

    def reduce_to_divisible_quotient(self) -> Matrix:
        """The matrix of the induced map on d(G/t(G)) ~ Q_p^{n2}.

        Killing the torsion part and then the Z_p part leaves exactly the
        Qp<-Qp block, and the entropy of the original endomorphism equals the
        entropy of this matrix.
        """
        self.ensure_valid()
        n2 = self.group.n2
        block = self.blocks.get(("qp", "qp"))
        if block is None:
            return Matrix([[0] * n2 for _ in range(n2)]) if n2 else Matrix([])
        return block

    def entropy(self) -> EntropyValue:
        """Exact topological entropy; always finite for finite-rank groups."""
        return yuzvinski_entropy(self.reduce_to_divisible_quotient(), self.group.p)

    def torsion_free_quotient_matrix(self) -> Matrix:
        """The induced map on G/t(G) ~ Z_p^{n1} x Q_p^{n2}, as a matrix on Q_p^{n1+n2}.

        Block lower triangular [[Zp<-Zp, 0], [Qp<-Zp, Qp<-Qp]]; used by the
        cotrajectory oracle as the independent computation path.
        """
        self.ensure_valid()
        n1, n2 = self.group.n1, self.group.n2
        azz = self.blocks.get(("zp", "zp"))
        aqz = self.blocks.get(("qp", "zp"))
        aqq = self.blocks.get(("qp", "qp"))

        def entry(i: int, j: int) -> Fraction:
            if i < n1 and j < n1:
                return azz.rows[i][j] if azz else Fraction(0)
            if i < n1:
                return Fraction(0)
            if j < n1:
                return aqz.rows[i - n1][j] if aqz else Fraction(0)
            return aqq.rows[i - n1][j - n1] if aqq else Fraction(0)

        n = n1 + n2
        return Matrix([[entry(i, j) for j in range(n)] for i in range(n)]) if n else Matrix([])

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "blocks": {
                _block_key(t, s): m.to_json() for (t, s), m in sorted(self.blocks.items())
            },
        }

    @classmethod
    def from_json(cls, group: FiniteRankPGroup, blocks_data: Mapping) -> "BlockEndomorphism":
        if not isinstance(blocks_data, Mapping):
            raise ParseError("endomorphism blocks must be an object keyed 'target<-source'")
        blocks: dict[tuple[str, str], Matrix] = {}
        for key, rows in blocks_data.items():
            target, source = _parse_block_key(key)
            blocks[(target, source)] = Matrix.from_json(rows)
        return cls(group, blocks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BlockEndomorphism)
            and self.group == other.group
            and self.blocks == other.blocks
        )

    def __repr__(self) -> str:
        keys = ", ".join(_block_key(t, s) for t, s in sorted(self.blocks))
        return f"BlockEndomorphism({self.group!r}, blocks=[{keys}])"


@dataclass(frozen=True)
class MixedElement:
    """An element of a finite-rank p-group, componentwise.

    Prüfer coordinates are stored as canonical representatives in [0,1) with
    p-power denominators; finite coordinates as residues mod p^{k_i}.
    """

    group: FiniteRankPGroup
    zp: tuple[Fraction, ...] = field(default=())
    qp: tuple[Fraction, ...] = field(default=())
    pr: tuple[Fraction, ...] = field(default=())
    fin: tuple[int, ...] = field(default=())

    def __post_init__(self):
        g = self.group
        p = g.p
        zp = tuple(Fraction(x) for x in self.zp)
        qp = tuple(Fraction(x) for x in self.qp)
        pr = tuple(reduce_mod_p_power(Fraction(x), 0, p) for x in self.pr)
        fin = tuple(
            int(reduce_mod_p_power(Fraction(x), g.torsion_orders[i], p))
            for i, x in enumerate(self.fin)
        )
        if (len(zp), len(qp), len(pr), len(fin)) != (g.n1, g.n2, g.n3, g.n4):
            raise ValidationError("element component dimensions do not match the group")
        if any(not is_p_integral(x, p) for x in zp):
            raise ValidationError("Z_p coordinates must be p-integral")
        object.__setattr__(self, "zp", zp)
        object.__setattr__(self, "qp", qp)
        object.__setattr__(self, "pr", pr)
        object.__setattr__(self, "fin", fin)

    def __add__(self, other: "MixedElement") -> "MixedElement":
        if self.group != other.group:
            raise ValidationError("cannot add elements of different groups")
        return MixedElement(
            self.group,
            zp=tuple(a + b for a, b in zip(self.zp, other.zp)),
            qp=tuple(a + b for a, b in zip(self.qp, other.qp)),
            pr=tuple(a + b for a, b in zip(self.pr, other.pr)),
            fin=tuple(a + b for a, b in zip(self.fin, other.fin)),
        )

    def __neg__(self) -> "MixedElement":
        return MixedElement(
            self.group,
            zp=tuple(-a for a in self.zp),
            qp=tuple(-a for a in self.qp),
            pr=tuple(-a for a in self.pr),
            fin=tuple(-a for a in self.fin),
        )


def rank_p(group: FiniteRankPGroup) -> int:
    return group.rank_p


def dual_group(group: FiniteRankPGroup) -> FiniteRankPGroup:
    return group.dual()


def classify(group: FiniteRankPGroup) -> EntropyClass:
    return group.classify()
