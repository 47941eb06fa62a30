"""The Heisenberg groups H(Z_p) and H(Q_p): arithmetic, diagonal endomorphisms,
and entropy by center/quotient splitting plus an independent box oracle.

Elements are the unitriangular matrices M(a,b;z); the center is {M(0,0;z)} and
the quotient by it is two-dimensional, so for an automorphism of diagonal type
the entropy splits as (entropy on the center) + (entropy on the quotient), both
computed by the closed form on matrices.  The oracle path instead runs the
cotrajectories of the congruence subgroups H(p^k Z_p) directly: for diagonal
endomorphisms membership constraints are coordinate-wise, so cotrajectories
are boxes and the index growth is elementary to track.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .engine import DEFAULT_CAP, DEFAULT_WINDOW, LimitDiagnostics, detect_stabilization
from .errors import ValidationError
from .groups import EntropyClass
from .linalg import Matrix
from .newton import yuzvinski_entropy
from .padic import INFINITY, EntropyValue, ensure_prime, format_rational, is_p_integral, vp


@dataclass(frozen=True)
class HeisenbergElement:
    """M(a,b;z) = [[1,a,z],[0,1,b],[0,0,1]]."""

    a: Fraction
    b: Fraction
    z: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "z", Fraction(self.z))

    @classmethod
    def identity(cls) -> "HeisenbergElement":
        return cls(Fraction(0), Fraction(0), Fraction(0))

    def __mul__(self, other: "HeisenbergElement") -> "HeisenbergElement":
        # M(a,b;z) M(a',b';z') = M(a+a', b+b'; z+z'+a b')
        return HeisenbergElement(
            self.a + other.a, self.b + other.b, self.z + other.z + self.a * other.b
        )

    def inverse(self) -> "HeisenbergElement":
        return HeisenbergElement(-self.a, -self.b, -self.z + self.a * self.b)

    def commutator(self, other: "HeisenbergElement") -> "HeisenbergElement":
        return self * other * self.inverse() * other.inverse()

    def is_central(self) -> bool:
        return self.a == 0 and self.b == 0

    def in_integral_subgroup(self, p: int) -> bool:
        """Whether the element lies in H(Z_p) (all coordinates p-integral)."""
        return all(is_p_integral(x, p) for x in (self.a, self.b, self.z))

    def __repr__(self) -> str:
        return f"M({self.a},{self.b};{self.z})"


def hmul(x: HeisenbergElement, y: HeisenbergElement) -> HeisenbergElement:
    return x * y


@dataclass(frozen=True)
class DiagonalEndo:
    """M(a,b;z) -> M(s a, t b; s t z); a homomorphism for every s, t."""

    s: Fraction
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "t", Fraction(self.t))

    def apply(self, x: HeisenbergElement) -> HeisenbergElement:
        return HeisenbergElement(self.s * x.a, self.t * x.b, self.s * self.t * x.z)

    def is_automorphism(self) -> bool:
        return self.s != 0 and self.t != 0

    def preserves_integral_subgroup(self, p: int) -> bool:
        return is_p_integral(self.s, p) and is_p_integral(self.t, p)


@dataclass(frozen=True)
class InnerAuto:
    """Conjugation by M(a0,b0;*): M(a,b;z) -> M(a, b; z + a0 b - b0 a)."""

    a0: Fraction
    b0: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a0", Fraction(self.a0))
        object.__setattr__(self, "b0", Fraction(self.b0))

    def apply(self, x: HeisenbergElement) -> HeisenbergElement:
        return HeisenbergElement(x.a, x.b, x.z + self.a0 * x.b - self.b0 * x.a)

    def coordinate_matrix(self) -> Matrix:
        """The (unipotent) matrix of the action on coordinates (a, b, z)."""
        return Matrix(
            [[1, 0, 0], [0, 1, 0], [-self.b0, self.a0, 1]]
        )


def entropy_diagonal(endo: DiagonalEndo, p: int) -> EntropyValue:
    """Entropy of a diagonal automorphism via the center/quotient splitting.

    The center contributes the entropy of multiplication by s*t on Q_p and the
    quotient that of diag(s, t) on Q_p^2.  The splitting is certified only for
    automorphisms, so zero parameters are refused; use the oracle for those.
    """
    p = ensure_prime(p)
    if not endo.is_automorphism():
        raise ValidationError(
            "center/quotient splitting requires s, t != 0; "
            "use the cotrajectory oracle for singular parameters"
        )
    center = yuzvinski_entropy(Matrix([[endo.s * endo.t]]), p)
    quotient = yuzvinski_entropy(Matrix.diagonal([endo.s, endo.t]), p)
    return center + quotient


def entropy_oracle_diagonal(
    endo: DiagonalEndo,
    p: int,
    window: int = DEFAULT_WINDOW,
    cap: int = DEFAULT_CAP,
    base_level: int = 0,
) -> tuple[EntropyValue, LimitDiagnostics]:
    """Entropy from the cotrajectories of the congruence subgroup H(p^k Z_p).

    The box H(p^k Z_p) is a subgroup only for k >= 0 (the product rule's a*b'
    term then stays at level 2k >= k).  For a diagonal endomorphism the j-th
    preimage constraint is coordinate-wise, so the n-th cotrajectory is the box
    with exponents alpha_n, beta_n, gamma_n below and the index is read off the
    exponents.
    """
    p = ensure_prime(p)
    if base_level < 0:
        raise ValidationError("H(p^k Z_p) is a subgroup only for k >= 0")
    k = base_level
    vs = vp(endo.s, p)
    vt = vp(endo.t, p)
    vst = vs + vt  # INFINITY propagates

    def box_exponent(v, n: int) -> int:
        # constraint j < n requires valuation >= k - j*v; vacuous when the
        # multiplier is 0 (its positive powers kill the coordinate)
        if v == INFINITY:
            return k
        return k + max(0, -(n - 1) * v)

    def exponent_at(n: int) -> int:
        return sum(box_exponent(v, n) - k for v in (vs, vt, vst))

    d, diagnostics = detect_stabilization(
        exponent_at, window, cap, "congruence-box"
    )
    return EntropyValue({p: d}), diagnostics


def entropy_inner(inner: InnerAuto, p: int) -> EntropyValue:
    """Entropy of an inner automorphism: zero, its coordinate matrix is unipotent."""
    return yuzvinski_entropy(inner.coordinate_matrix(), ensure_prime(p))


@dataclass(frozen=True)
class HeisenbergClassification:
    """Classification of H(R) with oracle evidence from sampled diagonal endos."""

    ring: str
    classification: EntropyClass
    evidence: tuple[tuple[Fraction, Fraction, EntropyValue], ...]
    witness: tuple[Fraction, Fraction, EntropyValue] | None

    def to_json(self) -> dict:
        def row(s, t, value):
            return {
                "s": format_rational(s),
                "t": format_rational(t),
                "entropy": value.to_json(),
            }

        return {
            "ring": self.ring,
            "classification": self.classification.value,
            "evidence": [row(*item) for item in self.evidence],
            "witness": row(*self.witness) if self.witness else None,
        }


def classify_heisenberg(
    ring: str,
    p: int,
    sample_size: int = 12,
    seed: int = 0,
) -> HeisenbergClassification:
    """The classification of H(Z_p) (E0) or H(Q_p) (finite but not E0).

    The evidence report runs the box oracle over a deterministic sample of
    diagonal endomorphisms: endomorphisms of H(Z_p) have p-integral parameters
    and all sampled entropies vanish, while H(Q_p) admits the witness
    (s, t) = (1/p, 1) with entropy 2*log(p).
    """
    p = ensure_prime(p)
    if ring not in ("zp", "qp"):
        raise ValidationError("ring must be 'zp' or 'qp'")
    rng = random.Random(seed)
    evidence = []
    for _ in range(sample_size):
        if ring == "zp":
            s = Fraction(rng.randint(-p * p, p * p))
            t = Fraction(rng.randint(-p * p, p * p))
        else:
            s = Fraction(rng.randint(-p * p, p * p), rng.choice([1, p, p * p]))
            t = Fraction(rng.randint(-p * p, p * p), rng.choice([1, p, p * p]))
        value, _ = entropy_oracle_diagonal(DiagonalEndo(s, t), p)
        evidence.append((s, t, value))
    if ring == "zp":
        return HeisenbergClassification("zp", EntropyClass.E0, tuple(evidence), None)
    witness_endo = DiagonalEndo(Fraction(1, p), Fraction(1))
    witness_value, _ = entropy_oracle_diagonal(witness_endo, p)
    return HeisenbergClassification(
        "qp",
        EntropyClass.E_FINITE_NOT_E0,
        tuple(evidence),
        (witness_endo.s, witness_endo.t, witness_value),
    )
