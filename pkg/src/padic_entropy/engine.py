"""Brute-force oracles: cotrajectory entropy, Möller-formula scale, minimizing
search, and the addition-theorem checker for linear maps on Q_p^n.

These oracles compute entropy and scale straight from their definitions as
limits of index growth rates, independently of the Newton-polygon closed form;
agreement of the two paths is the package's core verification story.  Limits
are detected as eventual constancy of integer increments over a window, under
a step cap; the oracles refuse to answer rather than extrapolate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import StabilizationError, ValidationError
from .linalg import (
    Lattice,
    Matrix,
    hstack,
    integral_preimage_lattice,
    vstack,
)
from .newton import yuzvinski_entropy
from .padic import EntropyValue, ensure_prime, vp

DEFAULT_WINDOW = 5
DEFAULT_CAP = 40


@dataclass(frozen=True)
class LimitDiagnostics:
    """Audit trail of a limit-detection run.

    ``increments[n-1]`` is the integer exponent step between the n-th and
    (n+1)-th index; ``stabilized_at`` is the 1-based position where the final
    constant window begins, or None if the cap was hit first.  ``method``
    names the index sequence whose increments were tracked.
    """

    increments: tuple[int, ...]
    stabilized_at: int | None
    window: int
    cap: int
    method: str = "cotrajectory"

    def to_json(self) -> dict:
        return {
            "increments": list(self.increments),
            "stabilized_at": self.stabilized_at,
            "window": self.window,
            "cap": self.cap,
            "method": self.method,
        }


def detect_stabilization(
    exponent_at: Callable[[int], int],
    window: int,
    cap: int,
    what: str,
) -> tuple[int, LimitDiagnostics]:
    """Detect eventual constancy of increments of the integer sequence e_n.

    ``exponent_at(n)`` must return e_n for n = 1, 2, ...; returns the
    stabilized increment together with the diagnostics, or raises
    StabilizationError when the cap is exhausted.
    """
    if window < 1:
        raise ValidationError("window must be at least 1")
    if cap < window + 1:
        raise ValidationError("cap must exceed the window")
    increments: list[int] = []
    previous = exponent_at(1)
    for n in range(1, cap):
        current = exponent_at(n + 1)
        increments.append(current - previous)
        previous = current
        if len(increments) >= window and len(set(increments[-window:])) == 1:
            diagnostics = LimitDiagnostics(
                tuple(increments), len(increments) - window + 1, window, cap, what
            )
            return increments[-1], diagnostics
    diagnostics = LimitDiagnostics(tuple(increments), None, window, cap, what)
    raise StabilizationError(
        f"{what} did not stabilize within cap {cap} (window {window})", diagnostics
    )


def cotrajectory(matrix: Matrix, base: Lattice, steps: int) -> Lattice:
    """The n-th cotrajectory {x : A^j x in U for j = 0..n-1}.

    Computed as the integral-preimage lattice of the stacked constraint matrix
    (B^-1; B^-1 A; ...; B^-1 A^{n-1}); the identity block keeps the stack at
    full column rank even for singular A.
    """
    if steps < 1:
        raise ValidationError("cotrajectory needs at least one step")
    if not matrix.is_square or matrix.nrows != base.dim:
        raise ValidationError("matrix dimension does not match the base lattice")
    binv = base.basis_inverse()
    layers = []
    power = Matrix.identity(base.dim)
    for _ in range(steps):
        layers.append(binv * power)
        power = power * matrix
    return integral_preimage_lattice(base.p, vstack(*layers))


def htop_oracle(
    matrix: Matrix,
    p: int,
    window: int = DEFAULT_WINDOW,
    cap: int = DEFAULT_CAP,
    base: Lattice | None = None,
) -> tuple[EntropyValue, LimitDiagnostics]:
    """Topological entropy from the definition: the growth rate of [U : C_n].

    Runs the cotrajectories of U = Z^n (one base lattice suffices: rescaling U
    by p^k rescales every cotrajectory by p^k and leaves the indices unchanged)
    and returns the stabilized per-step exponent d as d*log(p).  A different
    base may be supplied to probe the antitonicity of H_top in the base.
    """
    p = ensure_prime(p)
    if not matrix.is_square:
        raise ValidationError("entropy oracle requires a square matrix")
    dim = matrix.nrows
    if dim == 0:
        return EntropyValue.zero(), LimitDiagnostics((0,) * window, 1, window, cap)
    if base is None:
        base = Lattice.standard(p, dim)
    if base.p != p or base.dim != dim:
        raise ValidationError("base lattice does not match the matrix and prime")
    binv = base.basis_inverse()
    cotraj = [base]

    def exponent_at(n: int) -> int:
        while len(cotraj) < n:
            # C_{n+1} = U intersect A^{-1}(C_n)
            current = cotraj[-1]
            nxt = integral_preimage_lattice(
                p, vstack(binv, current.basis_inverse() * matrix)
            )
            cotraj.append(nxt)
        return cotraj[n - 1].det_exponent - base.det_exponent

    d, diagnostics = detect_stabilization(
        exponent_at, window, cap, "cotrajectory"
    )
    if any(step < 0 for step in diagnostics.increments):
        raise AssertionError("cotrajectory indices decreased; this is a bug")
    return EntropyValue({p: d}), diagnostics


def moeller_scale_oracle(
    matrix: Matrix,
    p: int,
    base: Lattice | None = None,
    window: int = DEFAULT_WINDOW,
    cap: int = DEFAULT_CAP,
) -> tuple[int, LimitDiagnostics]:
    """The scale via Möller's limit formula s = lim |(U + A^n U)/U|^(1/n).

    The per-step exponents e_n = log_p[U + A^n U : U] usually have eventually
    constant increments d, and the scale is p^d.  A may be singular: the image
    generators A^n B may drop rank, but summing with U restores full rank
    before canonicalization.

    When the eigenvalue ratios are p-adic units the e_n oscillate forever and
    the increments never settle (the limit still exists because the n-th root
    flattens bounded oscillation).  For that case there is a fallback with
    provable termination: along the chain V_0 = U, V_{n+1} = U + A(V_n), the
    map induced by A surjects V_{n+1}/V_n onto V_{n+2}/V_{n+1}, so the
    increments log_p[V_{n+1} : V_n] are non-increasing non-negative integers
    and stabilize at log_p of the scale.
    """
    p = ensure_prime(p)
    if not matrix.is_square:
        raise ValidationError("scale oracle requires a square matrix")
    dim = matrix.nrows
    if base is None:
        base = Lattice.standard(p, dim)
    if base.p != p or base.dim != dim:
        raise ValidationError("base lattice does not match the matrix and prime")
    if dim == 0:
        return 1, LimitDiagnostics((0,) * window, 1, window, cap, "moeller-formula")
    powers = [Matrix.identity(dim)]

    def exponent_at(n: int) -> int:
        while len(powers) <= n:
            powers.append(powers[-1] * matrix)
        summed = Lattice(p, hstack(base.basis, powers[n] * base.basis))
        return base.det_exponent - summed.det_exponent

    try:
        d, diagnostics = detect_stabilization(
            exponent_at, window, cap, "moeller-formula"
        )
    except StabilizationError:
        chain = [base]

        def hull_exponent_at(n: int) -> int:
            while len(chain) < n:
                grown = Lattice(p, hstack(base.basis, matrix * chain[-1].basis))
                chain.append(grown)
            return base.det_exponent - chain[n - 1].det_exponent

        d, diagnostics = detect_stabilization(
            hull_exponent_at, window, cap, "invariant-hull-chain"
        )
    if d < 0:
        raise AssertionError("scale increments stabilized at a negative value")
    return p**d, diagnostics


def min_scale_search(
    matrix: Matrix,
    p: int,
    k_range: tuple[int, int] = (-3, 3),
) -> tuple[int, Lattice]:
    """Smallest [A(U) : A(U) n U] over diagonal p-power rescalings of Z^n.

    A bound-and-witness tool: the true scale is <= the returned index, with
    equality checked against the Möller oracle in the test suite.  Requires A
    invertible so that A(U) is a lattice and the index is finite.
    """
    p = ensure_prime(p)
    if not matrix.is_square:
        raise ValidationError("scale search requires a square matrix")
    dim = matrix.nrows
    det = matrix.det() if dim else Fraction(1)
    if dim and det == 0:
        raise ValidationError("scale search requires an invertible matrix")
    lo, hi = k_range
    if lo > hi:
        raise ValidationError("empty exponent range")
    if dim == 0:
        return 1, Lattice.standard(p, 0)
    inverse = matrix.inverse()
    det_exponent = vp(det, p)
    best_index = None
    witness_exponents = None
    for exponents in itertools.product(range(lo, hi + 1), repeat=dim):
        # A(U) has basis A*D and det exponent vp(det A) + sum(k); the meet
        # A(U) n U is the integral preimage of the stacked [D^-1 A^-1; D^-1].
        scaled_inverse = [
            [x * Fraction(p) ** (-k) for x in row]
            for k, row in zip(exponents, inverse.rows)
        ]
        scaled_identity = [
            [Fraction(int(i == j)) * Fraction(p) ** (-k) for j in range(dim)]
            for i, k in enumerate(exponents)
        ]
        meet = integral_preimage_lattice(p, Matrix(scaled_inverse + scaled_identity))
        index = p ** (meet.det_exponent - det_exponent - sum(exponents))
        if best_index is None or index < best_index:
            best_index, witness_exponents = index, exponents
    return best_index, Lattice.from_diagonal_exponents(p, witness_exponents)


@dataclass(frozen=True)
class AdditionTheoremReport:
    """Both-path entropies of a block lower-triangular map and its two blocks."""

    total_formula: EntropyValue
    total_oracle: EntropyValue
    part1_formula: EntropyValue
    part1_oracle: EntropyValue
    part2_formula: EntropyValue
    part2_oracle: EntropyValue

    @property
    def additive_formula(self) -> bool:
        return self.total_formula == self.part1_formula + self.part2_formula

    @property
    def additive_oracle(self) -> bool:
        return self.total_oracle == self.part1_oracle + self.part2_oracle

    @property
    def paths_agree(self) -> bool:
        return (
            self.total_formula == self.total_oracle
            and self.part1_formula == self.part1_oracle
            and self.part2_formula == self.part2_oracle
        )

    @property
    def ok(self) -> bool:
        return self.additive_formula and self.additive_oracle and self.paths_agree

    def to_json(self) -> dict:
        return {
            "total": {
                "formula": self.total_formula.to_json(),
                "oracle": self.total_oracle.to_json(),
            },
            "part1": {
                "formula": self.part1_formula.to_json(),
                "oracle": self.part1_oracle.to_json(),
            },
            "part2": {
                "formula": self.part2_formula.to_json(),
                "oracle": self.part2_oracle.to_json(),
            },
            "additive_formula": self.additive_formula,
            "additive_oracle": self.additive_oracle,
            "paths_agree": self.paths_agree,
            "ok": self.ok,
        }


def assemble_block_triangular(a1: Matrix, b: Matrix, a2: Matrix) -> Matrix:
    """[[A1, 0], [B, A2]] with A1 l x l, A2 m x m, B m x l."""
    if not a1.is_square or not a2.is_square:
        raise ValidationError("diagonal blocks must be square")
    l, m = a1.nrows, a2.nrows
    if l and m and (b.nrows, b.ncols) != (m, l):
        raise ValidationError(f"off-diagonal block must be {m}x{l}")

    def entry(i: int, j: int) -> Fraction:
        if i < l and j < l:
            return a1.rows[i][j]
        if i < l:
            return Fraction(0)
        if j < l:
            return b.rows[i - l][j]
        return a2.rows[i - l][j - l]

    n = l + m
    return Matrix([[entry(i, j) for j in range(n)] for i in range(n)])


def check_addition_theorem(
    a1: Matrix,
    b: Matrix,
    a2: Matrix,
    p: int,
    window: int = DEFAULT_WINDOW,
    cap: int = DEFAULT_CAP,
) -> AdditionTheoremReport:
    """Check h(A) = h(A1) + h(A2) for A = [[A1,0],[B,A2]], by both paths.

    A block triangular matrix has the same eigenvalues as its diagonal blocks
    together, so a violation always indicates an implementation bug.
    """
    p = ensure_prime(p)
    total = assemble_block_triangular(a1, b, a2)
    return AdditionTheoremReport(
        total_formula=yuzvinski_entropy(total, p),
        total_oracle=htop_oracle(total, p, window, cap)[0],
        part1_formula=yuzvinski_entropy(a1, p),
        part1_oracle=htop_oracle(a1, p, window, cap)[0],
        part2_formula=yuzvinski_entropy(a2, p),
        part2_oracle=htop_oracle(a2, p, window, cap)[0],
    )
