"""Shared corpus generators: seeded random matrices, groups, endomorphisms."""

from __future__ import annotations

import random
from fractions import Fraction

from padic_entropy import BlockEndomorphism, FiniteRankPGroup, Matrix


def random_fraction(rng: random.Random, bound: int, den_bound: int | None = None) -> Fraction:
    """A fraction with |numerator| <= bound and 1 <= denominator <= den_bound."""
    den_bound = den_bound or bound
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den_bound))


def random_matrix(rng: random.Random, n: int, bound: int) -> Matrix:
    return Matrix([[random_fraction(rng, bound) for _ in range(n)] for _ in range(n)])


def random_p_integral_fraction(rng: random.Random, p: int, bound: int) -> Fraction:
    while True:
        den = rng.randint(1, bound)
        if den % p != 0:
            return Fraction(rng.randint(-bound, bound), den)


def random_p_integral_matrix(rng: random.Random, n: int, p: int, bound: int) -> Matrix:
    return Matrix(
        [[random_p_integral_fraction(rng, p, bound) for _ in range(n)] for _ in range(n)]
    )


def random_invertible_matrix(rng: random.Random, n: int, bound: int) -> Matrix:
    while True:
        m = random_matrix(rng, n, bound)
        if n == 0 or m.det() != 0:
            return m


def random_unimodular_at_p(rng: random.Random, n: int, p: int) -> Matrix:
    """A random element of GL_n(Z_(p)): p-integral entries, unit determinant."""
    while True:
        m = random_p_integral_matrix(rng, n, p, p * p)
        d = m.det()
        if d != 0 and d.numerator % p != 0 and d.denominator % p != 0:
            return m


def random_pruefer_rep(rng: random.Random, p: int, max_exp: int = 2) -> Fraction:
    k = rng.randint(0, max_exp)
    return Fraction(rng.randrange(p**k), p**k)


def random_group(rng: random.Random, p: int, max_n: int = 2, torsion: bool = True) -> FiniteRankPGroup:
    orders = tuple(rng.randint(1, 2) for _ in range(rng.randint(0, 1))) if torsion else ()
    return FiniteRankPGroup(
        p,
        n1=rng.randint(0, max_n),
        n2=rng.randint(0, max_n),
        n3=rng.randint(0, max_n),
        torsion_orders=orders,
    )


def random_endomorphism(group: FiniteRankPGroup, rng: random.Random, bound: int | None = None) -> BlockEndomorphism:
    """A random valid block endomorphism of the given group."""
    p = group.p
    bound = bound or p * p
    n1, n2, n3, n4 = group.n1, group.n2, group.n3, group.n4
    orders = group.torsion_orders
    blocks = {}

    def fill(shape, entry):
        rows, cols = shape
        return Matrix([[entry(i, j) for j in range(cols)] for i in range(rows)])

    if n1:
        blocks[("zp", "zp")] = fill(
            (n1, n1), lambda i, j: random_p_integral_fraction(rng, p, bound)
        )
    if n2 and n1:
        blocks[("qp", "zp")] = fill((n2, n1), lambda i, j: random_fraction(rng, bound))
    if n2:
        blocks[("qp", "qp")] = fill((n2, n2), lambda i, j: random_fraction(rng, bound))
    if n3 and n1:
        blocks[("pr", "zp")] = fill((n3, n1), lambda i, j: random_pruefer_rep(rng, p))
    if n3 and n2:
        blocks[("pr", "qp")] = fill((n3, n2), lambda i, j: random_fraction(rng, bound))
    if n3:
        blocks[("pr", "pr")] = fill(
            (n3, n3), lambda i, j: random_p_integral_fraction(rng, p, bound)
        )
    if n3 and n4:
        blocks[("pr", "fin")] = fill(
            (n3, n4), lambda i, j: random_pruefer_rep(rng, p, max_exp=orders[j])
        )
    if n4 and n1:
        blocks[("fin", "zp")] = fill(
            (n4, n1), lambda i, j: Fraction(rng.randrange(p ** orders[i]))
        )
    if n4:
        blocks[("fin", "fin")] = fill(
            (n4, n4),
            lambda i, j: Fraction(
                p ** max(0, orders[i] - orders[j])
                * rng.randrange(p ** min(orders[j], orders[i]))
            ),
        )
    return BlockEndomorphism(group, blocks)
