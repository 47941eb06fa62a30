import random
from fractions import Fraction

import pytest

from padic_entropy import (
    Lattice,
    Matrix,
    MonicPolynomial,
    ValidationError,
    companion_matrix,
    hstack,
    integral_preimage_lattice,
    lattice_canonicalize,
    lattice_index,
    lattice_intersection,
    lattice_sum,
    vp,
    vstack,
)
from conftest import random_fraction, random_invertible_matrix, random_matrix, random_unimodular_at_p

F = Fraction


class TestMatrix:
    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            Matrix([[0.5]])

    def test_mul_and_pow(self):
        a = Matrix([[1, 2], [3, 4]])
        assert a * Matrix.identity(2) == a
        assert a**0 == Matrix.identity(2)
        assert a**3 == a * a * a

    def test_inverse(self):
        a = Matrix([[1, 2], [3, 4]])
        assert a * a.inverse() == Matrix.identity(2)
        with pytest.raises(ValueError):
            Matrix([[1, 2], [2, 4]]).inverse()

    def test_det(self):
        assert Matrix([[1, 2], [3, 4]]).det() == -2
        assert Matrix([[F(1, 3), 0], [0, 3]]).det() == 1

    def test_stacking(self):
        a = Matrix([[1], [2]])
        b = Matrix([[3], [4]])
        assert hstack(a, b) == Matrix([[1, 3], [2, 4]])
        assert vstack(a, b) == Matrix([[1], [2], [3], [4]])

    def test_empty_matrix(self):
        e = Matrix([])
        assert e.nrows == 0 and e.ncols == 0
        assert e.charpoly().degree == 0
        assert e.inverse() == e


class TestCharpoly:
    def test_identity(self):
        # (X-1)^2 = X^2 - 2X + 1
        assert Matrix.identity(2).charpoly().coefficients == (F(1), F(-2))

    def test_companion_property(self):
        poly = MonicPolynomial((F(5, 7), F(-2), F(1, 3)))
        assert companion_matrix(poly).charpoly() == poly

    def test_diag_third_and_three(self):
        # (X - 1/3)(X - 3) = X^2 - 10/3 X + 1
        assert Matrix.diagonal([F(1, 3), F(3)]).charpoly().coefficients == (F(1), F(-10, 3))

    def test_similarity_invariance(self):
        rng = random.Random(7)
        for _ in range(30):
            n = rng.randint(1, 4)
            a = random_matrix(rng, n, 9)
            s = random_invertible_matrix(rng, n, 5)
            assert (s * a * s.inverse()).charpoly() == a.charpoly()

    def test_evaluate_and_string(self):
        poly = MonicPolynomial((F(1), F(-10, 3)))
        assert poly.evaluate(3) == 0
        assert poly.to_string() == "X^2 - 10/3*X + 1"


class TestCanonicalize:
    def test_identity_already_canonical(self):
        lat = lattice_canonicalize(5, Matrix.identity(2))
        assert lat.basis == Matrix.identity(2)
        assert lat.pivot_exponents == (0, 0)

    def test_hand_reduction(self):
        gens = Matrix.from_columns([[1, 0], [0, 3], [1, 3]])
        lat = lattice_canonicalize(3, gens)
        assert lat.basis == Matrix.diagonal([1, 3])

    def test_unit_scaling_invariance(self):
        basis = Matrix.from_columns([[1, 2], [0, 9]])
        assert lattice_canonicalize(3, basis) == lattice_canonicalize(3, F(2, 5) * basis)

    def test_idempotent(self):
        rng = random.Random(11)
        for _ in range(25):
            n = rng.randint(1, 4)
            lat = Lattice(3, random_invertible_matrix(rng, n, 27))
            again = Lattice(3, lat.basis)
            assert again == lat

    def test_invariant_under_p_unit_column_ops(self):
        rng = random.Random(13)
        for p in (2, 3, 5):
            for _ in range(15):
                n = rng.randint(1, 3)
                basis = random_invertible_matrix(rng, n, p**3)
                u = random_unimodular_at_p(rng, n, p)
                assert Lattice(p, basis) == Lattice(p, basis * u)

    def test_rank_deficient_rejected(self):
        with pytest.raises(ValidationError):
            lattice_canonicalize(3, Matrix.from_columns([[1, 2], [2, 4]]))
        with pytest.raises(ValidationError):
            lattice_canonicalize(3, Matrix([[1, 0]]).transpose())

    def test_pivots_are_pure_p_powers(self):
        rng = random.Random(17)
        for _ in range(20):
            n = rng.randint(1, 4)
            lat = Lattice(3, random_invertible_matrix(rng, n, 27))
            for i, e in enumerate(lat.pivot_exponents):
                assert lat.basis.rows[i][i] == F(3) ** e
            # upper triangle is zero, lower entries are reduced representatives
            for i in range(n):
                for j in range(i + 1, n):
                    assert lat.basis.rows[i][j] == 0


class TestMembership:
    def test_standard_lattice(self):
        lat = Lattice.standard(3, 2)
        assert lat.contains_vector([1, 2])
        assert lat.contains_vector([F(1, 2), F(5, 7)])  # denominators prime to 3
        assert not lat.contains_vector([F(1, 3), 0])

    def test_contains_lattice(self):
        outer = Lattice.standard(3, 2)
        inner = lattice_canonicalize(3, Matrix.diagonal([3, 9]))
        assert outer.contains_lattice(inner)
        assert not inner.contains_lattice(outer)


class TestIndex:
    def test_one_scaled_axis(self):
        outer = Lattice.standard(5, 2)
        inner = lattice_canonicalize(5, Matrix.diagonal([5, 1]))
        assert lattice_index(outer, inner) == 5

    def test_self_index(self):
        lat = lattice_canonicalize(3, Matrix.diagonal([F(1, 3), 9]))
        assert lattice_index(lat, lat) == 1

    def test_determinant_ratio(self):
        outer = Lattice.standard(3, 2)
        inner = lattice_canonicalize(3, Matrix.diagonal([3, 9]))
        assert lattice_index(outer, inner) == 27

    def test_non_containment_rejected(self):
        a = lattice_canonicalize(3, Matrix.diagonal([3, 1]))
        b = lattice_canonicalize(3, Matrix.diagonal([1, 3]))
        with pytest.raises(ValidationError):
            lattice_index(a, b)

    def test_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            lattice_index(Lattice.standard(3, 2), Lattice.standard(5, 2))
        with pytest.raises(ValidationError):
            lattice_index(Lattice.standard(3, 2), Lattice.standard(3, 1))

    def test_tower_multiplicativity(self):
        rng = random.Random(19)
        for _ in range(20):
            n = rng.randint(1, 3)
            l1 = Lattice.standard(3, n)
            m2 = Matrix.diagonal([F(3) ** rng.randint(0, 2) for _ in range(n)])
            l2 = Lattice(3, m2 * random_unimodular_at_p(rng, n, 3))
            m3 = Matrix.diagonal([F(3) ** rng.randint(0, 2) for _ in range(n)])
            l3 = Lattice(3, l2.basis * m3)
            assert l1.contains_lattice(l2) and l2.contains_lattice(l3)
            assert lattice_index(l1, l3) == lattice_index(l1, l2) * lattice_index(l2, l3)

    def test_index_matches_coset_enumeration(self):
        """Count cosets of L2 in L1 by brute force for indices up to 3^4."""
        rng = random.Random(23)
        p = 3
        for _ in range(8):
            n = 2
            outer = Lattice.standard(p, n)
            exponents = [rng.randint(0, 2) for _ in range(n)]
            if sum(exponents) > 4:
                continue
            inner = Lattice(
                p,
                Matrix.diagonal([F(p) ** e for e in exponents])
                * random_unimodular_at_p(rng, n, p),
            )
            expected = lattice_index(outer, inner)
            span = p ** max(inner.pivot_exponents)
            points = [
                (x, y) for x in range(span) for y in range(span)
            ]
            representatives = []
            for point in points:
                if not any(
                    inner.contains_vector([a - b for a, b in zip(point, rep)])
                    for rep in representatives
                ):
                    representatives.append(point)
            assert len(representatives) == expected


class TestSum:
    def test_containment(self):
        a = Lattice.standard(3, 1)
        b = lattice_canonicalize(3, Matrix([[F(1, 3)]]))
        assert lattice_sum(a, b) == b

    def test_idempotent(self):
        lat = lattice_canonicalize(3, Matrix.diagonal([3, F(1, 9)]))
        assert lattice_sum(lat, lat) == lat

    def test_units_at_other_primes(self):
        two = lattice_canonicalize(5, Matrix([[2]]))
        three = lattice_canonicalize(5, Matrix([[3]]))
        assert lattice_sum(two, three) == Lattice.standard(5, 1)


class TestIntegralPreimage:
    def test_single_scalar_constraint(self):
        lat = integral_preimage_lattice(3, Matrix([[F(1, 3)]]))
        assert lat.basis == Matrix([[3]])

    def test_identity(self):
        assert integral_preimage_lattice(3, Matrix.identity(3)) == Lattice.standard(3, 3)

    def test_stacked_binding_constraint(self):
        lat = integral_preimage_lattice(3, Matrix([[1], [F(1, 9)]]))
        assert lat.basis == Matrix([[9]])

    def test_rank_deficiency_rejected(self):
        with pytest.raises(ValidationError):
            integral_preimage_lattice(3, Matrix([[1, 1], [2, 2]]))

    def test_membership_characterization(self):
        """M x integral at p in every coordinate iff x in the returned lattice."""
        rng = random.Random(29)
        p = 3
        for _ in range(10):
            n = rng.randint(1, 3)
            stacked = vstack(
                Matrix.identity(n),
                Matrix([[random_fraction(rng, 27) for _ in range(n)] for _ in range(2)]),
            )
            lat = integral_preimage_lattice(p, stacked)
            for _ in range(10):
                x = [random_fraction(rng, 27) for _ in range(n)]
                image_integral = all(
                    c == 0 or vp(c, p) >= 0 for c in stacked.apply(x)
                )
                assert lat.contains_vector(x) == image_integral


class TestIntersection:
    def test_diagonal_case(self):
        a = lattice_canonicalize(3, Matrix.diagonal([F(1, 3), 3]))
        b = lattice_canonicalize(3, Matrix.diagonal([3, F(1, 3)]))
        assert lattice_intersection(a, b) == lattice_canonicalize(3, Matrix.diagonal([3, 3]))

    def test_meet_is_largest_common_sublattice(self):
        rng = random.Random(31)
        for _ in range(10):
            n = rng.randint(1, 3)
            a = Lattice(3, random_invertible_matrix(rng, n, 9))
            b = Lattice(3, random_invertible_matrix(rng, n, 9))
            meet = lattice_intersection(a, b)
            assert a.contains_lattice(meet) and b.contains_lattice(meet)
            # characterization on basis vectors of the sum of a and b scaled down
            for j in range(n):
                v = meet.basis.column(j)
                assert a.contains_vector(v) and b.contains_vector(v)
