import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padic_entropy import (
    DiagonalEndo,
    EntropyClass,
    EntropyValue,
    HeisenbergElement,
    InnerAuto,
    ValidationError,
    classify_heisenberg,
    entropy_diagonal,
    entropy_inner,
    entropy_oracle_diagonal,
    hmul,
)

F = Fraction

coords = st.fractions(min_value=-100, max_value=100, max_denominator=81)
elements = st.builds(HeisenbergElement, coords, coords, coords)


class TestGroupLaw:
    def test_identity(self):
        x = HeisenbergElement(F(2), F(1, 3), F(5))
        assert hmul(x, HeisenbergElement.identity()) == x
        assert hmul(HeisenbergElement.identity(), x) == x

    def test_generator_commutator_is_central(self):
        x = HeisenbergElement(1, 0, 0)
        y = HeisenbergElement(0, 1, 0)
        assert x.commutator(y) == HeisenbergElement(0, 0, 1)

    @given(x=elements, z=coords)
    def test_central_elements_commute(self, x, z):
        c = HeisenbergElement(0, 0, z)
        assert hmul(x, c) == hmul(c, x)

    @given(x=elements, y=elements, z=elements)
    def test_associative(self, x, y, z):
        assert hmul(hmul(x, y), z) == hmul(x, hmul(y, z))

    @given(x=elements)
    def test_inverse(self, x):
        assert hmul(x, x.inverse()) == HeisenbergElement.identity()
        assert hmul(x.inverse(), x) == HeisenbergElement.identity()

    @given(x=elements, y=elements)
    def test_commutators_are_central(self, x, y):
        assert x.commutator(y).is_central()

    def test_integral_subgroup_closed_under_product(self):
        rng = random.Random(3)
        for _ in range(30):
            def integral_element():
                return HeisenbergElement(
                    F(rng.randint(-9, 9)), F(rng.randint(-9, 9)), F(rng.randint(-9, 9))
                )

            x, y = integral_element(), integral_element()
            assert hmul(x, y).in_integral_subgroup(3)
            assert x.inverse().in_integral_subgroup(3)


class TestDiagonalEndo:
    @given(x=elements, y=elements, s=coords, t=coords)
    def test_is_homomorphism(self, x, y, s, t):
        endo = DiagonalEndo(s, t)
        assert endo.apply(hmul(x, y)) == hmul(endo.apply(x), endo.apply(y))

    def test_contracting_witness(self):
        endo = DiagonalEndo(F(1, 3), F(1))
        assert entropy_diagonal(endo, 3) == EntropyValue({3: 2})

    def test_integral_parameters_give_zero(self):
        rng = random.Random(5)
        for _ in range(20):
            s = F(rng.randint(-9, 9), rng.choice([1, 2, 4, 7]))
            t = F(rng.randint(-9, 9), rng.choice([1, 2, 4, 7]))
            if s == 0 or t == 0:
                continue
            assert entropy_diagonal(DiagonalEndo(s, t), 3).is_zero()

    def test_identity(self):
        assert entropy_diagonal(DiagonalEndo(F(1), F(1)), 3).is_zero()

    def test_zero_parameter_refused_by_formula(self):
        with pytest.raises(ValidationError):
            entropy_diagonal(DiagonalEndo(F(0), F(1)), 3)

    def test_symmetry_in_s_and_t(self):
        rng = random.Random(7)
        for _ in range(20):
            s = F(rng.randint(-27, 27), rng.randint(1, 27))
            t = F(rng.randint(-27, 27), rng.randint(1, 27))
            if s == 0 or t == 0:
                continue
            assert entropy_diagonal(DiagonalEndo(s, t), 3) == entropy_diagonal(
                DiagonalEndo(t, s), 3
            )


class TestBoxOracle:
    def test_contracting_witness_increments(self):
        value, diagnostics = entropy_oracle_diagonal(DiagonalEndo(F(1, 3), F(1)), 3)
        assert value == EntropyValue({3: 2})
        assert all(d == 2 for d in diagnostics.increments)

    def test_integral_parameters(self):
        value, _ = entropy_oracle_diagonal(DiagonalEndo(F(2), F(9)), 3)
        assert value.is_zero()

    def test_swapped_witness(self):
        value, _ = entropy_oracle_diagonal(DiagonalEndo(F(1), F(1, 3)), 3)
        assert value == EntropyValue({3: 2})

    def test_singular_parameters_allowed(self):
        value, _ = entropy_oracle_diagonal(DiagonalEndo(F(0), F(1, 3)), 3)
        # only the j = 0 constraint survives for the a and z coordinates
        assert value == EntropyValue({3: 1})

    def test_matches_formula_for_invertible_endos(self):
        rng = random.Random(11)
        for p in (2, 3, 5):
            for _ in range(15):
                s = F(rng.randint(-p**2, p**2), rng.randint(1, p**2))
                t = F(rng.randint(-p**2, p**2), rng.randint(1, p**2))
                if s == 0 or t == 0:
                    continue
                endo = DiagonalEndo(s, t)
                oracle, _ = entropy_oracle_diagonal(endo, p)
                assert oracle == entropy_diagonal(endo, p)

    def test_center_and_quotient_bounded_by_total(self):
        from padic_entropy import Matrix, yuzvinski_entropy

        rng = random.Random(13)
        for _ in range(15):
            s = F(rng.randint(-27, 27), rng.randint(1, 27))
            t = F(rng.randint(-27, 27), rng.randint(1, 27))
            if s == 0 or t == 0:
                continue
            total = entropy_diagonal(DiagonalEndo(s, t), 3)
            center = yuzvinski_entropy(Matrix([[s * t]]), 3)
            quotient = yuzvinski_entropy(Matrix.diagonal([s, t]), 3)
            assert center <= total and quotient <= total

    def test_base_level_must_be_subgroup(self):
        with pytest.raises(ValidationError):
            entropy_oracle_diagonal(DiagonalEndo(F(1, 3), F(1)), 3, base_level=-1)

    def test_base_level_invariance(self):
        for k in (0, 1, 2):
            value, _ = entropy_oracle_diagonal(
                DiagonalEndo(F(1, 3), F(3)), 3, base_level=k
            )
            assert value == EntropyValue({3: 1})


class TestInnerAutomorphisms:
    def test_trivial(self):
        assert entropy_inner(InnerAuto(F(0), F(0)), 3).is_zero()

    def test_deep_denominator(self):
        assert entropy_inner(InnerAuto(F(1, 9), F(0)), 3).is_zero()

    def test_random_parameters(self):
        rng = random.Random(17)
        for _ in range(20):
            inner = InnerAuto(
                F(rng.randint(-27, 27), rng.randint(1, 27)),
                F(rng.randint(-27, 27), rng.randint(1, 27)),
            )
            assert entropy_inner(inner, 3).is_zero()

    @given(x=elements, y=elements, a0=coords, b0=coords)
    def test_action_matches_conjugation(self, x, y, a0, b0):
        inner = InnerAuto(a0, b0)
        g = HeisenbergElement(a0, b0, F(0))
        conjugated = hmul(hmul(g, x), g.inverse())
        assert inner.apply(x) == conjugated


class TestClassification:
    def test_integral_ring(self):
        report = classify_heisenberg("zp", 3)
        assert report.classification is EntropyClass.E0
        assert all(value.is_zero() for _, _, value in report.evidence)
        assert report.witness is None

    def test_p_adic_field_ring(self):
        report = classify_heisenberg("qp", 5)
        assert report.classification is EntropyClass.E_FINITE_NOT_E0
        assert report.witness is not None
        s, t, value = report.witness
        assert (s, t) == (F(1, 5), F(1))
        assert value == EntropyValue({5: 2})

    def test_empty_sample_still_classifies(self):
        report = classify_heisenberg("zp", 3, sample_size=0)
        assert report.classification is EntropyClass.E0
        assert report.evidence == ()

    def test_deterministic(self):
        assert classify_heisenberg("qp", 3).to_json() == classify_heisenberg("qp", 3).to_json()
