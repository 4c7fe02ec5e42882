import cmath
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from moranspectra.digitsets import (
    GenericDigitSet,
    canonical_digits,
    sum_set,
    validate_structured,
)
from moranspectra.lattice import Mat2, residue_set
from moranspectra.mask import (
    CardinalityMismatch,
    SingularMatrix,
    UnityRootSum,
    cyclotomic_coeffs,
    eval_mask,
    is_hadamard_triple,
    mask_zero_exact,
    mask_zero_exact_generic,
    partition_of_unity_residual,
    unity_sum_is_zero,
)

D0 = canonical_digits()
F2 = [(0, 0), (1, 0), (0, 1), (1, 1)]


def d_plus_6d():
    return sum_set(D0, GenericDigitSet(tuple((6 * x, 6 * y) for x, y in D0.points())))


def _mask_oracle(digits, xi):
    """Direct term-by-term complex summation."""
    return sum(
        cmath.exp(2j * cmath.pi * (dx * xi[0] + dy * xi[1])) for dx, dy in digits.points()
    ) / len(digits)


def test_eval_mask_examples():
    assert eval_mask(D0, (0, 0)) == pytest.approx(1.0)
    assert abs(eval_mask(D0, (0.5, 0.5))) < 1e-15
    # four-term summation oracle gives exactly 1/4 at (1/3, 0)
    assert _mask_oracle(D0, (1 / 3, 0)) == pytest.approx(0.25)
    assert eval_mask(D0, (Fraction(1, 3), 0)) == pytest.approx(0.25)


def test_unity_sum_examples():
    assert unity_sum_is_zero([0, Fraction(1, 2)])
    assert unity_sum_is_zero([0, Fraction(1, 3), Fraction(2, 3)])
    # numeric oracle: the mixed 1/4, 1/3 sum is far from zero
    val = 1 + cmath.exp(2j * cmath.pi / 4) + cmath.exp(2j * cmath.pi / 3)
    assert abs(val) > 1.9
    assert not unity_sum_is_zero([0, Fraction(1, 4), Fraction(1, 3)])


def test_mask_zero_exact_examples():
    assert mask_zero_exact(D0, (Fraction(1, 2), 0))
    assert not mask_zero_exact(D0, (1, 1))
    d = validate_structured((1, 2), (0, 1))
    assert mask_zero_exact(d, (Fraction(1, 2), 0))
    # cross-check through the root-of-unity route
    assert mask_zero_exact_generic(d, (Fraction(1, 2), 0))


def test_mask_zero_exact_generic_examples():
    d = d_plus_6d()
    for v in residue_set(4).punctured():
        assert mask_zero_exact_generic(d, (Fraction(v[0], 4), Fraction(v[1], 4)))
    assert mask_zero_exact_generic(D0, (Fraction(1, 2), Fraction(1, 2)))
    two = GenericDigitSet(((0, 0), (1, 0)))
    assert abs(_mask_oracle(two, (1 / 3, 0))) > 0.4
    assert not mask_zero_exact_generic(two, (Fraction(1, 3), 0))


def test_hadamard_examples():
    assert is_hadamard_triple(Mat2.scalar(2), D0, F2)
    l_big = [(3 * x, 3 * y) for x, y in residue_set(4).vectors()]
    assert is_hadamard_triple(Mat2.scalar(12), d_plus_6d(), l_big)
    assert not is_hadamard_triple(Mat2.scalar(2), D0, [(2 * x, 2 * y) for x, y in F2])


def test_hadamard_errors():
    with pytest.raises(CardinalityMismatch):
        is_hadamard_triple(Mat2.scalar(2), D0, F2[:3])
    with pytest.raises(SingularMatrix):
        is_hadamard_triple(Mat2(1, 1, 1, 1), D0, F2)
    with pytest.raises(CardinalityMismatch):
        is_hadamard_triple(Mat2.scalar(2), D0, [(0, 0), (0, 0), (1, 0), (0, 1)])


def test_exact_numeric_agreement_random_rationals():
    rng = random.Random(7)
    for _ in range(10_000):
        q = rng.randint(1, 40)
        xi = (Fraction(rng.randint(-2 * q, 2 * q), q), Fraction(rng.randint(-2 * q, 2 * q), q))
        exact = mask_zero_exact(D0, xi)
        numeric = abs(eval_mask(D0, xi)) < 1e-10
        assert exact == numeric, xi


@given(
    st.floats(-5, 5).filter(lambda x: x == x),
    st.floats(-5, 5),
    st.integers(-3, 3),
    st.integers(-3, 3),
)
def test_mask_periodicity(x, y, kx, ky):
    a = eval_mask(D0, (x, y))
    b = eval_mask(D0, (x + kx, y + ky))
    assert abs(a - b) < 1e-12


def test_partition_of_unity_on_grid():
    d6 = d_plus_6d()
    l_big = [(3 * x, 3 * y) for x, y in residue_set(4).vectors()]
    for i in range(10):
        for j in range(10):
            xi = (i / 10, j / 10)
            assert partition_of_unity_residual(Mat2.scalar(2), D0, F2, xi) < 1e-10
            assert partition_of_unity_residual(Mat2.scalar(12), d6, l_big, xi) < 1e-10


exponents4 = st.lists(
    st.fractions(min_value=0, max_value=1, max_denominator=12), min_size=4, max_size=4
)


@given(exponents4)
def test_four_term_pairing_matches_cyclotomic(exps):
    s = UnityRootSum.from_exponents(exps)
    assert s.total() == 4
    assert s._antipodal_pairing_zero() == s._cyclotomic_zero()


@given(
    st.sampled_from([2, 3, 4, 6, 8, 12, 30, 60]),
    st.lists(st.integers(min_value=0, max_value=119), min_size=1, max_size=9),
)
def test_unity_sum_matches_numeric_magnitude(q, nums):
    exps = [Fraction(n, q) for n in nums]
    s = UnityRootSum.from_exponents(exps)
    assert s.is_zero() == (abs(s.value()) < 1e-9)


def test_cyclotomic_against_sympy():
    import sympy

    x = sympy.symbols("x")
    for n in range(1, 81):
        ours = list(cyclotomic_coeffs(n))
        theirs = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
        assert ours == [int(c) for c in theirs], n


def test_mask_bound_and_normalization():
    rng = random.Random(3)
    d = d_plus_6d()
    for _ in range(200):
        xi = (rng.uniform(-4, 4), rng.uniform(-4, 4))
        assert abs(eval_mask(d, xi)) <= 1 + 1e-12
    assert eval_mask(d, (0, 0)) == pytest.approx(1.0)
