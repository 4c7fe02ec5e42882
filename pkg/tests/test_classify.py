import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moranspectra.classify import (
    NOT_SPECTRAL,
    OUT_OF_THEORY,
    SPECTRAL,
    classify,
    classify_thm11,
    classify_thm14,
    classify_thm15,
    classify_thm16,
    similarity_normalize,
    thm15_shape,
    thm16_shape,
)
from moranspectra.digitsets import GenericDigitSet, canonical_digits, scaled_canonical, sum_set
from moranspectra.lattice import Mat2
from moranspectra.moran import MoranSystem, TWord, conjugate_system

D0 = canonical_digits()
I2, I3, I4 = Mat2.scalar(2), Mat2.scalar(3), Mat2.scalar(4)


def two_scale(t1, t2, m1=I2, m2=I2):
    return MoranSystem(((m1, scaled_canonical(t1)),), ((m2, scaled_canonical(t2)),))


class TestThm14:
    def test_preperiod_exempt(self):
        v = classify_thm14(MoranSystem(((I3, D0),), ((I4, D0),)))
        assert v.outcome == SPECTRAL and v.rule == "T1.4"

    def test_odd_constant(self):
        v = classify_thm14(MoranSystem.constant(I3, D0))
        assert v.outcome == NOT_SPECTRAL

    def test_determinant_boundary_is_out_of_theory(self):
        v = classify_thm14(MoranSystem.constant(I2, D0))
        assert v.outcome == OUT_OF_THEORY
        assert "not > 4" in v.detail

    def test_even_structured(self):
        v = classify_thm14(MoranSystem.constant(Mat2(4, 2, 2, 4), D0))
        assert v.outcome == SPECTRAL


class TestThm11:
    def test_det4_with_odd_entry(self):
        v = classify_thm11(MoranSystem.constant(Mat2(2, 1, 0, 2), D0))
        assert v.outcome == NOT_SPECTRAL and v.rule == "T1.1"

    def test_no_violation_is_out_of_theory(self):
        v = classify_thm11(MoranSystem.constant(I2, D0))
        assert v.outcome == OUT_OF_THEORY

    def test_small_determinant(self):
        v = classify_thm11(MoranSystem.constant(Mat2(1, 2, 2, 1), D0))
        assert v.outcome == OUT_OF_THEORY
        assert "not >= 4" in v.detail

    def test_never_spectral_on_random_systems(self):
        rng = random.Random(9)
        for _ in range(200):
            m = Mat2(*(rng.randint(-6, 6) for _ in range(4)))
            try:
                v = classify_thm11(MoranSystem.constant(m, D0))
            except Exception:
                continue
            assert v.outcome != SPECTRAL


class TestThm15:
    def test_alternating(self):
        v = classify_thm15(TWord((), (1, 2), (1, 3)), [I2])
        assert v.outcome == SPECTRAL

    def test_prefixed_constant_tail(self):
        v = classify_thm15(TWord((2,), (3,), (1, 3, 5)), [I2])
        assert v.outcome == NOT_SPECTRAL

    def test_constant_word(self):
        v = classify_thm15(TWord((), (2,), (1, 3)), [I2])
        assert v.outcome == SPECTRAL

    def test_one_then_constant(self):
        v = classify_thm15(TWord((1,), (2,), (1, 3)), [I2])
        assert v.outcome == NOT_SPECTRAL

    def test_matrix_hypotheses(self):
        assert classify_thm15(TWord((), (1,), (1, 3)), [I3]).outcome == OUT_OF_THEORY
        assert classify_thm15(TWord((), (1,), (1, 3)), [I4]).outcome == OUT_OF_THEORY
        assert (
            classify_thm15(TWord((), (1,), (1, 3)), [Mat2(2, 4, 0, 2)]).outcome
            == OUT_OF_THEORY
        )

    def test_word_hypotheses(self):
        assert classify_thm15(TWord((), (1,), (3, 5)), [I2]).outcome == OUT_OF_THEORY
        assert classify_thm15(TWord((), (1,), (1, 3, 9)), [I2]).outcome == OUT_OF_THEORY


class TestThm16:
    @pytest.mark.parametrize(
        "t1,t2,expected",
        [(9, 3, SPECTRAL), (3, 9, NOT_SPECTRAL), (5, 5, SPECTRAL), (3, 5, NOT_SPECTRAL)],
    )
    def test_divisibility_table(self, t1, t2, expected):
        v = classify_thm16(I2, I2, t1, t2)
        assert v.outcome == expected and v.rule == "T1.6"

    def test_hypothesis_failures(self):
        assert classify_thm16(I2, I3, 3, 3).outcome == OUT_OF_THEORY
        assert classify_thm16(I2, I4, 3, 3).outcome == OUT_OF_THEORY
        assert classify_thm16(I2, I2, 2, 3).outcome == OUT_OF_THEORY
        assert classify_thm16(Mat2(1, 0, 0, 3), I2, 3, 3).outcome == OUT_OF_THEORY

    def test_first_matrix_needs_only_expansion(self):
        v = classify_thm16(Mat2(3, 1, 1, 2), I2, 15, 5)
        assert v.outcome == SPECTRAL


class TestDispatcher:
    def test_spectral_via_t14(self):
        v = classify(MoranSystem.constant(I4, D0))
        assert (v.outcome, v.rule) == (SPECTRAL, "T1.4")

    def test_word_input_uses_t15(self):
        v = classify(TWord((2,), (3,), (1, 3, 5)), [I2])
        assert (v.outcome, v.rule) == (NOT_SPECTRAL, "T1.5")

    def test_constant_det4_uses_t16(self):
        v = classify(MoranSystem.constant(I2, D0))
        assert (v.outcome, v.rule) == (SPECTRAL, "T1.6")

    def test_alternating_scales_use_t15(self):
        sysm = MoranSystem((), ((I2, scaled_canonical(1)), (I2, scaled_canonical(3))))
        v = classify(sysm)
        assert (v.outcome, v.rule) == (SPECTRAL, "T1.5")

    def test_cor51_catches_long_preperiods(self):
        sysm = MoranSystem(
            ((I2, scaled_canonical(3)), (I2, scaled_canonical(5))),
            ((I2, scaled_canonical(7)),),
        )
        v = classify(sysm)
        assert (v.outcome, v.rule) == (NOT_SPECTRAL, "C5.1")

    def test_generic_digits_are_out_of_theory(self):
        d6 = sum_set(D0, GenericDigitSet(tuple((6 * x, 6 * y) for x, y in D0.points())))
        v = classify(MoranSystem.constant(I2, d6))
        assert v.outcome == OUT_OF_THEORY
        assert "T1.4" in v.detail and "T1.1" in v.detail

    def test_word_without_matrices_raises(self):
        with pytest.raises(ValueError):
            classify(TWord((), (1,), (1, 3)))


def _random_unimodular(rng):
    while True:
        m = Mat2(*(rng.randint(-3, 3) for _ in range(4)))
        if abs(m.det()) == 1:
            return m


TABLE_SYSTEMS = [
    MoranSystem.constant(I4, D0),
    MoranSystem.constant(I3, D0),
    MoranSystem.constant(Mat2(4, 2, 2, 4), D0),
    MoranSystem(((I3, D0),), ((I4, D0),)),
    two_scale(9, 3),
    two_scale(3, 9),
    two_scale(3, 5),
    MoranSystem((), ((I2, scaled_canonical(1)), (I2, scaled_canonical(3)))),
    MoranSystem(((I2, scaled_canonical(3)),), ((I2, scaled_canonical(5)),)),
]


class TestSimilarityInvariance:
    def test_normalization_recovers_conjugation(self):
        rng = random.Random(41)
        for _ in range(25):
            q = _random_unimodular(rng)
            for sysm in TABLE_SYSTEMS:
                conj = conjugate_system(sysm, q)
                assert similarity_normalize(conj) == sysm

    def test_verdicts_invariant_under_conjugation(self):
        rng = random.Random(42)
        for _ in range(20):
            q = _random_unimodular(rng)
            for sysm in TABLE_SYSTEMS:
                base = classify(sysm)
                conj = classify(conjugate_system(sysm, q))
                assert (base.outcome, base.rule) == (conj.outcome, conj.rule), (
                    sysm,
                    q,
                )


class TestCrossRuleConsistency:
    @pytest.mark.parametrize("j", [2, 3])
    def test_one_then_j_words_agree_with_divisibility(self, j):
        ts = (1, 3, 5)
        word = TWord((1,), (j,), ts)
        v15 = classify_thm15(word, [I2])
        v16 = classify_thm16(I2, I2, ts[0], ts[j - 1])
        assert v15.outcome == v16.outcome == NOT_SPECTRAL

    def test_pure_two_letter_agreement(self):
        ts = (1, 3, 5)
        for i in (1, 2, 3):
            for j in (2, 3):
                if i == j:
                    continue
                word = TWord((i,), (j,), ts)
                v15 = classify_thm15(word, [I2])
                v16 = classify_thm16(I2, I2, ts[i - 1], ts[j - 1])
                assert v15.outcome == v16.outcome, (i, j)


class TestStability:
    def test_unrolling_period_changes_nothing(self):
        for sysm in TABLE_SYSTEMS:
            unrolled = MoranSystem(sysm.preperiod, sysm.period + sysm.period)
            a, b = classify(sysm), classify(unrolled)
            assert (a.outcome, a.rule) == (b.outcome, b.rule)

    def test_absorbing_preperiod_changes_nothing(self):
        for sysm in TABLE_SYSTEMS:
            padded = MoranSystem(
                sysm.preperiod + (sysm.period[-1],),
                sysm.period[-1:] + sysm.period[:-1] if len(sysm.period) > 1 else sysm.period,
            )
            a, b = classify(sysm), classify(padded)
            assert (a.outcome, a.rule) == (b.outcome, b.rule)


class TestShapes:
    def test_thm16_shape_constant(self):
        shape = thm16_shape(MoranSystem.constant(I2, D0))
        assert shape == (I2, I2, 1, 1)

    def test_thm15_shape_word_extraction(self):
        sysm = MoranSystem((), ((I2, scaled_canonical(5)), (I2, scaled_canonical(3))))
        word, mats = thm15_shape(sysm)
        assert word.t_values == (1, 3, 5)
        assert word.period == (3, 2)

    def test_thm15_shape_rejects_non_coprime(self):
        sysm = MoranSystem((), ((I2, scaled_canonical(3)), (I2, scaled_canonical(9))))
        assert isinstance(thm15_shape(sysm), str)
