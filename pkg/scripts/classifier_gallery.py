#!/usr/bin/env python3
"""Run the spectrality classifiers over a gallery of systems and words.

Prints one line per input with the verdict, the deciding rule, and the
hypothesis trace, demonstrating all three rule families plus the
out-of-theory fallthrough.
"""

from moranspectra import (
    GenericDigitSet,
    Mat2,
    MoranSystem,
    TWord,
    canonical_digits,
    classify,
    scaled_canonical,
    sum_set,
)

I2, I3, I4 = Mat2.scalar(2), Mat2.scalar(3), Mat2.scalar(4)
D0 = canonical_digits()
D6 = sum_set(D0, GenericDigitSet(tuple((6 * x, 6 * y) for x, y in D0.points())))


def two_scale(t1, t2):
    return MoranSystem(((I2, scaled_canonical(t1)),), ((I2, scaled_canonical(t2)),))


GALLERY = [
    ("constant (3I, D0)", MoranSystem.constant(I3, D0), None),
    ("preperiod 3I then constant 4I", MoranSystem(((I3, D0),), ((I4, D0),)), None),
    ("constant ([[4,2],[2,4]], D0)", MoranSystem.constant(Mat2(4, 2, 2, 4), D0), None),
    ("constant (2I, D0)", MoranSystem.constant(I2, D0), None),
    ("scales 9 then 3", two_scale(9, 3), None),
    ("scales 3 then 9", two_scale(3, 9), None),
    ("scales 3, 5 then constant 7", MoranSystem(
        ((I2, scaled_canonical(3)), (I2, scaled_canonical(5))),
        ((I2, scaled_canonical(7)),)), None),
    ("word (1 2)^inf over 2I", TWord((), (1, 2), (1, 3)), [I2]),
    ("word 2 3^inf over 2I", TWord((2,), (3,), (1, 3, 5)), [I2]),
    ("word 2^inf over 2I", TWord((), (2,), (1, 3)), [I2]),
    ("word 1 2^inf over 2I", TWord((1,), (2,), (1, 3)), [I2]),
    ("constant (2I, 16-point sumset)", MoranSystem.constant(I2, D6), None),
]


def main() -> None:
    width = max(len(name) for name, _, _ in GALLERY)
    for name, target, matrices in GALLERY:
        verdict = classify(target, matrices) if matrices else classify(target)
        rule = verdict.rule or "-"
        print(f"{name:<{width}}  {verdict.outcome:<12} {rule:<5} {verdict.detail}")


if __name__ == "__main__":
    main()
