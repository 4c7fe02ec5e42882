"""Moran systems: eventually periodic (matrix, digit-set) sequences.

A system is a finite preperiod followed by an infinitely repeated period of
(expanding integer matrix, digit set) pairs.  The associated measure is the
infinite convolution of uniform measures on M_1^{-1}...M_n^{-1} D_n; its
Fourier transform is the infinite product of mask polynomials evaluated
along the backward orbit eta_j = (M_1^* ... M_j^*)^{-1} xi.

Two evaluation paths coexist:

* `fourier`      - double-precision truncated product with a certified tail
                   bound from |1 - m_D(eta)| <= 2 pi max||d|| ||eta|| and the
                   geometric decay of ||eta_j||;
* `fourier_zero_exact` - exact rational scan of the orbit that either
                   produces a level-j witness in Z(m_{D_j}) or proves no
                   level can vanish because ||eta_j|| fell below the minimal
                   norm any mask zero must have.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .digitsets import DigitSet, StructuredDigitSet, scaled_by_matrix
from .lattice import (
    Mat2,
    PI_UPPER,
    inverse_norm_upper,
    is_expanding,
    in_gl2_2z,
    inverse_norm_below_one,
    norm_sq,
    operator_norm_upper,
    sqrt_upper,
)
from .mask import digit_mask_zero, eval_mask

Level = tuple[Mat2, DigitSet]

MAX_SCAN_LEVELS = 100_000
DEFAULT_POINT_CAP = 65_536


class OutOfTheoryError(ValueError):
    """Inputs outside the hypothesis class a rule or construction needs."""


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured resource cap."""


class SystemInvalid(ValueError):
    """A Moran system failing validation was used where a valid one is required."""


def _freeze_levels(levels: Iterable[Level]) -> tuple[Level, ...]:
    out = []
    for m, d in levels:
        if not m.is_integral() and not _is_rational_mat(m):
            raise ValueError("system matrices must be exact (int or Fraction entries)")
        out.append((m, d))
    return tuple(out)


def _is_rational_mat(m: Mat2) -> bool:
    return all(isinstance(e, (int, Fraction)) for e in m.entries())


@dataclass(frozen=True)
class MoranSystem:
    """Eventually periodic sequence of (matrix, digit set) levels, 1-based."""

    preperiod: tuple[Level, ...]
    period: tuple[Level, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "preperiod", _freeze_levels(self.preperiod))
        object.__setattr__(self, "period", _freeze_levels(self.period))
        if not self.period:
            raise ValueError("period must be nonempty")

    @staticmethod
    def constant(matrix: Mat2, digits: DigitSet) -> "MoranSystem":
        return MoranSystem((), ((matrix, digits),))

    def level(self, n: int) -> Level:
        """The (M_n, D_n) pair; total for all n >= 1."""
        if n < 1:
            raise ValueError("levels are 1-based")
        p = len(self.preperiod)
        if n <= p:
            return self.preperiod[n - 1]
        return self.period[(n - p - 1) % len(self.period)]

    def distinct_levels(self) -> tuple[Level, ...]:
        return self.preperiod + self.period

    def matrices(self) -> tuple[Mat2, ...]:
        return tuple(m for m, _ in self.distinct_levels())

    def occurs_only_at_level_one(self, i: int) -> bool:
        """True iff distinct-level index i (0-based) occurs only as level 1.

        Only a nonempty preperiod's first entry can be exclusive to level 1;
        every period entry reappears at levels >= 2.
        """
        return i == 0 and len(self.preperiod) >= 1

    def first_level_at_least_two(self, i: int) -> int:
        """Smallest global level >= 2 where distinct-level index i occurs."""
        p = len(self.preperiod)
        if i == 0 and p == 0:
            return 1 + len(self.period)
        return i + 1


def canonicalize_eventually_periodic(pre: Sequence, period: Sequence):
    """Minimal representation: primitive period, trailing agreement absorbed."""
    period = list(period)
    n = len(period)
    for length in range(1, n + 1):
        if n % length == 0 and period == period[:length] * (n // length):
            period = period[:length]
            break
    pre = list(pre)
    while pre and pre[-1] == period[-1]:
        pre.pop()
        period = [period[-1]] + period[:-1]
    return tuple(pre), tuple(period)


def canonical_representation(sys: MoranSystem) -> MoranSystem:
    pre, period = canonicalize_eventually_periodic(sys.preperiod, sys.period)
    return MoranSystem(pre, period)


def conjugate_system(sys: MoranSystem, q: Mat2) -> MoranSystem:
    """The similar system (Q M_n Q^{-1}, Q D_n) for unimodular integer Q."""
    if not q.is_integral() or abs(q.det()) != 1:
        raise ValueError("conjugation needs a unimodular integer matrix")
    qinv = q.inverse()

    def conj(level: Level) -> Level:
        m, d = level
        mm = q * m * qinv
        mm = Mat2(*(int(e) for e in mm.entries())) if mm.is_integral() else mm
        return (mm, scaled_by_matrix(q, d))

    return MoranSystem(
        tuple(conj(l) for l in sys.preperiod),
        tuple(conj(l) for l in sys.period),
    )


# --- per-level analysis, cached on the (hashable) system -------------------


@dataclass(frozen=True)
class _LevelData:
    matrix: Mat2
    digits: DigitSet
    minv_t: Mat2                      # exact (M^*)^{-1}
    minv_t_float: tuple[float, float, float, float]
    inv_norm_up: Fraction             # certified >= ||M^{-1}||
    gamma_up: Fraction                # certified >= max ||d||
    zero_norm_sq_floor: Fraction      # ||eta||^2 >= this on Z(m_D)


@dataclass(frozen=True)
class _Analysis:
    levels: tuple[_LevelData, ...]
    preperiod_len: int
    unrolled_len: int                 # anchor spacing: a multiple of the period
    anchor_contraction_up: Fraction   # certified >= ||(product of unrolled_len
    #                                   period maps from phase 0)^{-1}||, < 1
    period_growth_up: Fraction        # certified >= any consecutive-run norm
    anchor_tail_sum_up: Fraction      # certified >= sum of phase-0 run norms
    gamma_up: Fraction                # certified >= max over levels max ||d||
    zero_floor_sq: Fraction           # min over levels of zero_norm_sq_floor

    def level_data(self, n: int) -> _LevelData:
        p = self.preperiod_len
        if n <= p:
            return self.levels[n - 1]
        return self.levels[p + (n - p - 1) % (len(self.levels) - p)]


def _zero_norm_floor(digits: DigitSet) -> Fraction:
    """A positive rational below every ||eta|| with m_D(eta) = 0.

    Structured sets: 2 Q^t eta is a nonzero integer vector on the zero set,
    so ||eta|| >= 1 / (2 ||Q||).  Generic sets: 1 = |1 - m_D(eta)| <=
    2 pi max||d|| ||eta||.
    """
    if isinstance(digits, StructuredDigitSet):
        return Fraction(1) / (2 * operator_norm_upper(digits.q_matrix()))
    return Fraction(1) / (2 * PI_UPPER * sqrt_upper(digits.max_norm_sq()))


@lru_cache(maxsize=256)
def _analysis(sys: MoranSystem) -> _Analysis:
    levels = []
    for m, d in sys.distinct_levels():
        if m.det() == 0:
            raise SystemInvalid("system matrix is singular")
        minv_t = m.transpose().inverse()
        fr = minv_t.as_float_rows()
        floor = _zero_norm_floor(d)
        levels.append(
            _LevelData(
                matrix=m,
                digits=d,
                minv_t=minv_t,
                minv_t_float=(fr[0][0], fr[0][1], fr[1][0], fr[1][1]),
                inv_norm_up=inverse_norm_upper(m),
                gamma_up=sqrt_upper(d.max_norm_sq()),
                zero_norm_sq_floor=floor * floor,
            )
        )
    p = len(sys.preperiod)
    period = levels[p:]
    r = len(period)
    # Orbit norms in the periodic region are bounded by certified operator
    # norms of the EXACT consecutive inverse products: a run of i = c*L + s
    # steps from phase ph factors as (anchor product)^c times a partial run.
    # Per-level norm products would be too weak (conditioning of canonical
    # reductions does not telescope level by level but cancels in products),
    # so the period is unrolled to a length L where the full anchor products
    # contract from every phase.
    unroll = 1
    while True:
        length = unroll * r
        growth = Fraction(0)
        tail_sum = Fraction(0)
        anchor = None
        all_anchors_contract = True
        for phase in range(r):
            acc = Mat2.identity()
            phase_sum = Fraction(0)
            for step in range(1, length + 1):
                acc = period[(phase + step - 1) % r].minv_t * acc
                bound = operator_norm_upper(acc)
                phase_sum += bound
                if bound > growth:
                    growth = bound
            if bound >= 1:
                all_anchors_contract = False
            if phase == 0:
                anchor = bound
                tail_sum = phase_sum
        if all_anchors_contract:
            break
        unroll *= 2
        if unroll > 256:
            raise SystemInvalid(
                "period inverse products do not contract (no unrolling below 256 works)"
            )
    return _Analysis(
        levels=tuple(levels),
        preperiod_len=p,
        unrolled_len=length,
        anchor_contraction_up=anchor,
        period_growth_up=growth,
        anchor_tail_sum_up=tail_sum,
        gamma_up=max(l.gamma_up for l in levels),
        zero_floor_sq=min(l.zero_norm_sq_floor for l in levels),
    )


# --- validation -------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    errors: tuple[tuple[str, int], ...]   # (code, 1-based distinct-level index)
    iota: float                            # max ||M_n^{-1}|| (display value)
    gamma: float                           # max digit norm
    existence_bound: float                 # gamma * iota / (1 - iota)


def _sigma_min(m: Mat2) -> float:
    a = [float(x) for x in m.entries()]
    s = sum(x * x for x in a)
    d = a[0] * a[3] - a[1] * a[2]
    disc = max(s * s - 4.0 * d * d, 0.0)
    return math.sqrt(max((s - math.sqrt(disc)) / 2.0, 0.0))


def validate(sys: MoranSystem) -> ValidationReport:
    """Expansion and contraction checks plus the existence bound.

    Every level must be expanding with ||M^{-1}|| < 1 (exact tests); the
    report carries iota = max ||M_n^{-1}||, gamma = max ||d||, and the
    support radius bound gamma * iota / (1 - iota) for the limit measure.
    """
    errors: list[tuple[str, int]] = []
    iota = 0.0
    gamma = 0.0
    for i, (m, d) in enumerate(sys.distinct_levels(), start=1):
        if not is_expanding(m):
            errors.append(("NotExpanding", i))
        elif not inverse_norm_below_one(m):
            errors.append(("NormAtLeastOne", i))
        else:
            iota = max(iota, 1.0 / _sigma_min(m))
        gamma = max(gamma, math.sqrt(float(d.max_norm_sq())))
    if errors:
        bound = math.inf
    else:
        bound = gamma * iota / (1.0 - iota)
    return ValidationReport(
        ok=not errors,
        errors=tuple(errors),
        iota=iota if not errors else math.inf,
        gamma=gamma,
        existence_bound=bound,
    )


def require_valid(sys: MoranSystem) -> None:
    report = validate(sys)
    if not report.ok:
        code, level = report.errors[0]
        raise SystemInvalid(f"{code} at level {level}")


# --- canonical reduction ----------------------------------------------------


def reduce_canonical(sys: MoranSystem) -> MoranSystem:
    """Rewrite a structured-digit system over the canonical four-point set.

    With Q_n the digit basis at level n (Q_0 = I), the reduced matrices are
    Mt_n = Q_n^{-1} M_n Q_{n-1} and every digit set becomes the canonical
    one; the measure is unchanged.  The result is eventually periodic with
    the preperiod extended by one level.
    """
    from .digitsets import canonical_digits

    for _, d in sys.distinct_levels():
        if not isinstance(d, StructuredDigitSet):
            raise OutOfTheoryError("canonical reduction needs structured digit sets")

    p, r = len(sys.preperiod), len(sys.period)
    d0 = canonical_digits()

    def q_of(n: int) -> Mat2:
        if n == 0:
            return Mat2.identity()
        return sys.level(n)[1].q_matrix()  # type: ignore[union-attr]

    def reduced(n: int) -> Level:
        m = sys.level(n)[0]
        return (q_of(n).inverse() * m * q_of(n - 1), d0)

    new_pre = tuple(reduced(n) for n in range(1, p + 2))
    new_period = tuple(reduced(n) for n in range(p + 2, p + r + 2))
    return MoranSystem(new_pre, new_period)


# --- Fourier product with certified truncation ------------------------------


@dataclass(frozen=True)
class FourierResult:
    value: complex
    bound: float       # certified bound on |true value - reported value|
    levels: int        # truncation level J


def _is_exact_point(xi) -> bool:
    return all(isinstance(c, (int, Fraction)) for c in xi)


def fourier(sys: MoranSystem, xi, eps: float) -> FourierResult:
    """Truncated Fourier product with certified tail bound <= eps.

    Each omitted factor differs from 1 by at most 2 pi gamma ||eta_j||, and
    partial products have modulus <= 1, so the error of stopping at level J
    is at most 2 pi gamma sum_{j>J} ||eta_j||.  Future orbit norms are
    bounded at anchor levels (preperiod end plus multiples of the unrolled
    period): with K the anchor contraction and S the sum of partial-run
    norms, the tail beyond an anchor with certified orbit bound B is at most
    2 pi gamma B S / (1 - K).  Truncation stops at the first anchor meeting
    eps.
    """
    if not eps > 0:
        raise ValueError("tolerance must be positive")
    if _is_exact_point(xi):
        cert = fourier_zero_exact(sys, xi)
        if cert is not None:
            return FourierResult(0j, 0.0, cert.level)
    ana = _analysis(sys)
    contraction = float(ana.anchor_contraction_up)
    gamma = float(ana.gamma_up)
    tail_factor = (
        2.0 * math.pi * gamma * float(ana.anchor_tail_sum_up) / (1.0 - contraction)
    )

    x, y = float(xi[0]), float(xi[1])
    bound = math.hypot(x, y) * (1.0 + 1e-12)
    value = complex(1.0)
    j = 0
    # preperiod: advance level by level, growing the orbit bound per level
    while j < ana.preperiod_len:
        j += 1
        lv = ana.level_data(j)
        a, b, c, d = lv.minv_t_float
        x, y = a * x + b * y, c * x + d * y
        bound *= float(lv.inv_norm_up) * (1.0 + 1e-12)
        value *= eval_mask(lv.digits, (x, y))
    # periodic region: test at anchors, consume one unrolled period at a time
    while True:
        tail = tail_factor * bound
        if tail <= eps:
            return FourierResult(value, tail, j)
        if j >= MAX_SCAN_LEVELS:
            raise RuntimeError("truncation level exceeded hard cap")
        for _ in range(ana.unrolled_len):
            j += 1
            lv = ana.level_data(j)
            a, b, c, d = lv.minv_t_float
            x, y = a * x + b * y, c * x + d * y
            value *= eval_mask(lv.digits, (x, y))
        bound *= contraction * (1.0 + 1e-12)


# --- exact zero certificates -------------------------------------------------


@dataclass(frozen=True)
class ZeroCertificate:
    """Witness that xi lies in the zero set of the Fourier transform.

    level j and eta with m_{D_j}(eta) = 0 and M_1^* ... M_j^* eta = xi,
    all exact.
    """

    level: int
    witness: tuple[Fraction, Fraction]
    xi: tuple[Fraction, Fraction]

    def verify(self, sys: MoranSystem) -> bool:
        acc = Mat2.identity()
        for n in range(1, self.level + 1):
            acc = acc * sys.level(n)[0].transpose()
        if acc.apply(self.witness) != self.xi:
            return False
        return digit_mask_zero(sys.level(self.level)[1], self.witness)


def fourier_zero_exact(sys: MoranSystem, xi) -> Optional[ZeroCertificate]:
    """Exact zero-set membership with certificate, or None.

    Scans eta_j = (M_1^* ... M_j^*)^{-1} xi; returns at the first level whose
    mask vanishes at eta_j.  Once past the preperiod, every future orbit norm
    is at most G ||eta_j|| with G the largest consecutive-run contraction
    product over the period, so when G ||eta_j|| drops below the smallest
    norm any mask zero can have, no later level can vanish and the scan
    stops with None.
    """
    ana = _analysis(sys)
    growth_sq = ana.period_growth_up**2
    eta = (Fraction(xi[0]), Fraction(xi[1]))
    xi_frac = eta
    j = 0
    while True:
        if j >= MAX_SCAN_LEVELS:
            raise RuntimeError("zero scan exceeded hard cap")
        j += 1
        lv = ana.level_data(j)
        eta = lv.minv_t.apply(eta)
        eta = (Fraction(eta[0]), Fraction(eta[1]))
        if digit_mask_zero(lv.digits, eta):
            return ZeroCertificate(level=j, witness=eta, xi=xi_frac)
        if j >= ana.preperiod_len and norm_sq(eta) * growth_sq < ana.zero_floor_sq:
            return None


# --- words over scaled digit alphabets (the |det| = 4 families) -------------


@dataclass(frozen=True)
class TWord:
    """Eventually periodic word over {1..m} with scale list t_1 < ... < t_m.

    The word sigma selects digit sets D_n = t_{sigma_n} * canonical; the
    scale list is expected odd, pairwise coprime, strictly increasing and
    anchored at t_1 = 1 (violations are reported by `problems`, letting
    callers produce out-of-theory verdicts instead of hard errors).
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    t_values: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.period:
            raise ValueError("word period must be nonempty")
        m = len(self.t_values)
        if m == 0:
            raise ValueError("t_values must be nonempty")
        for letter in self.preperiod + self.period:
            if not (isinstance(letter, int) and 1 <= letter <= m):
                raise ValueError(f"letter {letter!r} outside alphabet 1..{m}")

    def problems(self) -> Optional[str]:
        ts = self.t_values
        if any(t % 2 == 0 for t in ts):
            return "scale values must be odd"
        if ts[0] != 1:
            return "scale list must start at t_1 = 1"
        if any(ts[i] >= ts[i + 1] for i in range(len(ts) - 1)):
            return "scale values must be strictly increasing"
        for i in range(len(ts)):
            for k in range(i + 1, len(ts)):
                if math.gcd(ts[i], ts[k]) != 1:
                    return f"scale values {ts[i]} and {ts[k]} are not coprime"
        return None

    def letter(self, n: int) -> int:
        if n < 1:
            raise ValueError("positions are 1-based")
        p = len(self.preperiod)
        if n <= p:
            return self.preperiod[n - 1]
        return self.period[(n - p - 1) % len(self.period)]

    def letters_used(self) -> set[int]:
        return set(self.preperiod) | set(self.period)

    def canonical(self) -> "TWord":
        pre, period = canonicalize_eventually_periodic(self.preperiod, self.period)
        return TWord(pre, period, self.t_values)

    def eventually_constant_letter(self) -> Optional[int]:
        """The tail letter if sigma is eventually constant, else None."""
        c = self.canonical()
        return c.period[0] if len(c.period) == 1 else None


def realize_word_system(
    word: TWord, matrix_preperiod: Sequence[Mat2], matrix_period: Sequence[Mat2]
) -> MoranSystem:
    """The Moran system with matrices from the given eventually periodic
    matrix sequence and digits D_n = t_{sigma_n} * canonical."""
    from .digitsets import scaled_canonical

    if not matrix_period:
        raise ValueError("matrix period must be nonempty")
    pre_len = max(len(word.preperiod), len(matrix_preperiod))
    r = math.lcm(len(word.period), len(matrix_period))

    def matrix_at(n: int) -> Mat2:
        p = len(matrix_preperiod)
        if n <= p:
            return matrix_preperiod[n - 1]
        return matrix_period[(n - p - 1) % len(matrix_period)]

    def level_at(n: int) -> Level:
        return (matrix_at(n), scaled_canonical(word.t_values[word.letter(n) - 1]))

    pre = tuple(level_at(n) for n in range(1, pre_len + 1))
    period = tuple(level_at(n) for n in range(pre_len + 1, pre_len + r + 1))
    return MoranSystem(pre, period)


def integer_periodic_zero_nonempty(
    word: TWord, matrices: Iterable[Mat2]
) -> tuple[bool, Optional[tuple[Fraction, Fraction]]]:
    """Whether the word's measure has nonempty integer periodic zero set.

    Under the |det| = 4 even-matrix hypotheses this holds iff every letter
    of sigma carries one common scale t != 1; the witness (1/t, 0) then lies
    in (1/t) * punctured residue grid, all of which sits in the periodic
    zero set.  Hypothesis failures raise OutOfTheoryError.
    """
    problem = word.problems()
    if problem:
        raise OutOfTheoryError(problem)
    mats = list(matrices)
    if not mats:
        raise OutOfTheoryError("no matrices supplied")
    for m in mats:
        if not is_expanding(m):
            raise OutOfTheoryError(f"matrix {m.rows()} is not expanding")
        if not in_gl2_2z(m):
            raise OutOfTheoryError(f"matrix {m.rows()} has an odd entry or det 0")
        if abs(m.det()) != 4:
            raise OutOfTheoryError(f"matrix {m.rows()} has |det| != 4")
        if not inverse_norm_below_one(m):
            raise OutOfTheoryError(f"matrix {m.rows()} has ||M^-1|| >= 1")
    letters = word.letters_used()
    if len(letters) != 1:
        return (False, None)
    t = word.t_values[next(iter(letters)) - 1]
    if abs(t) == 1:
        return (False, None)
    return (True, (Fraction(1, t), Fraction(0)))


# --- attractor sampling ------------------------------------------------------


def attractor_points(
    sys: MoranSystem, depth: int, cap: int = DEFAULT_POINT_CAP
) -> list[tuple[float, float]]:
    """All depth-k partial sums sum_{j<=k} M_1^{-1}...M_j^{-1} d_j (floats)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    count = 1
    for n in range(1, depth + 1):
        count *= len(sys.level(n)[1])
        if count > cap:
            raise CapExceeded(f"{count} attractor points exceed cap {cap}")
    points = [(0.0, 0.0)]
    prefix = [[1.0, 0.0], [0.0, 1.0]]
    for n in range(1, depth + 1):
        m, d = sys.level(n)
        inv = m.inverse().as_float_rows()
        prefix = [
            [
                prefix[0][0] * inv[0][0] + prefix[0][1] * inv[1][0],
                prefix[0][0] * inv[0][1] + prefix[0][1] * inv[1][1],
            ],
            [
                prefix[1][0] * inv[0][0] + prefix[1][1] * inv[1][0],
                prefix[1][0] * inv[0][1] + prefix[1][1] * inv[1][1],
            ],
        ]
        images = [
            (
                prefix[0][0] * dx + prefix[0][1] * dy,
                prefix[1][0] * dx + prefix[1][1] * dy,
            )
            for dx, dy in d.points()
        ]
        points = [(px + ix, py + iy) for px, py in points for ix, iy in images]
    return points
