"""Candidate spectra: Hadamard towers, the |det| = 4 lattice spectrum,
exact orthogonality certificates, and completeness diagnostics.

Two constructions with deliberately different labels:

* `build_tower` stacks per-level companion sets L_j = (1/2) M_j^* F_2 into
  finite sets Lambda_k = { sum A_j l_j }.  Orthogonality of every truncation
  is certified exactly, but the tower is only an *orthogonal candidate*: for
  the constant (2I, canonical) system its union fills one quadrant while the
  unique spectrum through 0 is the full integer lattice.
* `build_lattice_spectrum` enumerates the lattice spectrum of the two-scale
  constant-tail family (tail in GL(2,2Z) with |det| = 4), which carries a
  completeness proof; it refuses systems whose scales fail the divisibility
  criterion.

Completeness itself is never reported as a boolean: `completeness_sum`
returns the truncated quadratic sum at a point with explicit tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .classify import SPECTRAL, classify_thm16, thm16_shape
from .digitsets import StructuredDigitSet
from .lattice import Mat2, Vec2, in_gl2_2z
from .mask import is_hadamard_triple, unity_sum_is_zero_ints
from .moran import (
    CapExceeded,
    DEFAULT_POINT_CAP,
    MoranSystem,
    OutOfTheoryError,
    fourier,
    fourier_zero_exact,
)

FracVec = tuple[Fraction, Fraction]

F2 = ((0, 0), (1, 0), (0, 1), (1, 1))


class TowerUnavailable(OutOfTheoryError):
    """A level >= 2 matrix is outside GL(2,2Z), so no half-lattice companion
    tower exists (consistent with the even-entry necessity)."""

    def __init__(self, level: int, message: str):
        super().__init__(message)
        self.level = level


def _half_star_f2(m: Mat2) -> tuple[FracVec, ...]:
    mt = m.transpose()
    out = []
    for v in F2:
        x, y = mt.apply(v)
        out.append((Fraction(x, 2), Fraction(y, 2)))
    return tuple(out)


@dataclass(frozen=True)
class SpectrumTower:
    """Per-level companion sets for Lambda_k = { sum_{j<=k} A_j l_j }.

    A_j = M_1^* ... M_{j-1}^* (A_1 = I); companions live in (1/2) Z^2 and are
    integral from level 2 on.  Every level's Hadamard property is verified
    exactly before construction succeeds.  Label: orthogonal candidate.
    """

    system: MoranSystem
    label: str = "orthogonal candidate"

    def companions(self, j: int) -> tuple[FracVec, ...]:
        return _half_star_f2(self.system.level(j)[0])


def build_tower(sys: MoranSystem) -> SpectrumTower:
    """Construct and exactly verify the half-lattice companion tower."""
    levels = sys.distinct_levels()
    for _, d in levels:
        if not isinstance(d, StructuredDigitSet):
            raise OutOfTheoryError("towers need structured digit sets")
    p, r = len(sys.preperiod), len(sys.period)
    for n in range(2, p + r + 2):
        m, _ = sys.level(n)
        if not in_gl2_2z(m):
            raise TowerUnavailable(
                n, f"level {n} matrix {[list(row) for row in m.rows()]} is not in GL(2,2Z)"
            )
    tower = SpectrumTower(sys)
    for n in range(1, p + r + 1):
        m, d = sys.level(n)
        if not is_hadamard_triple(m, d, tower.companions(n)):
            raise OutOfTheoryError(f"level {n} companion set is not Hadamard")
    return tower


def enumerate_tower(
    tower: SpectrumTower, k: int, cap: int = DEFAULT_POINT_CAP
) -> list[FracVec]:
    """The 4^k points { sum_{j<=k} A_j l_j : l_j in L_j }, exactly.

    Raises CapExceeded past the configured point cap and ValueError if the
    sums collide (they cannot for a verified tower).
    """
    if k < 1:
        raise ValueError("depth must be >= 1")
    if 4**k > cap:
        raise CapExceeded(f"4^{k} tower points exceed cap {cap}")
    sys = tower.system
    points: list[FracVec] = [(Fraction(0), Fraction(0))]
    a = Mat2.identity()
    for j in range(1, k + 1):
        images = [a.apply(l) for l in tower.companions(j)]
        points = [
            (px + ix, py + iy) for px, py in points for ix, iy in images
        ]
        a = a * sys.level(j)[0].transpose()
    if len(set(points)) != len(points):
        raise ValueError("tower enumeration produced duplicate points")
    return points


def build_lattice_spectrum(
    sys: MoranSystem, box: int, cap: int = DEFAULT_POINT_CAP
) -> list[FracVec]:
    """Enumerate the lattice spectrum of a two-scale constant-tail family
    inside [-box, box]^2.

    The spectrum is (1/t2) (L + M_1^* Z^2) with L = (1/2) M_1^* F_2: the
    companion lattice is constructed for the system rescaled by 1/t2, and
    dividing by t2 transports it back to the unscaled measure.  Requires the
    divisibility criterion (verdict Spectral); otherwise OutOfTheoryError.
    """
    shape = thm16_shape(sys)
    if shape is None:
        raise OutOfTheoryError("not a two-scale constant-tail scaled family")
    m1, m2, t1, t2 = shape
    verdict = classify_thm16(m1, m2, t1, t2)
    if verdict.outcome != SPECTRAL:
        raise OutOfTheoryError(f"lattice spectrum unavailable: {verdict.detail}")

    m1t = m1.transpose()
    base = [
        (Fraction(x, 2), Fraction(y, 2))
        for x, y in (m1t.apply(v) for v in F2)
    ]
    m1t_inv = m1t.inverse()
    bound = Fraction(abs(t2)) * box
    points: list[FracVec] = []
    for lx, ly in base:
        # k must satisfy (l + M1^t k) / t2 in the box; bound k via the
        # preimage of the shifted box corners.
        corners = [
            m1t_inv.apply((sx * bound - lx, sy * bound - ly))
            for sx in (-1, 1)
            for sy in (1, -1)
        ]
        k1_min = math.floor(min(c[0] for c in corners))
        k1_max = math.ceil(max(c[0] for c in corners))
        k2_min = math.floor(min(c[1] for c in corners))
        k2_max = math.ceil(max(c[1] for c in corners))
        for k1 in range(k1_min, k1_max + 1):
            for k2 in range(k2_min, k2_max + 1):
                wx, wy = m1t.apply((k1, k2))
                x = Fraction(lx + wx, t2)
                y = Fraction(ly + wy, t2)
                if abs(x) <= box and abs(y) <= box:
                    points.append((x, y))
    points = sorted(set(points))
    if len(points) > cap:
        raise CapExceeded(f"{len(points)} lattice points exceed cap {cap}")
    return points


@dataclass(frozen=True)
class OrthogonalityResult:
    ok: bool
    failing_pair: Optional[tuple[FracVec, FracVec]]
    pairs_checked: int
    distinct_differences: int

    def __bool__(self) -> bool:
        return self.ok


def verify_orthogonality(sys: MoranSystem, points: Sequence[Vec2]) -> OrthogonalityResult:
    """Certify that every difference of distinct points lies in the zero set.

    Differences repeat heavily in lattice-like candidate sets, so verdicts
    are memoized per difference (the zero set is symmetric under negation);
    the first failing pair in enumeration order is reported.
    """
    pts = [(Fraction(p[0]), Fraction(p[1])) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("candidate spectrum has repeated points")
    memo: dict[FracVec, bool] = {}
    pairs = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            pairs += 1
            diff = (pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
            key = diff if diff > (Fraction(0), Fraction(0)) else (-diff[0], -diff[1])
            verdict = memo.get(key)
            if verdict is None:
                verdict = fourier_zero_exact(sys, key) is not None
                memo[key] = verdict
            if not verdict:
                return OrthogonalityResult(False, (pts[i], pts[j]), pairs, len(memo))
    return OrthogonalityResult(True, None, pairs, len(memo))


def completeness_sum(
    sys: MoranSystem, points: Sequence[Vec2], xi, eps: float
) -> float:
    """Q(xi) = sum_{lambda} |mu^(xi + lambda)|^2 over the finite candidate set.

    Per-term Fourier tolerance is eps / #points; summation order is the
    given point order, so reports are reproducible.
    """
    if not eps > 0:
        raise ValueError("tolerance must be positive")
    if not points:
        return 0.0
    per_term = eps / len(points)
    x, y = float(xi[0]), float(xi[1])
    total = 0.0
    for lx, ly in points:
        val = fourier(sys, (x + float(lx), y + float(ly)), per_term).value
        total += abs(val) ** 2
    return total


@dataclass(frozen=True)
class CompletenessReport:
    """Truncated quadratic sums at sample points, with the metadata needed to
    read them: the final truncation size, the per-sum tolerance, and whether
    the sums grew monotonically along the nested truncations (they must; the
    terms are nonnegative)."""

    samples: tuple[tuple[float, float], ...]
    q_values: tuple[float, ...]
    truncation_points: int
    eps: float
    monotone_in_truncation: bool


def completeness_report(
    sys: MoranSystem,
    nested_sets: Sequence[Sequence[Vec2]],
    samples: Sequence,
    eps: float,
) -> CompletenessReport:
    """Evaluate Q over a nested chain of candidate truncations.

    `nested_sets` must be increasing by inclusion (e.g. tower truncations
    Lambda_1 c Lambda_2 c ... or growing lattice boxes); the report carries
    the Q values at the largest truncation and the monotonicity flag across
    the chain.
    """
    if not nested_sets:
        raise ValueError("need at least one candidate set")
    xs = [(float(x), float(y)) for x, y in samples]
    monotone = True
    final_q: list[float] = []
    for xi in xs:
        prev = -1.0
        for idx, pts in enumerate(nested_sets):
            q = completeness_sum(sys, pts, xi, eps)
            if q < prev - 1e-9:
                monotone = False
            prev = q
            if idx == len(nested_sets) - 1:
                final_q.append(q)
    return CompletenessReport(
        samples=tuple(xs),
        q_values=tuple(final_q),
        truncation_points=len(nested_sets[-1]),
        eps=eps,
        monotone_in_truncation=monotone,
    )


@dataclass(frozen=True)
class OracleReport:
    unitary: bool
    residual: float
    exact_checked: bool

    def __bool__(self) -> bool:
        return self.unitary


def discrete_spectrum_oracle(
    sys: MoranSystem,
    n: int,
    candidate: Sequence[Vec2],
    tol: float = 1e-10,
    cap: int = 4,
) -> OracleReport:
    """Brute-force spectral-pair check at level n.

    Builds the normalized exponential matrix between the 4^n atoms of the
    level-n finite convolution and the candidate points, and tests unitarity:
    numerically (max residual of H*H - I) and, for rational candidates,
    exactly via vanishing sums of unit roots on every off-diagonal inner
    product.
    """
    if n < 1 or n > cap:
        raise CapExceeded(f"oracle level {n} outside 1..{cap}")
    atoms: list[FracVec] = [(Fraction(0), Fraction(0))]
    prefix = Mat2.identity()
    for j in range(1, n + 1):
        m, d = sys.level(j)
        prefix = prefix * m.inverse()
        images = [prefix.apply(p) for p in d.points()]
        atoms = [(ax + ix, ay + iy) for ax, ay in atoms for ix, iy in images]
    size = len(atoms)
    if len(set(atoms)) != size:
        raise ValueError("level-n convolution atoms collide; weights would merge")
    pts = [(Fraction(p[0]), Fraction(p[1])) for p in candidate]
    if len(pts) != size:
        raise ValueError(f"candidate has {len(pts)} points, expected {size}")

    a = np.array([[float(x), float(y)] for x, y in atoms])
    lam = np.array([[float(x), float(y)] for x, y in pts])
    h = np.exp(2j * np.pi * (a @ lam.T)) / math.sqrt(size)
    residual = float(np.abs(h.conj().T @ h - np.eye(size)).max())

    # Exact off-diagonal vanishing over a common denominator.
    qa = 1
    for x, y in atoms:
        qa = math.lcm(qa, x.denominator, y.denominator)
    ql = 1
    for x, y in pts:
        ql = math.lcm(ql, x.denominator, y.denominator)
    q = qa * ql
    atoms_i = [(int(x * qa), int(y * qa)) for x, y in atoms]
    pts_i = [(int(x * ql), int(y * ql)) for x, y in pts]
    exact_ok = True
    for i in range(size):
        if not exact_ok:
            break
        for j in range(i + 1, size):
            dx = pts_i[i][0] - pts_i[j][0]
            dy = pts_i[i][1] - pts_i[j][1]
            if not unity_sum_is_zero_ints(
                (ax * dx + ay * dy for ax, ay in atoms_i), q
            ):
                exact_ok = False
                break

    return OracleReport(
        unitary=bool(residual < tol and exact_ok),
        residual=residual,
        exact_checked=True,
    )
