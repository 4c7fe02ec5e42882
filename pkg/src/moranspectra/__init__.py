"""Spectral analysis of planar Moran measures.

Exact lattice arithmetic, mask-polynomial zero sets, Hadamard triples,
certified Fourier products, candidate spectra, and theorem-backed
spectrality classifiers for eventually periodic systems.
"""

from .lattice import (
    Mat2,
    ResidueSet,
    det,
    in_gl2_2z,
    inverse_norm_below_one,
    is_expanding,
    mat_product,
    residue_set,
)
from .digitsets import (
    DigitCollision,
    Degenerate,
    GenericDigitSet,
    OddityViolation,
    StructuredDigitSet,
    canonical_digits,
    scaled_canonical,
    sum_set,
    validate_structured,
)
from .mask import (
    CardinalityMismatch,
    SingularMatrix,
    UnityRootSum,
    eval_mask,
    is_hadamard_triple,
    mask_zero_exact,
    mask_zero_exact_generic,
    unity_sum_is_zero,
)
from .moran import (
    CapExceeded,
    FourierResult,
    MoranSystem,
    OutOfTheoryError,
    SystemInvalid,
    TWord,
    ValidationReport,
    ZeroCertificate,
    attractor_points,
    canonical_representation,
    conjugate_system,
    fourier,
    fourier_zero_exact,
    integer_periodic_zero_nonempty,
    realize_word_system,
    reduce_canonical,
    validate,
)
from .spectra import (
    CompletenessReport,
    OracleReport,
    OrthogonalityResult,
    SpectrumTower,
    TowerUnavailable,
    build_lattice_spectrum,
    build_tower,
    completeness_report,
    completeness_sum,
    discrete_spectrum_oracle,
    enumerate_tower,
    verify_orthogonality,
)
from .classify import (
    NOT_SPECTRAL,
    OUT_OF_THEORY,
    SPECTRAL,
    Verdict,
    classify,
    classify_thm11,
    classify_thm14,
    classify_thm15,
    classify_thm16,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
