"""Spectra of random Lindblad generators and their random-matrix surrogates."""

from __future__ import annotations

from .basis import HermitianBasis, sun_basis
from .boundary import (
    GAUSSIAN,
    TWO_SEMICIRCLES,
    BoundaryCurve,
    BoundaryError,
    boundary_curve,
    ellipse_sum_boundary_numeric,
    empirical_boundary,
    hausdorff_distance,
    lemon,
    stieltjes_gaussian,
    stieltjes_two_semicircles,
)
from .elliptic import elliptic_e, elliptic_k
from .ensembles import RngStream, ginibre_complex, ginibre_real, goe, gue, haar_unitary, random_prob_vector
from .experiment import ExperimentConfig, run_batch
from .generator import (
    LindbladSuperop,
    RmtSurrogate,
    build_rmt_surrogate,
    build_superop,
    build_superop_direct,
    build_superop_kron,
    channel_superop,
    translation_matrix,
)
from .kossakowski import JumpSet, KossakowskiMatrix, SamplerSpec, jump_decomposition, sample_kossakowski
from .spectra import (
    DensityHistogram,
    SpectrumSample,
    bulk,
    histogram2d,
    inside_fraction,
    l1_distance,
    lindblad_eigvals,
    rescale,
    spectral_gap,
)

__version__ = "0.1.0"
