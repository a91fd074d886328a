"""Gaussian covariance-matrix engine for two-stage parametric-amplifier rings."""

__version__ = "0.1.0"

from .entropy import (
    EntropyReport,
    Subset,
    e2n,
    entropy_difference,
    gaussian_entropy,
    reduce_consecutive,
    reduced_cm,
)
from .moments import MomentsResult, mean_photon_number, number_difference_variance
from .network import BlockKind, NetworkSpec, block_of, build_network, closed_form_cm_4
from .ppt import (
    AnalysisReport,
    Bipartition,
    PPTResult,
    classify_partitions,
    enumerate_bipartitions,
    gme_verdict,
    ppt_nu,
)
from .symplectic import (
    CovarianceMatrix,
    TMSParams,
    apply_symplectic,
    is_physical,
    partial_transpose,
    symplectic_eigenvalues,
    tms_symplectic,
    vacuum_cm,
)
