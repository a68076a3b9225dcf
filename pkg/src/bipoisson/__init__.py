"""Compound bi-free Poisson distributions.

Exact bi-non-crossing partition combinatorics, moment/cumulant transforms
on two-faced families, compound Poisson laws with their convolution
semigroup, and numerical verification models (random bi-matrix ensembles
and truncated Fock-space operators).
"""

from .errors import CapExceededError, MissingEntryError, ShapeMismatchError
from .partitions import (
    LEFT,
    RIGHT,
    BNCPartition,
    ChiShape,
    SetPartition,
    catalan,
    enumerate_bnc,
    enumerate_nc,
    enumerate_partitions,
    is_noncrossing,
    ker_map,
    kreweras_complement,
    mobius_nc,
    mobius_nc_one,
    s_chi_of,
)
from .cumulants import (
    Alphabet,
    CumulantTable,
    MomentFunctional,
    Word,
    all_words,
    cumulant_of_word,
    kappa_from_moments,
    moment_of_word,
    moments_from_kappa,
    phi_pi,
    reorder_by_s_chi,
)
from .poisson import (
    CbpSpec,
    Distribution,
    cbp_cumulants,
    cbp_moments,
    compress,
    compression_oracle,
    convolve,
    limit_theorem_moments,
    poisson_approximation,
    psd_check,
    semigroup_element,
)
from .matrix_models import (
    AtomLaw,
    EnsembleSpec,
    RealizedEnsemble,
    SizeReport,
    VariableSpec,
    WordEstimate,
    build_wishart_model,
    estimate_empirical_cumulants,
    sample_gue,
    sample_haar_unitary,
)
from .fock import (
    FockBasis,
    FockCumulantRow,
    annihilation,
    build_w_operators,
    creation,
    fock_moments,
    vacuum_moment,
    verify_fock_cumulants,
)

__all__ = [
    "CapExceededError",
    "MissingEntryError",
    "ShapeMismatchError",
    "LEFT",
    "RIGHT",
    "BNCPartition",
    "ChiShape",
    "SetPartition",
    "catalan",
    "enumerate_bnc",
    "enumerate_nc",
    "enumerate_partitions",
    "is_noncrossing",
    "ker_map",
    "kreweras_complement",
    "mobius_nc",
    "mobius_nc_one",
    "s_chi_of",
    "Alphabet",
    "CumulantTable",
    "MomentFunctional",
    "Word",
    "all_words",
    "cumulant_of_word",
    "kappa_from_moments",
    "moment_of_word",
    "moments_from_kappa",
    "phi_pi",
    "reorder_by_s_chi",
    "CbpSpec",
    "Distribution",
    "cbp_cumulants",
    "cbp_moments",
    "compress",
    "compression_oracle",
    "convolve",
    "limit_theorem_moments",
    "poisson_approximation",
    "psd_check",
    "semigroup_element",
    "AtomLaw",
    "EnsembleSpec",
    "RealizedEnsemble",
    "SizeReport",
    "VariableSpec",
    "WordEstimate",
    "build_wishart_model",
    "estimate_empirical_cumulants",
    "sample_gue",
    "sample_haar_unitary",
    "FockBasis",
    "FockCumulantRow",
    "annihilation",
    "build_w_operators",
    "creation",
    "fock_moments",
    "vacuum_moment",
    "verify_fock_cumulants",
]
