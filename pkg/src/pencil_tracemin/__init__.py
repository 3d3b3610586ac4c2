"""Trace minimization over two Hermitian matrix pairs.

Decides when inf trace(Ahat X^H A X) over {X : Bhat X^H B X = I} is finite,
evaluates the closed form from typed finite eigenvalues, builds minimizers,
and certifies divergence with explicit feasible families.
"""

__version__ = "0.1.0"

from .matcore import (
    HermitianMatrix,
    Inertia,
    MatrixPair,
    ProblemInstance,
    ToleranceSet,
    check_feasibility,
    inertia,
    load_pair,
    load_problem,
    pair_from_arrays,
    problem_from_arrays,
    random_congruence,
    validate_hermitian,
)
from .definiteness import DefinitenessReport, definiteness_interval, lambda_min_shift
from .spectral import (
    CongruentDiagonalization,
    TypedEigenvalue,
    TypedSpectrum,
    congruent_diagonalize,
    deflate_common_nullspace,
    eigh,
    typed_spectrum,
)
from .hyperbolic import (
    ChShFactors,
    SignatureJ,
    chsh_decompose,
    complete_j_basis,
    polar_from_W,
    sample_feasible,
    sample_j_unitary,
)
from .genpairs import BlockSpec, GroundTruth, assemble, block
from .tracemin import (
    ExcludedCase,
    FeasibleSampler,
    InfimumResult,
    PropernessReport,
    SemidefiniteVerdict,
    check_excluded,
    fan_min_product,
    feasibility_residual,
    infimum,
    equal_inertia_value,
    minimizer,
    pad_problem,
    pair_semidefiniteness,
    properness,
    sample_feasible_original,
)
from .witness import (
    CertificationReport,
    WitnessFamily,
    build_witness,
    certify_unbounded,
    evaluate_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
