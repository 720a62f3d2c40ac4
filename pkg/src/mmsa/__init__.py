"""Sensitivity analysis for discrete models with monomial parameterizations.

The package encodes Bayesian networks, staged trees, and Bayes-classifier
structures as monomial models over a finite atom space, applies covariation
schemes to parameter variations, measures divergences between the original
and varied distributions, classifies multi-way analyses, and certifies
numerically when proportional covariation is the divergence-minimizing
projection.
"""

from .core import (
    AtomEvent,
    ExponentMatrix,
    MonomialModel,
    ParameterVector,
    SimplexPartition,
    ValidationReport,
    atom_distribution,
    atomic_probability,
    check_multilinear,
    check_regular,
    event_probability,
    validate,
)
from .covariation import (
    CovariationResult,
    VariationSpec,
    covary,
    covary_block_order_preserving,
    covary_block_proportional,
    covary_block_uniform,
)
from .divergences import (
    PhiFunction,
    cd_distance,
    divergence_between,
    kl_divergence,
    phi_divergence,
    register_phi,
)
from .compilers import (
    BayesNetSpec,
    ClassifierSpec,
    StagedTreeSpec,
    TreeVertex,
    Variable,
    atoms_matching,
    bn_layout,
    build_classifier,
    compile_bn,
    compile_staged_tree,
)
from .sensitivity import (
    AnalysisClass,
    AnalysisReport,
    IndexGeometry,
    ProjectionResult,
    SensitivityCurve,
    analyze,
    classify_analysis,
    i_projection_oracle,
    identity_gap,
    index_geometry,
    pythagorean_residual,
    sample_sensitivity_candidate,
    sensitivity_function,
    support_partition,
    sweep,
    verify_naive_bayes_optimality,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
