"""Entanglement verification of noisy N00N states."""

from .channels import (
    apply_atmospheric_loss,
    apply_dephasing,
    dephasing_factor,
    gaussian_lambda,
    make_moments,
)
from .fock import (
    NoisyNoonOperator,
    ProductVector,
    expectation,
    from_spec,
    interference_operator,
    make_noisy_noon,
    noon_state,
    product_vector,
    to_dense,
    vacuum,
)
from .multipartite import MultiModeState, dephase_one_mode, tripartite_witness, w_state
from .nonclassicality import glauber_p, p_is_classical, ppt_min_eigenvalue
from .quasiprob import QuasiProbability, build_basis, gram_matrix, negativity, reconstruct, solve_quasiprob
from .sep import SepSolution, SepSolutionSet, sep_residual, solve_sep_analytic, solve_sep_numeric
from .witness import WitnessReport, dephasing_threshold, interference_criterion, witness_value

__version__ = "0.1.0"

__all__ = [
    "apply_atmospheric_loss",
    "apply_dephasing",
    "dephasing_factor",
    "gaussian_lambda",
    "make_moments",
    "NoisyNoonOperator",
    "ProductVector",
    "expectation",
    "from_spec",
    "interference_operator",
    "make_noisy_noon",
    "noon_state",
    "product_vector",
    "to_dense",
    "vacuum",
    "MultiModeState",
    "dephase_one_mode",
    "tripartite_witness",
    "w_state",
    "glauber_p",
    "p_is_classical",
    "ppt_min_eigenvalue",
    "QuasiProbability",
    "build_basis",
    "gram_matrix",
    "negativity",
    "reconstruct",
    "solve_quasiprob",
    "SepSolution",
    "SepSolutionSet",
    "sep_residual",
    "solve_sep_analytic",
    "solve_sep_numeric",
    "WitnessReport",
    "dephasing_threshold",
    "interference_criterion",
    "witness_value",
]
