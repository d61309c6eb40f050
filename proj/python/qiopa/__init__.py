"""Pair-extraction numerics for the quantum-injected optical parametric amplifier."""

from ._core import (
    GainParams,
    LossConvention,
    LossSpec,
    PolarizationQubit,
    anticlone_fidelity,
    clone_fidelity,
    concurrence,
    h_input,
    hs_distance,
    pair_analytic,
    pair_extracted_rho,
    pair_extracted_rho3,
    reduced_pair,
    three_qubit,
    uhlmann_fidelity,
    unot_on_pair,
    verify,
    werner_fit,
    werner_p,
)

__all__ = [
    "GainParams",
    "LossConvention",
    "LossSpec",
    "PolarizationQubit",
    "anticlone_fidelity",
    "clone_fidelity",
    "concurrence",
    "h_input",
    "hs_distance",
    "pair_analytic",
    "pair_extracted_rho",
    "pair_extracted_rho3",
    "reduced_pair",
    "three_qubit",
    "uhlmann_fidelity",
    "unot_on_pair",
    "verify",
    "werner_fit",
    "werner_p",
]
