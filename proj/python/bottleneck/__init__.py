"""Bottleneck Curie-Weiss models: exact magnetization laws, chains, limit predictions."""

from ._core import (
    BudgetExceeded,
    DilutedSpec,
    LogWeightTable,
    ThreeBlockSpec,
    TwoBlockSpec,
    a_weight,
    classify,
    enumerate_law,
    exact_table,
    free_energy,
    gamma_star,
    gamma_star_star,
    limit_law,
    log_binomial,
    m_of_c,
    pair_count_log_counts,
    run_chain,
    solve_cw,
    solve_cw_field,
    tv_distance,
    verify,
    well_mass,
)

__all__ = [
    "BudgetExceeded",
    "DilutedSpec",
    "LogWeightTable",
    "ThreeBlockSpec",
    "TwoBlockSpec",
    "a_weight",
    "classify",
    "enumerate_law",
    "exact_table",
    "free_energy",
    "gamma_star",
    "gamma_star_star",
    "limit_law",
    "log_binomial",
    "m_of_c",
    "pair_count_log_counts",
    "run_chain",
    "solve_cw",
    "solve_cw_field",
    "tv_distance",
    "verify",
    "well_mass",
]
