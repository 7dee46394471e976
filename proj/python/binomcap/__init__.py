from ._binomcap import (
    asymptote,
    best_admissible_L,
    beta_binomial_log_pmf,
    c_star,
    capacity_lower_bound,
    capacity_upper_bound,
    central_mass,
    chi2_direct,
    gap,
    gap_cap,
    mixture_chi2_lower_bound,
    mutual_information,
    parseval_chi2,
    run_verify_suite,
    solve,
    support_size_lower_bound,
    support_size_lower_bound_log_n,
    zeta,
)

__all__ = [
    "asymptote",
    "best_admissible_L",
    "beta_binomial_log_pmf",
    "c_star",
    "capacity_lower_bound",
    "capacity_upper_bound",
    "central_mass",
    "chi2_direct",
    "gap",
    "gap_cap",
    "mixture_chi2_lower_bound",
    "mutual_information",
    "parseval_chi2",
    "run_verify_suite",
    "solve",
    "support_size_lower_bound",
    "support_size_lower_bound_log_n",
    "zeta",
]
