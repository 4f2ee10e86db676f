"""Python access to the epcgh C++ core."""

from ._epcgh import (
    classify_maxima,
    cli,
    covering_radius,
    delta_k,
    dis_gamma,
    disc_estimate,
    duality_witness,
    edge_predicate,
    estimate_distortion,
    gamma_odd,
    h_closed,
    h_sum,
    psi,
    rho3,
    rho3_extrema,
    run_criterion,
    table_dis_gamma,
    verify_bstar,
    zeta_m,
)

__all__ = [
    "classify_maxima",
    "cli",
    "covering_radius",
    "delta_k",
    "dis_gamma",
    "disc_estimate",
    "duality_witness",
    "edge_predicate",
    "estimate_distortion",
    "gamma_odd",
    "h_closed",
    "h_sum",
    "psi",
    "rho3",
    "rho3_extrema",
    "run_criterion",
    "table_dis_gamma",
    "verify_bstar",
    "zeta_m",
]
