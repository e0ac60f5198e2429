"""Frequency-domain rate certificates for inexact gradient descent."""

from igdcert._core import (
    ProblemSpec,
    alpha_minus,
    alpha_plus,
    certify,
    classify_regime,
    f_offbyone,
    f_sector,
    lower_bound_witness,
    prop2_rate,
    prop3_sharp_rate,
    rho_gd,
    rho_gd_noisy,
    simulate,
    __version__,
)

__all__ = [
    "ProblemSpec",
    "alpha_minus",
    "alpha_plus",
    "certify",
    "classify_regime",
    "f_offbyone",
    "f_sector",
    "lower_bound_witness",
    "prop2_rate",
    "prop3_sharp_rate",
    "rho_gd",
    "rho_gd_noisy",
    "simulate",
    "__version__",
]
