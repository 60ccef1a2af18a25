"""Compound Poisson CDO tranche pricing with importance-sampled Monte Carlo."""

from ._core import (
    ModelParams,
    Contract,
    Tranche,
    TranchePrice,
    VarianceReport,
    __version__,
    price,
    def_pv,
    prem_pv_1bp,
    phi,
    phi0,
    standard_tranches,
    variance_report,
    is_finite_variance,
    simulate,
    canonical_config,
)

__all__ = [
    "ModelParams",
    "Contract",
    "Tranche",
    "TranchePrice",
    "VarianceReport",
    "__version__",
    "price",
    "def_pv",
    "prem_pv_1bp",
    "phi",
    "phi0",
    "standard_tranches",
    "variance_report",
    "is_finite_variance",
    "simulate",
    "canonical_config",
]
