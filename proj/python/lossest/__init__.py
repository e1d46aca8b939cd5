"""Unbiased loss estimation criteria for linear model selection.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from lossest._core import (  # noqa: F401
    CanonicalForm,
    EstimatorSpec,
    FitResult,
    IdentityReport,
    NoiseLaw,
    RegressionData,
    StarLaw,
    aic_gaussian,
    delta0,
    delta0_inv,
    delta0_inv_elliptical,
    factorize,
    finite_difference_divergence,
    fit,
    list_checks,
    ls_fit,
    mallows_cp,
    report,
    run_check,
    sample,
    sample_star,
    select,
    tau2,
    variance_estimate,
)

__all__ = [
    "CanonicalForm",
    "EstimatorSpec",
    "FitResult",
    "IdentityReport",
    "NoiseLaw",
    "RegressionData",
    "StarLaw",
    "aic_gaussian",
    "delta0",
    "delta0_inv",
    "delta0_inv_elliptical",
    "factorize",
    "finite_difference_divergence",
    "fit",
    "list_checks",
    "ls_fit",
    "mallows_cp",
    "report",
    "run_check",
    "sample",
    "sample_star",
    "select",
    "tau2",
    "variance_estimate",
]

__version__ = "0.1.0"
