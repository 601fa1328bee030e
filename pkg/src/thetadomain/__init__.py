"""Certified numerics for the partial theta function: evaluation with error
bounds, zero location and counting, the double-zero spectrum, and a
machine-checked containment domain for all zeros."""

from .series import (
    DEFAULT_PRECISION,
    DomainError,
    EvaluatedValue,
    Precision,
    QParam,
    TruncationPlan,
    g_eval,
    theta_dq,
    theta_dz,
    theta_dzq,
    theta_dzz,
    theta_eval,
    theta_poly_eval,
    theta_star_product,
    theta_star_series,
    truncation_cutoff,
)

__version__ = "0.1.0"
