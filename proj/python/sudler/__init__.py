"""Sudler products prod 2|sin(pi r alpha)| for alpha = [0; b, b, b, ...]."""

from ._core import (
    BudgetError,
    C,
    DomainError,
    EvalWithBound,
    G,
    beta,
    certify_above,
    convergents,
    decompose,
    growth_verdict,
    ostrowski,
    perturbed_product,
    product,
    product_rational,
    roots_near_zero,
    zeckendorff,
)

__all__ = [
    "BudgetError",
    "C",
    "DomainError",
    "EvalWithBound",
    "G",
    "beta",
    "certify_above",
    "convergents",
    "decompose",
    "growth_verdict",
    "ostrowski",
    "perturbed_product",
    "product",
    "product_rational",
    "roots_near_zero",
    "zeckendorff",
]
