"""Records comparing a computed quantity against its main term."""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ResidualSample", "make_sample"]


@dataclass(frozen=True)
class ResidualSample:
    """One evaluation point of a quantity with a known leading term.

    residual is the plain floating-point difference value - main_term;
    scaled_residual divides it by x**scale_exponent (exponent 0 leaves
    it unscaled).
    """

    x: float
    value: float
    main_term: float
    residual: float
    scale_exponent: float
    scaled_residual: float


def make_sample(x: float, value: float, main_term: float,
                scale_exponent: float = 0.0) -> ResidualSample:
    residual = value - main_term
    if scale_exponent == 0.0:
        scaled = residual
    else:
        scaled = residual / float(x) ** scale_exponent
    return ResidualSample(
        x=float(x),
        value=float(value),
        main_term=float(main_term),
        residual=float(residual),
        scale_exponent=float(scale_exponent),
        scaled_residual=float(scaled),
    )
