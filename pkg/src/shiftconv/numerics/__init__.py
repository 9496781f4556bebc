from .bessel import bessel_j, bessel_j_asymptotic, bessel_j_series, x_switch
from .compensated import NeumaierAccumulator, csum, fsum
from .quadrature import (
    QuadratureConfig,
    QuadratureError,
    QuadResult,
    fourier_transform,
    fourier_transform_many,
    integrate,
    oscillatory_integral,
)
from .windows import J_MAX, SmoothWindow, bump, bump_deriv, canonical_window

__all__ = [
    "J_MAX", "NeumaierAccumulator", "QuadResult", "QuadratureConfig", "QuadratureError",
    "SmoothWindow", "bessel_j", "bessel_j_asymptotic", "bessel_j_series", "bump", "bump_deriv",
    "canonical_window", "csum", "fourier_transform", "fourier_transform_many", "fsum",
    "integrate", "oscillatory_integral", "x_switch",
]
