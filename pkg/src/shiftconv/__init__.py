"""Exact modular-form coefficients, delta-symbol and summation-formula verifiers,
and numerical experiments on double shifted convolution sums."""

__version__ = "0.1.0"
