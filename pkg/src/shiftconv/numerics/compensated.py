"""Order-fixed, compensated reductions.

``math.fsum`` is exactly rounded, so every reduction here is reproducible
regardless of how callers block their data.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = ["fsum", "csum", "fsum_rows", "csum_rows", "NeumaierAccumulator"]


def fsum(values) -> float:
    return math.fsum(np.asarray(values, dtype=float).ravel())


def csum(values) -> complex:
    v = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(v.real), math.fsum(v.imag))


def fsum_rows(values) -> np.ndarray:
    a = np.asarray(values, dtype=float)
    return np.array([math.fsum(row) for row in a.reshape(a.shape[0], -1)])


def csum_rows(values) -> np.ndarray:
    a = np.asarray(values, dtype=complex)
    a = a.reshape(a.shape[0], -1)
    return np.array([complex(math.fsum(r.real), math.fsum(r.imag)) for r in a])


class NeumaierAccumulator:
    """Running compensated sum for values that arrive one at a time."""

    def __init__(self):
        self.total = 0.0
        self.comp = 0.0

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.comp += (self.total - t) + x
        else:
            self.comp += (x - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.comp
