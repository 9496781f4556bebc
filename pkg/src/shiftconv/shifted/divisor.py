"""Exact divisor correlations and the quadratic-in-log fit of Ingham's asymptotic."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..forms.arithmetic import divisor_table, sigma_minus1

__all__ = ["divisor_correlation", "triple_correlation", "InghamReport", "ingham_fit", "INGHAM_CONSTANT"]

INGHAM_CONSTANT = 6.0 / math.pi ** 2


def _table(kind_k: int, top: int, table=None) -> np.ndarray:
    if table is not None and table.size > top:
        return table
    if kind_k == 2:
        return divisor_table("d", top)
    return divisor_table("d_k", top, kind_k)


def divisor_correlation(X: int, h: int, k: int = 2, table=None) -> int:
    """D_k(X, h) = sum_{n <= X} d_k(n) d_k(n + h)."""
    if X < 1 or h < 0:
        raise ValueError("need X >= 1 and h >= 0")
    d = _table(k, X + h, table)
    return int(np.dot(d[1:X + 1], d[1 + h:X + h + 1]))


def triple_correlation(X: int, h: int, table=None) -> int:
    """T_h(X) = sum_{h < n <= X} d(n - h) d(n) d(n + h); the sum starts at n = h + 1."""
    if h < 1:
        raise ValueError("h must be positive")
    d = _table(2, X + h, table)
    if X <= h:
        return 0
    n = np.arange(h + 1, X + 1)
    return int(np.sum(d[n - h] * d[n] * d[n + h]))


@dataclass
class InghamReport:
    h: int
    xgrid: np.ndarray
    values: np.ndarray  # D_2(X, h)
    coefficients: np.ndarray  # D/X = c2 log^2 X + c1 log X + c0
    leading: float
    target: float
    rel_error: float


def ingham_fit(h: int, xgrid, table=None) -> InghamReport:
    xs = np.array(sorted(int(x) for x in xgrid))
    if xs.size < 4:
        raise ValueError("the quadratic-in-log fit needs at least 4 grid points")
    d = _table(2, int(xs[-1]) + h, table)
    vals = np.array([divisor_correlation(int(x), h, table=d) for x in xs])
    L = np.log(xs.astype(float))
    coef = np.polyfit(L, vals / xs, 2)
    target = INGHAM_CONSTANT * float(sigma_minus1(h))
    return InghamReport(h, xs, vals, coef, float(coef[0]), target, abs(coef[0] - target) / target)
