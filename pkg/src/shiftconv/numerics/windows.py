"""C-infinity bump windows with closed-form derivatives.

The canonical bump is w(x) = exp(g(x)) on (1, 2) with

    g(x) = -1/((x-1)(2-x)) = -1/(x-1) - 1/(2-x),

so g^(m) is explicit and the ratios r_n = w^(n)/w obey

    r_n = sum_{k<n} C(n-1, k) g^(k+1) r_{n-1-k},   r_0 = 1.

Expanding the numerator of w^(n) as a polynomial in x instead loses most of
its digits to cancellation from about n = 5 on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["J_MAX", "bump", "bump_deriv", "SmoothWindow", "canonical_window"]

J_MAX = 8


def _ratios(u: np.ndarray, v: np.ndarray, j: int) -> np.ndarray:
    """w^(j)/w with u = x - 1 and v = 2 - x."""
    # g^(m) = -m! [(-1)^m u^-(m+1) + v^-(m+1)]
    g = [None] + [-math.factorial(m) * ((-1) ** m / u ** (m + 1) + 1.0 / v ** (m + 1)) for m in range(1, j + 1)]
    r = [np.ones_like(u)]
    for n in range(1, j + 1):
        r.append(sum(math.comb(n - 1, k) * g[k + 1] * r[n - 1 - k] for k in range(n)))
    return r[j]


def bump_deriv(x, j: int):
    """j-th derivative of the canonical bump at ``x`` (scalar or array)."""
    if j < 0 or j > J_MAX:
        raise ValueError(f"derivative order {j} outside 0..{J_MAX}")
    xa = np.asarray(x, dtype=float)
    out = np.zeros(xa.shape)
    inside = (xa > 1.0) & (xa < 2.0)
    if np.any(inside):
        xi = xa[inside]
        u, v = xi - 1.0, 2.0 - xi
        g0 = -(1.0 / u + 1.0 / v)
        if j == 0:
            out[inside] = np.exp(g0)
        else:
            r = _ratios(u, v, j)
            # combine in logs so huge ratios meet tiny exponentials without overflow
            with np.errstate(divide="ignore"):
                out[inside] = np.sign(r) * np.exp(g0 + np.log(np.abs(r)))
    if np.ndim(x) == 0:
        return float(out)
    return out


def bump(x):
    return bump_deriv(x, 0)


@dataclass(frozen=True)
class SmoothWindow:
    """An affine image of the canonical bump: amplitude * bump(1 + (x - a)/(b - a)).

    ``a`` and ``b`` are the support endpoints.
    """

    a: float = 1.0
    b: float = 2.0
    amplitude: float = 1.0
    name: str = "bump"

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    def _u(self, x):
        return 1.0 + (np.asarray(x, dtype=float) - self.a) / (self.b - self.a)

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        if self.amplitude == 0.0:
            return np.zeros(np.shape(x)) if np.ndim(x) else 0.0
        return self.amplitude * bump_deriv(self._u(x), 0)

    def deriv(self, x, j: int):
        if self.amplitude == 0.0:
            return np.zeros(np.shape(x)) if np.ndim(x) else 0.0
        scale = (1.0 / (self.b - self.a)) ** j
        return self.amplitude * scale * bump_deriv(self._u(x), j)

    def rescaled(self, a: float, b: float, amplitude: float | None = None) -> "SmoothWindow":
        return SmoothWindow(a, b, self.amplitude if amplitude is None else amplitude, self.name)

    def integral(self) -> float:
        from .quadrature import integrate

        return integrate(self.eval, self.a, self.b).value.real

    def sup_norm(self, grid: int = 4001) -> float:
        xs = np.linspace(self.a, self.b, grid)
        return float(np.max(np.abs(self.eval(xs))))


def canonical_window() -> SmoothWindow:
    return SmoothWindow()
