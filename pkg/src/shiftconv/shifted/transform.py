"""Derivative of the Voronoi-dual kernel transform in its shift variable.

The J-Bessel analogue of the transform met after dualizing the m and l sums:

    Hc(w) = int V(x) e(-hd H x/r) A(w, x) B(w, x) dx,
    A(w, x) = int W2(t/N) h(q1/Q1, (w + xH - t)/Q1^2) J_{k-1}(4 pi sqrt(y t)) dt,
    B(w, x) = int W3(t/N) h(q2/Q2, (w + 2xH - t)/Q2^2) J_{k-1}(4 pi sqrt(z t)) dt.

All three integrals use trapezoid rules (every integrand vanishes to all orders
at the ends of its range). The t-lattice step equals the x-step times H, so
the kernel h is tabulated once per w and every A(w, x_i) is a correlation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..delta import h_eval, make_kernel
from ..forms.eigenform import Eigenform
from ..numerics.bessel import bessel_j
from ..numerics.windows import SmoothWindow, canonical_window

__all__ = ["TransformSetup", "transform_value", "DerivativeCheck", "transform_derivative_check"]


@dataclass(frozen=True)
class TransformSetup:
    order: int
    N: int
    H: int
    Q1: int
    Q2: int
    q1: int
    q2: int
    y: float
    z: float
    dual_h: int = 0
    x_nodes: int = 128
    V: SmoothWindow = canonical_window()
    W2: SmoothWindow = canonical_window()
    W3: SmoothWindow = canonical_window()

    @classmethod
    def for_form(cls, form: Eigenform, q: int, X: int, H: int | None = None, **kw) -> "TransformSetup":
        Q = math.ceil(math.sqrt(X))
        H = H or math.ceil(X ** 0.6)
        return cls(form.weight - 1, X, H, Q, Q, q, q, kw.pop("y", 1.0 / q ** 2), kw.pop("z", 1.0 / q ** 2), **kw)


def _side(setup: TransformSetup, w: float, which: int, x: np.ndarray, step: float) -> np.ndarray:
    N, H = setup.N, setup.H
    win = setup.W2 if which == 1 else setup.W3
    Q = setup.Q1 if which == 1 else setup.Q2
    q = setup.q1 if which == 1 else setup.q2
    mult = 1.0 if which == 1 else 2.0
    dual = setup.y if which == 1 else setup.z
    if win.amplitude == 0.0 or dual == 0.0:
        return np.zeros(x.size)
    t_lo, t_hi = win.support[0] * N, win.support[1] * N
    t = t_lo + step * np.arange(1, int(round((t_hi - t_lo) / step)))
    g = win.eval(t / N) * bessel_j(setup.order, 4 * math.pi * np.sqrt(dual * t)) * step
    # shifts w + mult x_i H - t_j all lie on the lattice w + step * integer
    base = mult * x[0] * H - t[-1]
    span = int(round((mult * x[-1] * H - t[0] - base) / step)) + 1
    taus = w + base + step * np.arange(span)
    kern = h_eval(make_kernel(Q), q / Q, taus / (Q * Q))
    offs = np.rint((mult * x * H - t[-1] - base) / step).astype(int)
    # A_i = sum_j g_j kern[offs_i + (J-1-j)]
    corr = np.correlate(kern, g[::-1], mode="valid")  # corr[k] = sum_j kern[k + j] g[J-1-j]
    return corr[offs]


def transform_value(setup: TransformSetup, w: float) -> float:
    s = setup.x_nodes
    x0, x1 = setup.V.support
    x = x0 + (x1 - x0) * np.arange(1, s) / s
    step = (x1 - x0) * setup.H / s
    A = _side(setup, w, 1, x, step)
    B = _side(setup, w, 2, x, step)
    r = setup.q1 * setup.q2
    ph = np.exp(-2j * math.pi * setup.dual_h * setup.H * x / r)
    val = np.sum(setup.V.eval(x) * ph * A * B) * ((x1 - x0) / s)
    return float(val.real) if setup.dual_h == 0 else val


@dataclass
class DerivativeCheck:
    w_grid: np.ndarray
    values: np.ndarray
    deriv: np.ndarray  # step delta
    deriv_half: np.ndarray  # step delta/2
    ratio: float  # sup |dHc/dw| / N
    consistency: float  # sup |D(delta) - D(delta/2)| / sup |D(delta/2)|


def transform_derivative_check(form: Eigenform | None, q: int, X: int, w_grid, delta: float = 0.5,
                               setup: TransformSetup | None = None) -> DerivativeCheck:
    st = setup or TransformSetup.for_form(form, q, X)
    ws = np.asarray(list(w_grid), dtype=float)

    def central(w, d):
        return (transform_value(st, w + d) - transform_value(st, w - d)) / (2 * d)

    vals = np.array([transform_value(st, w) for w in ws])
    D1 = np.array([central(w, delta) for w in ws])
    D2 = np.array([central(w, delta / 2) for w in ws])
    top = float(np.max(np.abs(D2)))
    cons = float(np.max(np.abs(D1 - D2)) / top) if top > 0 else 0.0
    return DerivativeCheck(ws, vals, D1, D2, top / st.N, cons)
