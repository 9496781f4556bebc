"""Heath-Brown's smoothed delta symbol.

With w a unit-mass bump on [1/2, 1],

    h(x, y) = sum_{j >= 1} (xj)^{-1} (w(xj) - w(|y|/(xj))),

which is a finite sum because w has compact support. The constant c_Q is
calibrated so that the expansion returns exactly 1 at n = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .forms.arithmetic import euler_phi, ramanujan_sum, ramanujan_values
from .numerics.windows import SmoothWindow, bump

__all__ = [
    "DeltaKernel",
    "DeltaConstructionError",
    "unit_weight",
    "h_eval",
    "calibrate_c_q",
    "make_kernel",
    "delta_eval",
    "delta_identity_scan",
    "q_cutoff",
    "h_partial",
    "DerivativeReport",
    "h_derivative_bounds",
]

# integral of the canonical bump over (1, 2)
_BUMP_MASS = 0.007029858406609657


class DeltaConstructionError(RuntimeError):
    pass


def unit_weight() -> SmoothWindow:
    """The canonical bump moved to [1/2, 1] and scaled to unit mass."""
    return SmoothWindow(0.5, 1.0, 2.0 / _BUMP_MASS, "delta-weight")


@dataclass(frozen=True)
class DeltaKernel:
    Q: int
    c_Q: float
    weight: SmoothWindow = field(default_factory=unit_weight)

    def h(self, x, y):
        return h_eval(self, x, y)

    def delta(self, n: int) -> float:
        return delta_eval(n, self.Q, kernel=self)


def _w(kernel_weight: SmoothWindow, t):
    return kernel_weight.eval(t)


def h_eval(kernel: DeltaKernel | None, x, y):
    """h(x, y) for x > 0; scalar or broadcast arrays.

    Terms with j >= max(1/x, 2|y|/x) vanish identically, so the sum stops there.
    """
    weight = kernel.weight if kernel is not None else unit_weight()
    xa, ya = np.broadcast_arrays(np.asarray(x, dtype=float), np.abs(np.asarray(y, dtype=float)))
    if np.any(xa <= 0):
        raise ValueError("h is defined for x > 0 only")
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa).astype(float)
    ya = np.atleast_1d(ya).astype(float)
    out = np.zeros(xa.shape)
    jmax = int(np.max(np.floor(np.maximum(1.0, 2.0 * ya) / xa))) if xa.size else 0
    for j in range(1, jmax + 1):
        xj = xa * j
        live = (xj < 1.0) | (xj < 2.0 * ya)
        if not live.any():
            continue
        xl, yl = xj[live], ya[live]
        first = _w(weight, xl)
        with np.errstate(divide="ignore", invalid="ignore"):
            second = np.where(yl > 0, _w(weight, yl / xl), 0.0)
        out[live] += (first - second) / xl
    if scalar:
        return float(out[0])
    return out


def calibrate_c_q(Q: int, weight: SmoothWindow | None = None) -> float:
    """c_Q = Q^2 / sum_{q < Q} phi(q) h(q/Q, 0)."""
    if Q <= 1:
        raise ValueError("Q must exceed 1")
    kern = DeltaKernel(Q, 1.0, weight or unit_weight())
    qs = np.arange(1, Q + 1)
    hv = h_eval(kern, qs / Q, 0.0)
    phis = np.array([euler_phi(int(q)) for q in qs], dtype=float)
    denom = math.fsum(phis * hv)
    if not denom > 0:
        raise DeltaConstructionError(f"non-positive normalizer {denom!r} for Q={Q}")
    return Q * Q / denom


@lru_cache(maxsize=64)
def make_kernel(Q: int) -> DeltaKernel:
    return DeltaKernel(Q, calibrate_c_q(Q))


def q_cutoff(n: int, Q: int) -> int:
    """Largest q that can contribute to the expansion at n."""
    return int(math.floor(Q * max(1.0, 2.0 * abs(n) / (Q * Q))))


def delta_eval(n: int, Q: int, kernel: DeltaKernel | None = None) -> float:
    kern = kernel or make_kernel(Q)
    if kern.Q != Q:
        raise ValueError("kernel was calibrated for a different Q")
    qmax = q_cutoff(n, Q)
    qs = np.arange(1, qmax + 1)
    cq = np.array([ramanujan_sum(int(q), int(n)) for q in qs], dtype=float)
    hv = h_eval(kern, qs / Q, n / (Q * Q))
    return kern.c_Q / (Q * Q) * math.fsum(cq * hv)


def delta_identity_scan(Q: int, ns) -> dict:
    """Evaluate the expansion over ``ns``; report the worst deviation from the indicator."""
    kern = make_kernel(Q)
    ns = np.asarray(list(ns), dtype=np.int64)
    vals = np.array([delta_eval(int(n), Q, kern) for n in ns])
    err = np.abs(vals - (ns == 0))
    k = int(np.argmax(err))
    return {"Q": Q, "c_Q": kern.c_Q, "values": vals, "n": ns, "max_error": float(err[k]), "argmax": int(ns[k])}


# -- finite-difference partials ------------------------------------------

_REL_STEP = {1: 1e-5, 2: 1e-4, 3: 1e-3}


def _central(order: int):
    """Offsets (in units of the step) and weights of the width-`order` central difference."""
    offs = np.array([order / 2.0 - m for m in range(order + 1)])
    wts = np.array([(-1) ** m * math.comb(order, m) for m in range(order + 1)], dtype=float)
    return offs, wts


def _mixed_fd(kernel, x: float, y: float, i: int, j: int, sx: float, sy: float) -> float:
    ox, wx = _central(i)
    oy, wy = _central(j)
    X = x + ox[:, None] * sx
    Y = y + oy[None, :] * sy
    vals = h_eval(kernel, X, Y)
    return float(wx @ vals @ wy) / (sx ** i * sy ** j)


def h_partial(kernel, x: float, y: float, i: int, j: int, rel_step: float | None = None) -> float:
    """d^{i+j} h / dx^i dy^j by central differences with one Richardson step."""
    order = i + j
    if order > 3:
        raise ValueError("finite differences limited to total order 3")
    if order == 0:
        return float(h_eval(kernel, x, y))
    rel = rel_step if rel_step is not None else _REL_STEP[order]
    sx = rel * x
    sy = rel * max(abs(y), x)
    coarse = _mixed_fd(kernel, x, y, i, j, sx, sy)
    fine = _mixed_fd(kernel, x, y, i, j, sx / 2, sy / 2)
    return (4.0 * fine - coarse) / 3.0


@dataclass
class DerivativeReport:
    i: int
    j: int
    constant: float  # sup |x^i y^j d^{i+j}h| * x
    envelope_ratio: dict  # N -> sup |d h| / envelope_N over the small-x regime
    points: int
    skipped: list = field(default_factory=list)
    values: np.ndarray | None = None


def _envelope(x, y, i, j, N):
    m = 1.0 if abs(y) == 0 else min(1.0, (x / abs(y)) ** N)
    extra = 0.0 if j == 0 else x ** N
    return x ** (-(1 + i + j)) * (extra + m)


def h_derivative_bounds(kernel, grid, i: int, j: int, margin: float = 1e-3, small_x: float = 0.1) -> DerivativeReport:
    """Empirical constants for the derivative bounds on h over ``grid`` = iterable of (x, y)."""
    if i + j > 3:
        raise ValueError("i + j must be at most 3")
    vals, const, skipped = [], 0.0, []
    ratio = {1: 0.0, 2: 0.0}
    used = 0
    for x, y in grid:
        edge = max(1.0, 2.0 * abs(y))
        if abs(x - edge) < margin * edge:
            skipped.append((x, y, "support boundary"))
            continue
        d = h_partial(kernel, x, y, i, j)
        used += 1
        vals.append(d)
        const = max(const, abs(x ** i * y ** j * d) * x)
        if abs(y) > 0 and x <= small_x * min(1.0, abs(y)):
            for N in (1, 2):
                ratio[N] = max(ratio[N], abs(d) / _envelope(x, y, i, j, N))
    return DerivativeReport(i, j, const, ratio, used, skipped, np.array(vals))
