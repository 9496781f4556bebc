"""The x-integral left behind by Poisson summation in h, and its decay in the dual variable."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..delta import DeltaKernel, h_eval, make_kernel
from ..numerics.quadrature import QuadratureConfig, QuadResult, integrate
from ..numerics.windows import SmoothWindow, canonical_window

__all__ = ["JParams", "REFERENCE_POINT", "j_integral", "JDecayReport", "j_decay", "EnvelopeReport", "j_envelope"]


@dataclass(frozen=True)
class JParams:
    n: float
    u: float
    v: float
    q1: int
    q2: int
    H: float
    Q1: float
    Q2: float


# q1 = q2 = 1 on the N = 500, H = 30, Q = 23 reference sum, centred on the diagonal u = n + 1.5H, v = n + 3H
REFERENCE_POINT = JParams(n=750.0, u=750.0 + 45.0, v=750.0 + 90.0, q1=1, q2=1, H=30.0, Q1=23.0, Q2=23.0)


def j_integral(h: int, n: float, u: float, v: float, q1: int, q2: int, H: float, Q1: float, Q2: float,
               kernel: DeltaKernel | None = None, V: SmoothWindow | None = None,
               config: QuadratureConfig | None = None) -> QuadResult:
    """int V(x) h(q1/Q1, (n + xH - u)/Q1^2) h(q2/Q2, (n + 2xH - v)/Q2^2) e(-h H x/(q1 q2)) dx."""
    if min(q1, q2) < 1 or min(H, Q1, Q2) <= 0:
        raise ValueError("parameters must be positive")
    kern = kernel or make_kernel(max(2, int(round(Q1))))
    V = V or canonical_window()
    x0, x1 = V.support

    def f(x):
        a = h_eval(kern, q1 / Q1, (n + x * H - u) / (Q1 * Q1))
        b = h_eval(kern, q2 / Q2, (n + 2 * x * H - v) / (Q2 * Q2))
        return V.eval(x) * a * b

    # kernel features have width about q Q / 4 in the shift, i.e. q Q/(4H) in x
    band = 4.0 * H / (min(q1 * Q1, q2 * Q2))
    return integrate(f, x0, x1, freq=-h * H / (q1 * q2), config=config, bandwidth=band)


def _tight(scale: float) -> QuadratureConfig:
    return QuadratureConfig(abs_tol=max(scale, 1e-300) * 1e-12, rel_tol=1e-10, max_subdivisions=200000)


@dataclass
class JDecayReport:
    h_test: int
    value0: float
    value_test: float
    ratio: float
    hs: np.ndarray
    values: np.ndarray
    bound0: float  # C1 C2 (Q1/q1)(Q2/q2) int V
    h_constants: tuple  # C_i = (q_i/Q_i) sup |h| along the integration path


def j_decay(p: JParams = REFERENCE_POINT, multiplier: float = 8.0, hmax: int | None = None,
            kernel=None) -> JDecayReport:
    """|J(h)| / |J(0)| at h = multiplier (q1 q2/H + 1), plus the profile up to ``hmax``."""
    r = p.q1 * p.q2
    h_test = int(math.ceil(multiplier * (r / p.H + 1)))
    top = max(h_test, hmax or h_test)
    args = (p.n, p.u, p.v, p.q1, p.q2, p.H, p.Q1, p.Q2)
    v0 = j_integral(0, *args, kernel=kernel)
    cfg = _tight(abs(v0.value))
    vals = np.array([abs(j_integral(h, *args, kernel=kernel, config=cfg).value) for h in range(top + 1)])
    c1, c2 = _path_constants(p, kernel)
    bound0 = c1 * c2 * (p.Q1 / p.q1) * (p.Q2 / p.q2) * canonical_window().integral()
    return JDecayReport(h_test, abs(v0.value), vals[h_test], vals[h_test] / abs(v0.value),
                        np.arange(top + 1), vals, bound0, (c1, c2))


def _path_constants(p: JParams, kernel=None, points: int = 4001) -> tuple[float, float]:
    kern = kernel or make_kernel(max(2, int(round(p.Q1))))
    x = np.linspace(1.0, 2.0, points)
    x1, x2 = p.q1 / p.Q1, p.q2 / p.Q2
    h1 = h_eval(kern, x1, (p.n + x * p.H - p.u) / p.Q1 ** 2)
    h2 = h_eval(kern, x2, (p.n + 2 * x * p.H - p.v) / p.Q2 ** 2)
    return float(x1 * np.max(np.abs(h1))), float(x2 * np.max(np.abs(h2)))


@dataclass
class EnvelopeReport:
    j: int
    constant: float  # sup_h |J(h)| / (Q1 Q2 (r/(hH) + 1/h)^j), fine grid
    constant_coarse: float  # same over every other h
    constant_half: float  # fine grid up to hmax/2
    stable: bool
    argmax: int


def j_envelope(p: JParams = REFERENCE_POINT, js=(1, 2), hmax: int = 40, kernel=None,
               stability: float = 0.1) -> list[EnvelopeReport]:
    """Fit the integration-by-parts envelope constants and compare two h grids."""
    args = (p.n, p.u, p.v, p.q1, p.q2, p.H, p.Q1, p.Q2)
    v0 = j_integral(0, *args, kernel=kernel)
    cfg = _tight(abs(v0.value))
    hs = np.arange(1, hmax + 1)
    vals = np.array([abs(j_integral(int(h), *args, kernel=kernel, config=cfg).value) for h in hs])
    r = p.q1 * p.q2
    out = []
    for j in js:
        env = p.Q1 * p.Q2 * (r / (hs * p.H) + 1.0 / hs) ** j
        ratio = vals / env
        fine = float(ratio.max())
        coarse = float(ratio[::2].max())
        half = float(ratio[:max(1, hmax // 2)].max())
        stable = max(abs(fine - coarse), abs(fine - half)) <= stability * fine
        out.append(EnvelopeReport(j, fine, coarse, half, bool(stable and math.isfinite(fine)),
                                  int(hs[int(np.argmax(ratio))])))
    return out
