"""Numeric verifiers for Poisson summation, holomorphic Voronoi summation,
and additive-twist cancellation of Hecke eigenvalues."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .forms.eigenform import Eigenform
from .numerics.bessel import bessel_j
from .numerics.compensated import csum
from .numerics.quadrature import QuadratureConfig, fourier_transform_many, integrate
from .numerics.windows import SmoothWindow, canonical_window

__all__ = [
    "DEFAULT_C",
    "log_cut",
    "PoissonReport",
    "poisson_lhs",
    "poisson_verify",
    "VoronoiTruncationError",
    "VoronoiReport",
    "voronoi_lhs",
    "voronoi_rhs",
    "voronoi_verify",
    "voronoi_integral",
    "additive_twist",
    "TwistScan",
    "TwistReport",
    "twist_scan",
]

DEFAULT_C = 10.0


def log_cut(arg: float, C: float = DEFAULT_C) -> float:
    """C log^3(arg), the stand-in for an arbitrarily small power of ``arg``."""
    return C * math.log(max(arg, math.e)) ** 3


def _e(x):
    return np.exp(2j * np.pi * x)


# -- Poisson --------------------------------------------------------------

@dataclass
class PoissonReport:
    a: int
    q: int
    X: float
    lhs: complex
    rhs: complex
    abs_error: float
    rel_error: float  # relative to the l1 mass sum |W(n/X)|
    rel_error_lhs: float  # relative to |lhs|; meaningless when lhs cancels to roundoff
    mass: float
    tail: float  # |X sum over the block beyond the cut|, relative to mass
    cut: int
    terms: int
    quad_error: float


def poisson_lhs(W: SmoothWindow, X: float, a: int, q: int) -> tuple[complex, float]:
    lo, hi = W.support
    n = np.arange(math.ceil(lo * X), math.floor(hi * X) + 1)
    wv = W.eval(n / X)
    # reduce a*n mod q exactly before forming the phase
    ph = _e(((a * n) % q) / q)
    return csum(wv * ph), math.fsum(np.abs(wv))


def poisson_verify(W: SmoothWindow | None, X: float, a: int, q: int, C: float = DEFAULT_C) -> PoissonReport:
    """Compare sum e(an/q) W(n/X) with X sum_{m = -a (q)} W-hat(mX/q)."""
    if q < 1:
        raise ValueError("q must be positive")
    if math.gcd(a, q) != 1:
        raise ValueError(f"gcd({a}, {q}) != 1")
    W = W or canonical_window()
    lhs, mass = poisson_lhs(W, X, a, q)
    cut = int(math.floor(q / X * log_cut(q * X, C)))
    # dual indices m = -a + q t, covering |m| <= 2 cut so the tail block can be measured
    r = (-a) % q
    t_lo = math.ceil((-2 * cut - 1 - r) / q)
    t_hi = math.floor((2 * cut + 1 - r) / q)
    ms = r + q * np.arange(t_lo, t_hi + 1)
    vals, errs = fourier_transform_many(W, ms * X / q)
    main = np.abs(ms) <= cut
    rhs = X * csum(vals[main])
    tail = X * abs(csum(vals[~main])) / mass if (~main).any() else 0.0
    abs_err = abs(lhs - rhs)
    return PoissonReport(
        a, q, X, lhs, rhs, abs_err, abs_err / mass,
        abs_err / abs(lhs) if lhs != 0 else math.inf,
        mass, tail, cut, int(main.sum()), float(X * errs[main].sum()),
    )


# -- Voronoi --------------------------------------------------------------

class VoronoiTruncationError(RuntimeError):
    def __init__(self, message: str, partial: complex):
        super().__init__(message)
        self.partial = partial


@dataclass
class VoronoiReport:
    weight: int
    a: int
    q: int
    X: float
    lhs: complex
    rhs: complex
    abs_error: float
    rel_error: float
    tail: float
    cut: int
    base_cut: int
    quad_error: float
    max_integral_over_trivial: float


def voronoi_lhs(form: Eigenform, a: int, q: int, W: SmoothWindow, X: float) -> complex:
    lo, hi = W.support
    n = np.arange(max(1, math.ceil(lo * X)), math.floor(hi * X) + 1)
    if n[-1] >= form.prec:
        raise ValueError(f"form precision {form.prec} too small; need {n[-1] + 1}")
    lam = form.normalized[n]
    return csum(lam * W.eval(n / X) * _e(((a * n) % q) / q))


def voronoi_integral(order: int, n: int, q: int, W: SmoothWindow, X: float,
                     config: QuadratureConfig | None = None):
    """X * integral of W(u) J_order(4 pi sqrt(n X u)/q) du over the support of W."""
    lo, hi = W.support
    scale = 4 * math.pi * math.sqrt(n * X) / q

    def f(u):
        return W.eval(u) * bessel_j(order, scale * np.sqrt(u))

    res = integrate(f, lo, hi, config=config, bandwidth=math.sqrt(n * X / lo) / q)
    return X * res.value.real, X * res.error


def voronoi_rhs(form: Eigenform, a: int, q: int, W: SmoothWindow | None = None, X: float = 100.0,
                C: float = DEFAULT_C, tail_tol: float = 1e-10, max_doublings: int = 6,
                config: QuadratureConfig | None = None, _detail: bool = False):
    """Dual side (2 pi i^k / q) sum_n lam(n) e(-abar n/q) X int W(u) J_{k-1}(4 pi sqrt(nXu)/q) du.

    The n-sum starts at the cut (q^2/X) C log^3(qX) and is extended in
    doublings until the last block contributes less than ``tail_tol`` of the
    running total.
    """
    if math.gcd(a, q) != 1:
        raise ValueError(f"gcd({a}, {q}) != 1")
    W = W or canonical_window()
    abar = pow(a, -1, q) if q > 1 else 0
    k = form.weight
    pref = 2 * math.pi * (1j ** k) / q
    base = max(1, int(math.floor(q * q / X * log_cut(q * X, C))))
    terms: list[complex] = []
    qerr = 0.0
    trivial = X * W.sup_norm()
    worst = 0.0
    done = 0
    cut = base
    tail = math.inf
    for _ in range(max_doublings + 1):
        if cut >= form.prec:
            raise ValueError(f"form precision {form.prec} too small for dual cut {cut}")
        block = []
        for n in range(done + 1, cut + 1):
            val, err = voronoi_integral(k - 1, n, q, W, X, config)
            worst = max(worst, abs(val) / trivial)
            qerr += abs(form.normalized[n]) * err
            block.append(form.normalized[n] * val * complex(_e(((-abar * n) % q) / q)))
        block_sum = csum(block) if block else 0j
        total = csum(terms) if terms else 0j
        terms.extend(block)
        if done > 0:
            tail = abs(block_sum) / max(abs(total + block_sum), 1e-300)
            if tail < tail_tol:
                break
        done = cut
        cut *= 2
    else:
        raise VoronoiTruncationError(
            f"dual tail {tail:.2e} above {tail_tol:.0e} after {max_doublings} doublings",
            pref * csum(terms),
        )
    value = pref * csum(terms)
    if _detail:
        return value, tail, done if done else cut, base, abs(pref) * qerr, worst
    return value


def voronoi_verify(form: Eigenform, a: int, q: int, X: float, W: SmoothWindow | None = None,
                   C: float = DEFAULT_C, tail_tol: float = 1e-10,
                   config: QuadratureConfig | None = None) -> VoronoiReport:
    W = W or canonical_window()
    lhs = voronoi_lhs(form, a, q, W, X)
    rhs, tail, cut, base, qerr, worst = voronoi_rhs(form, a, q, W, X, C, tail_tol, config=config, _detail=True)
    d = abs(lhs - rhs)
    return VoronoiReport(form.weight, a, q, X, lhs, rhs, d, d / abs(lhs) if lhs else math.inf,
                         tail, cut, base, qerr, worst)


# -- additive twists ------------------------------------------------------

def additive_twist(form: Eigenform, alpha: float, X: int) -> complex:
    if X > form.max_n:
        raise ValueError(f"X={X} exceeds form precision")
    n = np.arange(1, X + 1)
    return csum(form.normalized[1:X + 1] * _e(alpha * n))


@dataclass
class TwistScan:
    alphas: list
    xgrid: list
    values: np.ndarray | None = None  # shape (len(alphas), len(xgrid))

    def __post_init__(self):
        if not len(self.alphas) or not len(self.xgrid):
            raise ValueError("twist scan grids must be non-empty")

    @classmethod
    def random(cls, count: int, xgrid, seed: int = 0) -> "TwistScan":
        rng = np.random.default_rng(seed)
        return cls(list(rng.random(count)), list(xgrid))


@dataclass
class TwistReport:
    alphas: np.ndarray
    xgrid: np.ndarray
    values: np.ndarray
    ratios: np.ndarray  # |S(alpha, X)| / (sqrt X log 2X)
    sup_ratio: np.ndarray  # per X
    zero_ratio: np.ndarray  # |sum lam(n)| / X^(1/3 + 0.05), per X
    extra: dict = field(default_factory=dict)


def _prefix_sums_at(vals: np.ndarray, xgrid) -> list[complex]:
    out, prev, acc_r, acc_i = [], 0, [], []
    for X in xgrid:
        acc_r.append(math.fsum(vals[prev:X].real))
        acc_i.append(math.fsum(vals[prev:X].imag))
        prev = X
        out.append(complex(math.fsum(acc_r), math.fsum(acc_i)))
    return out


def twist_scan(form: Eigenform, scan: TwistScan, zero_exponent: float = 1 / 3 + 0.05) -> TwistReport:
    xgrid = sorted(int(x) for x in scan.xgrid)
    top = xgrid[-1]
    if top > form.max_n:
        raise ValueError(f"X={top} exceeds form precision")
    lam = form.normalized[1:top + 1]
    n = np.arange(1, top + 1)
    vals = np.empty((len(scan.alphas), len(xgrid)), dtype=complex)
    for i, alpha in enumerate(scan.alphas):
        vals[i] = _prefix_sums_at(lam * _e(alpha * n), xgrid)
    xs = np.array(xgrid, dtype=float)
    ratios = np.abs(vals) / (np.sqrt(xs) * np.log(2 * xs))
    zero = np.array([abs(v) for v in _prefix_sums_at(lam.astype(complex), xgrid)]) / xs ** zero_exponent
    scan.values = vals
    return TwistReport(np.asarray(scan.alphas), xs, vals, ratios, ratios.max(axis=0), zero)
