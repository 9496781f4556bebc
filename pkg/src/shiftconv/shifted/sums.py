"""Direct evaluation of shifted convolution sums and the residue character sum."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..forms.eigenform import Eigenform
from ..numerics.windows import SmoothWindow, canonical_window

__all__ = [
    "PrecisionError",
    "ShiftedSumSpec",
    "single_shift_sum",
    "averaged_sum",
    "character_sum",
    "character_sum_bruteforce",
]


class PrecisionError(ValueError):
    def __init__(self, required: int, available: int):
        super().__init__(f"coefficients needed up to n={required - 1}; forms hold prec={available}, need prec >= {required}")
        self.required = required
        self.available = available


@dataclass(frozen=True)
class ShiftedSumSpec:
    """S = (1/H) sum_h V(h/H) sum_n lam1(n) lam2(n+h) lam3(n+2h) W1(n/N) W2((n+h)/N) W3((n+2h)/N).

    ``W2`` and ``W3`` default to the constant 1 (the unsplit form of the sum);
    the delta-symbol pipeline needs all three so that m and l are localized.
    """

    forms: tuple
    N: int
    H: int
    V: SmoothWindow = canonical_window()
    W: SmoothWindow = canonical_window()
    W2: SmoothWindow | None = None
    W3: SmoothWindow | None = None

    def __post_init__(self):
        if len(self.forms) != 3:
            raise ValueError("a shifted sum needs exactly three forms")
        if self.H < 1 or self.N < 1:
            raise ValueError("N and H must be positive")
        need = self.max_index + 1
        have = min(f.prec for f in self.forms)
        if need > have:
            raise PrecisionError(need, have)

    @classmethod
    def split(cls, forms, N: int, H: int, V=None, W1=None, W2=None, W3=None) -> "ShiftedSumSpec":
        bumpw = canonical_window()
        return cls(tuple(forms), N, H, V or bumpw, W1 or bumpw, W2 or bumpw, W3 or bumpw)

    def h_range(self) -> np.ndarray:
        lo, hi = self.V.support
        return np.arange(max(1, math.ceil(lo * self.H)), math.floor(hi * self.H) + 1)

    def n_range(self) -> np.ndarray:
        lo, hi = self.W.support
        return np.arange(max(1, math.ceil(lo * self.N)), math.floor(hi * self.N) + 1)

    @property
    def max_index(self) -> int:
        return int(self.n_range()[-1] + 2 * self.h_range()[-1])

    def weighted(self, which: int) -> tuple[np.ndarray, np.ndarray]:
        """(indices, lam_i(idx) * W_i(idx/N)) over the support of W_i, for i in 1..3."""
        win = (self.W, self.W2, self.W3)[which - 1]
        if win is None:
            raise ValueError(f"W{which} is the constant window; no compact support")
        lo, hi = win.support
        idx = np.arange(max(1, math.ceil(lo * self.N)), math.floor(hi * self.N) + 1)
        lam = self.forms[which - 1].normalized[idx]
        return idx, lam * win.eval(idx / self.N)


def single_shift_sum(forms, N: int, h: int) -> float:
    """sum_{n <= N} lam1(n) lam2(n+h) lam3(n+2h), exactly rounded."""
    need = N + 2 * h + 1
    have = min(f.prec for f in forms)
    if need > have:
        raise PrecisionError(need, have)
    n = np.arange(1, N + 1)
    l1, l2, l3 = (f.normalized for f in forms)
    return math.fsum(l1[n] * l2[n + h] * l3[n + 2 * h])


def _row_terms(spec: ShiftedSumSpec, h: int, n: np.ndarray) -> np.ndarray:
    l1, l2, l3 = (f.normalized for f in spec.forms)
    N = spec.N
    wts = spec.W.eval(n / N)
    if spec.W2 is not None:
        wts = wts * spec.W2.eval((n + h) / N)
    if spec.W3 is not None:
        wts = wts * spec.W3.eval((n + 2 * h) / N)
    return (spec.V.eval(h / spec.H) * wts) * (l1[n] * l2[n + h] * l3[n + 2 * h])


def averaged_sum(spec: ShiftedSumSpec, order: str = "h") -> float:
    """The h-averaged shifted sum; ``order`` picks h-major or n-major traversal.

    Every term is formed by the same expression in both orders and the total
    is exactly rounded, so the two traversals agree bit for bit.
    """
    hs, ns = spec.h_range(), spec.n_range()
    if order == "h":
        chunks = (_row_terms(spec, int(h), ns) for h in hs)
    elif order == "n":
        chunks = (_row_terms_n(spec, int(n), hs) for n in ns)
    else:
        raise ValueError("order must be 'h' or 'n'")
    return math.fsum(itertools.chain.from_iterable(chunks)) / spec.H


def _row_terms_n(spec: ShiftedSumSpec, n: int, hs: np.ndarray) -> np.ndarray:
    l1, l2, l3 = (f.normalized for f in spec.forms)
    N = spec.N
    wts = np.full(hs.shape, spec.W.eval(n / N))
    if spec.W2 is not None:
        wts = wts * spec.W2.eval((n + hs) / N)
    if spec.W3 is not None:
        wts = wts * spec.W3.eval((n + 2 * hs) / N)
    return (spec.V.eval(hs / spec.H) * wts) * (l1[n] * l2[n + hs] * l3[n + 2 * hs])


def _check_coprime(a1, a2, q1, q2):
    if q1 < 1 or q2 < 1:
        raise ValueError("moduli must be positive")
    if math.gcd(a1, q1) != 1 or math.gcd(a2, q2) != 1:
        raise ValueError(f"need gcd(a1,q1) = gcd(a2,q2) = 1, got ({a1},{q1}), ({a2},{q2})")


def character_sum(a1: int, a2: int, q1: int, q2: int, h: int) -> int:
    """sum over alpha mod q1 q2 of e((a1 q2 + 2 a2 q1 + h) alpha / (q1 q2))."""
    _check_coprime(a1, a2, q1, q2)
    r = q1 * q2
    return r if (a1 * q2 + 2 * a2 * q1 + h) % r == 0 else 0


def character_sum_bruteforce(a1: int, a2: int, q1: int, q2: int, h: int) -> complex:
    _check_coprime(a1, a2, q1, q2)
    r = q1 * q2
    c = (a1 * q2 + 2 * a2 * q1 + h) % r
    alpha = np.arange(r)
    return complex(np.exp(2j * np.pi * ((c * alpha) % r) / r).sum())
