"""Level-one Hecke eigenforms from exact q-series, and the numeric scans on them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .arithmetic import divisor_table, factorize
from .qseries import QSeries, delta_form, eisenstein

__all__ = [
    "EIGENFORM_WEIGHTS",
    "Eigenform",
    "eigenform",
    "HeckeReport",
    "hecke_check",
    "deligne_check",
    "RankinSelbergReport",
    "rankin_selberg_scan",
]

# Weights with a one-dimensional cusp space at level 1.
EIGENFORM_WEIGHTS = (12, 16, 18, 20, 22, 26)


def normalize(raw, weight: int) -> np.ndarray:
    """lambda(n) = a(n) n^{-(k-1)/2}, rounded once from the exact integer ratio."""
    half = (weight - 2) // 2
    lam = np.zeros(len(raw), dtype=np.float64)
    for n in range(1, len(raw)):
        # int / int is correctly rounded, so only the sqrt adds error
        lam[n] = raw[n] / n ** half / math.sqrt(n)
    return lam


@dataclass(frozen=True)
class Eigenform:
    """Normalized Hecke eigenform of weight ``weight`` with coefficients up to ``prec - 1``."""

    weight: int
    raw: tuple[int, ...]
    normalized: np.ndarray = field(repr=False, compare=False)

    @property
    def prec(self) -> int:
        return len(self.raw)

    @property
    def max_n(self) -> int:
        return len(self.raw) - 1

    def a(self, n: int) -> int:
        return self.raw[n]

    def lam(self, n: int) -> float:
        return float(self.normalized[n])

    def __repr__(self) -> str:
        return f"Eigenform(weight={self.weight}, prec={self.prec})"


def _eisenstein_cofactor(k: int, prec: int) -> QSeries | None:
    if k == 0:
        return None
    if k in (4, 6, 8, 10, 14):
        return eisenstein(k, prec)
    raise ValueError(f"no Eisenstein cofactor for weight {k}")


def eigenform(weight: int, prec: int, cache_dir: str | Path | None = None) -> Eigenform:
    """The unique normalized eigenform Delta * E_{weight-12} of the given weight.

    ``prec`` counts coefficients a(0..prec-1). With ``cache_dir`` set, a cached
    table is read when present and written when absent.
    """
    if weight not in EIGENFORM_WEIGHTS:
        raise ValueError(
            f"weight {weight} does not have a one-dimensional level-1 cusp space; "
            f"supported weights are {EIGENFORM_WEIGHTS}"
        )
    if prec < 2:
        raise ValueError("prec must be >= 2")
    if cache_dir is not None:
        from .cache import cache_path, read_cache, write_cache

        path = cache_path(cache_dir, weight, prec)
        if path.exists():
            coeffs = read_cache(path, weight=weight, prec=prec)
            return Eigenform(weight, tuple(coeffs), normalize(coeffs, weight))
        form = _build(weight, prec)
        write_cache(path, weight, form.raw)
        return form
    return _build(weight, prec)


@lru_cache(maxsize=16)
def _build(weight: int, prec: int) -> Eigenform:
    series = delta_form(prec)
    cof = _eisenstein_cofactor(weight - 12, prec)
    if cof is not None:
        series = series * cof
    raw = series.coeffs
    if raw[1] != 1:  # pragma: no cover
        raise RuntimeError("eigenform is not normalized: a(1) != 1")
    return Eigenform(weight, raw, normalize(raw, weight))


@dataclass
class HeckeReport:
    ok: bool
    checked_multiplicative: int
    checked_prime_power: int
    counterexample: str | None = None


def hecke_check(form: Eigenform, bound: int) -> HeckeReport:
    """Exact check of a(mn) = a(m)a(n) (coprime) and the prime-power recursion up to ``bound``."""
    if bound > form.max_n:
        raise ValueError(f"bound {bound} exceeds computed range {form.max_n}")
    a = form.raw
    pk1 = None
    k1 = form.weight - 1
    mult = 0
    pp = 0
    if a[1] != 1:
        return HeckeReport(False, 0, 0, f"a(1) = {a[1]}")
    for m in range(2, bound + 1):
        am = a[m]
        for n in range(m + 1, bound // m + 1):
            if math.gcd(m, n) == 1:
                mult += 1
                if a[m * n] != am * a[n]:
                    return HeckeReport(False, mult, pp, f"a({m * n}) != a({m}) a({n})")
    for p in range(2, bound + 1):
        if len(factorize(p)) != 1 or factorize(p)[0][1] != 1:
            continue
        pk1 = p ** k1
        prev, cur = 1, a[p]
        q = p
        while q * p <= bound:
            nxt = a[p] * cur - pk1 * prev
            pp += 1
            if a[q * p] != nxt:
                return HeckeReport(False, mult, pp, f"a({q * p}) breaks the prime-power recursion at p={p}")
            prev, cur = cur, nxt
            q *= p
    return HeckeReport(True, mult, pp)


def deligne_check(form: Eigenform, bound: int | None = None) -> tuple[bool, float, int]:
    """Returns (holds, max |lambda(n)|/d(n), argmax) for 1 <= n <= bound."""
    bound = form.max_n if bound is None else bound
    d = divisor_table("d", bound)
    ratio = np.abs(form.normalized[1:bound + 1]) / d[1:]
    i = int(np.argmax(ratio))
    return bool(ratio[i] <= 1.0), float(ratio[i]), i + 1


@dataclass
class RankinSelbergReport:
    xgrid: list[int]
    partial_sums: list[float]
    slope: float
    residuals: list[float]
    residual_exponent: float
    reference_exponent: float = 0.6


def rankin_selberg_scan(form: Eigenform, xgrid) -> RankinSelbergReport:
    """Least-squares fit of sum_{n<=X} lambda(n)^2 = C X through the origin."""
    xs = sorted(int(x) for x in xgrid)
    if len(xs) < 3:
        raise ValueError("rankin_selberg_scan needs at least 3 grid points")
    if xs[-1] > form.max_n:
        raise ValueError(f"grid point {xs[-1]} exceeds computed range {form.max_n}")
    sq = form.normalized ** 2
    sums = []
    prev_x, acc = 0, 0.0
    for x in xs:
        acc = math.fsum((acc, math.fsum(sq[prev_x + 1:x + 1])))
        sums.append(acc)
        prev_x = x
    X = np.array(xs, dtype=float)
    S = np.array(sums)
    slope = float(X @ S / (X @ X))
    res = np.abs(S - slope * X)
    good = res > 0
    if good.sum() >= 2:
        expo = float(np.polyfit(np.log(X[good]), np.log(res[good]), 1)[0])
    else:
        expo = float("nan")
    return RankinSelbergReport(xs, sums, slope, res.tolist(), expo)
