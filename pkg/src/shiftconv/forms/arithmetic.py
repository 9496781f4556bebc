"""Sieved arithmetic tables: divisor functions, phi, mu, Ramanujan sums."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "divisor_table",
    "dk_table",
    "phi_table",
    "mobius_table",
    "sigma_minus1",
    "factorize",
    "mobius",
    "euler_phi",
    "divisors",
    "ramanujan_sum",
    "ramanujan_sum_bruteforce",
    "ramanujan_values",
]


def divisor_table(kind: str, X: int, k: int = 2) -> np.ndarray:
    """Exact table of d(n) (``kind='d'``) or d_k(n) (``kind='d_k'``) for 0 <= n <= X.

    Entry 0 is 0 by convention.
    """
    if X < 1:
        raise ValueError("X must be >= 1")
    if kind == "d":
        return _tau_table(X)
    if kind in ("d_k", "dk"):
        return dk_table(k, X)
    raise ValueError(f"unknown divisor table kind {kind!r}")


def _tau_table(X: int) -> np.ndarray:
    # Pair each divisor i <= sqrt(n) with n/i, then drop the double count at squares.
    d = np.zeros(X + 1, dtype=np.int64)
    r = math.isqrt(X)
    for i in range(1, r + 1):
        d[i * i::i] += 2
        d[i * i] -= 1
    return d


def _convolve_with_ones(f: np.ndarray) -> np.ndarray:
    """(1 * f)(n) = sum_{m | n} f(m), split at sqrt(X) to keep O(sqrt X) numpy calls."""
    X = len(f) - 1
    out = np.zeros_like(f)
    s = math.isqrt(X)
    for j in range(1, s + 1):
        out[j::j] += f[1:X // j + 1]
    for m in range(1, X // (s + 1) + 1):
        out[m * (s + 1)::m] += f[m]
    return out


def dk_table(k: int, X: int) -> np.ndarray:
    """d_k(n): k-fold Dirichlet convolution of the all-ones function."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if X < 1:
        raise ValueError("X must be >= 1")
    f = np.ones(X + 1, dtype=np.int64)
    f[0] = 0
    if k == 1:
        return f
    f = _tau_table(X)
    for _ in range(k - 2):
        f = _convolve_with_ones(f)
    return f


def phi_table(X: int) -> np.ndarray:
    phi = np.arange(X + 1, dtype=np.int64)
    for p in range(2, X + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


def mobius_table(X: int) -> np.ndarray:
    mu = np.ones(X + 1, dtype=np.int64)
    mu[0] = 0
    is_comp = np.zeros(X + 1, dtype=bool)
    for p in range(2, X + 1):
        if not is_comp[p]:
            is_comp[2 * p::p] = True
            mu[p::p] *= -1
            mu[p * p::p * p] = 0
    return mu


def sigma_minus1(h: int) -> Fraction:
    """sum_{j | h} 1/j as an exact rational."""
    if h < 1:
        raise ValueError("h must be positive")
    return sum((Fraction(1, j) for j in divisors(h)), Fraction(0))


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out -= out // p
    return out


@lru_cache(maxsize=4096)
def divisors(n: int) -> tuple[int, ...]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p ** i for d in ds for i in range(e + 1)]
    return tuple(sorted(ds))


def ramanujan_sum(q: int, n: int) -> int:
    """c_q(n) = sum_{d | gcd(q, n)} d mu(q/d); c_q(0) = phi(q)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return _ramanujan_gcd(q, math.gcd(q, n))


@lru_cache(maxsize=65536)
def _ramanujan_gcd(q: int, g: int) -> int:
    return sum(d * mobius(q // d) for d in divisors(g))


def ramanujan_values(q: int, n: np.ndarray) -> np.ndarray:
    """Vectorized c_q(n) for an integer array ``n``."""
    g = np.gcd(np.asarray(n, dtype=np.int64), q)
    out = np.empty(g.shape, dtype=np.int64)
    for d in divisors(q):
        out[g == d] = _ramanujan_gcd(q, d)
    return out


def ramanujan_sum_bruteforce(q: int, n: int) -> complex:
    """Direct sum of e(an/q) over primitive residues a mod q (test oracle)."""
    return sum(
        complex(math.cos(2 * math.pi * a * n / q), math.sin(2 * math.pi * a * n / q))
        for a in range(1, q + 1)
        if math.gcd(a, q) == 1
    )
