"""Exact truncated power series in q with big-integer coefficients.

Multiplication goes through Kronecker substitution: both operands are packed
into one large integer and multiplied by GMP, which keeps 10^5-term products
of Eisenstein series well under a second.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2

__all__ = [
    "QSeries",
    "SeriesDivisionError",
    "bernoulli",
    "eisenstein",
    "delta_form",
    "eta_power_series",
    "SUPPORTED_EISENSTEIN",
]

SUPPORTED_EISENSTEIN = (4, 6, 8, 10, 14)


class SeriesDivisionError(ArithmeticError):
    """Raised when an exact scalar division leaves a remainder."""


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    pos = b"".join(max(c, 0).to_bytes(nbytes, "little") for c in coeffs)
    neg = b"".join(max(-c, 0).to_bytes(nbytes, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(value: int, count: int, nbytes: int) -> list[int]:
    # Offsetting every slot by 2^(b-1) turns balanced digits into plain ones.
    half = 1 << (8 * nbytes - 1)
    offset = int.from_bytes(half.to_bytes(nbytes, "little") * count, "little")
    raw = (value + offset).to_bytes(nbytes * count + nbytes, "little")
    return [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        for i in range(count)
    ]


def _kronecker_mul(a: Sequence[int], b: Sequence[int], count: int) -> list[int]:
    a = list(a[:count])
    b = list(b[:count])
    ma = max((abs(c) for c in a), default=0)
    mb = max((abs(c) for c in b), default=0)
    if ma == 0 or mb == 0:
        return [0] * count
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    nbytes = (bits + 7) // 8
    prod = gmpy2.mpz(_pack(a, nbytes)) * gmpy2.mpz(_pack(b, nbytes))
    # Keep the low `count` balanced digits only.
    width = 8 * nbytes * count
    low = int(gmpy2.f_mod(prod, gmpy2.mpz(1) << width))
    if low >> (width - 1):
        low -= 1 << width
    return _unpack(low, count, nbytes)


class QSeries:
    """Power series sum_{n < prec} c_n q^n with exact integer coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[int], prec: int | None = None):
        cs = [int(c) for c in coeffs]
        if prec is not None:
            if prec < 0:
                raise ValueError("prec must be non-negative")
            cs = cs[:prec] + [0] * max(0, prec - len(cs))
        self._coeffs = tuple(cs)

    @property
    def prec(self) -> int:
        return len(self._coeffs)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, n):
        return self._coeffs[n]

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self._coeffs[:6])
        return f"QSeries([{head}{', ...' if self.prec > 6 else ''}], prec={self.prec})"

    def truncate(self, prec: int) -> "QSeries":
        return QSeries(self._coeffs[:prec])

    def _common(self, other: "QSeries") -> int:
        return min(self.prec, other.prec)

    def __add__(self, other):
        if isinstance(other, int):
            if self.prec == 0:
                return self
            return QSeries((self._coeffs[0] + other,) + self._coeffs[1:])
        p = self._common(other)
        return QSeries(a + b for a, b in zip(self._coeffs[:p], other._coeffs[:p]))

    __radd__ = __add__

    def __neg__(self):
        return QSeries(-c for c in self._coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return QSeries(c * other for c in self._coeffs)
        if not isinstance(other, QSeries):
            return NotImplemented
        p = self._common(other)
        return QSeries(_kronecker_mul(self._coeffs, other._coeffs, p))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = QSeries([1], self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def exact_div(self, d: int) -> "QSeries":
        """Divide every coefficient by ``d``; raises if any division is inexact."""
        out = []
        for n, c in enumerate(self._coeffs):
            qt, r = divmod(c, d)
            if r:
                raise SeriesDivisionError(f"coefficient {n} ({c}) is not divisible by {d}")
            out.append(qt)
        return QSeries(out)


def bernoulli(k: int) -> Fraction:
    """B_k by the Akiyama-Tanigawa algorithm (B_1 = +1/2 convention)."""
    a = [Fraction(0)] * (k + 1)
    for m in range(k + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def _sigma_table(power: int, prec: int) -> list[int]:
    sig = [0] * prec
    for d in range(1, prec):
        dp = d ** power
        for m in range(d, prec, d):
            sig[m] += dp
    return sig


def eisenstein(k: int, prec: int) -> QSeries:
    """Normalized E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, for k in 4, 6, 8, 10, 14."""
    if k not in SUPPORTED_EISENSTEIN:
        raise ValueError(f"eisenstein series of weight {k} not supported; use one of {SUPPORTED_EISENSTEIN}")
    if prec < 1:
        raise ValueError("prec must be >= 1")
    factor = Fraction(-2 * k) / bernoulli(k)
    if factor.denominator != 1:
        raise SeriesDivisionError(f"-2k/B_k = {factor} is not an integer for k={k}")
    f = factor.numerator
    sig = _sigma_table(k - 1, prec)
    return QSeries([1] + [f * s for s in sig[1:]], prec)


def delta_form(prec: int) -> QSeries:
    """Ramanujan's Delta = (E_4^3 - E_6^2) / 1728, exactly."""
    if prec < 2:
        raise ValueError("prec must be >= 2")
    e4 = eisenstein(4, prec)
    e6 = eisenstein(6, prec)
    num = e4 * e4 * e4 - e6 * e6
    try:
        return num.exact_div(1728)
    except SeriesDivisionError as exc:  # pragma: no cover - would mean broken arithmetic
        raise RuntimeError("E4^3 - E6^2 not divisible by 1728; series arithmetic is inconsistent") from exc


def _euler_product_terms(prec: int) -> list[tuple[int, int]]:
    """Nonzero terms (exponent, sign) of prod (1 - q^n) from the pentagonal number theorem."""
    terms = [(0, 1)]
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 >= prec:
            break
        s = -1 if k % 2 else 1
        terms.append((e1, s))
        e2 = k * (3 * k + 1) // 2
        if e2 < prec:
            terms.append((e2, s))
        k += 1
    return terms


def eta_power_series(power: int, prec: int) -> QSeries:
    """prod_{n>=1} (1 - q^n)^power via the J.C.P. Miller power recurrence.

    The product itself is sparse, so the recurrence costs O(prec^1.5) integer
    operations and never touches the Kronecker multiplier.
    """
    terms = [(k, s) for k, s in _euler_product_terms(prec) if k > 0]
    g = [0] * prec
    g[0] = 1
    for n in range(1, prec):
        acc = 0
        for k, s in terms:
            if k > n:
                break
            acc += ((power + 1) * k - n) * s * g[n - k]
        qt, r = divmod(acc, n)
        if r:  # pragma: no cover
            raise SeriesDivisionError("power recurrence produced a non-integer coefficient")
        g[n] = qt
    return QSeries(g)
