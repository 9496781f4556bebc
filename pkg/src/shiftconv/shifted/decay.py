"""Empirical decay of the averaged shifted sum along a grid of N with H = ceil(N^theta)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sums import PrecisionError, ShiftedSumSpec, averaged_sum

__all__ = ["DecayReport", "decay_scan", "required_prec"]


@dataclass
class DecayReport:
    theta: float
    Ns: np.ndarray
    Hs: np.ndarray
    values: np.ndarray
    exponent: float  # slope of log|S| against log N; nan when any |S| vanishes
    trivial_ratio: np.ndarray  # |S| / (N log^3 N)
    ratio_decreasing: bool
    in_regime: bool  # theta >= 1/2 + eps_margin; no claim is attached otherwise
    notes: list = field(default_factory=list)


def required_prec(N: int, theta: float) -> int:
    H = max(1, math.ceil(N ** theta))
    return 2 * N + 4 * H + 1


def decay_scan(forms, Ngrid, theta: float, eps_margin: float = 0.0, V=None, W=None) -> DecayReport:
    Ns = sorted(int(n) for n in Ngrid)
    if len(Ns) < 4:
        raise ValueError("decay_scan needs at least 4 grid points")
    kw = {}
    if V is not None:
        kw["V"] = V
    if W is not None:
        kw["W"] = W
    vals, Hs, notes = [], [], []
    for N in Ns:
        H = max(1, math.ceil(N ** theta))
        try:
            spec = ShiftedSumSpec(tuple(forms), N, H, **kw)
        except PrecisionError as exc:
            notes.append(f"N={N}: skipped, {exc}")
            continue
        vals.append(averaged_sum(spec))
        Hs.append(H)
    used = [N for N in Ns if not any(s.startswith(f"N={N}:") for s in notes)]
    if len(used) < 4:
        raise ValueError(f"only {len(used)} usable grid points; " + "; ".join(notes))
    N_arr = np.array(used, dtype=float)
    vals = np.array(vals)
    mags = np.abs(vals)
    if np.all(mags > 0):
        exponent = float(np.polyfit(np.log(N_arr), np.log(mags), 1)[0])
    else:
        exponent = float("nan")
        notes.append("some |S| vanish identically (window support misses every integer h); no fit")
    ratio = mags / (N_arr * np.log(N_arr) ** 3)
    return DecayReport(theta, N_arr, np.array(Hs), vals, exponent, ratio,
                       bool(np.all(np.diff(ratio) < 0)), theta >= 0.5 + eps_margin, notes)
