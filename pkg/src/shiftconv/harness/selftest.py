"""Reduced-scale run of every acceptance criterion, one pass/fail line each."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from ..delta import delta_identity_scan, make_kernel
from ..forms.eigenform import EIGENFORM_WEIGHTS, deligne_check, hecke_check
from ..forms.qseries import delta_form, eta_power_series
from ..shifted import (
    ShiftedSumSpec,
    character_sum,
    character_sum_bruteforce,
    decay_scan,
    ingham_fit,
    j_decay,
    j_envelope,
    required_prec,
    run_pipeline,
)
from ..summation import TwistScan, poisson_verify, twist_scan, voronoi_verify
from .config import HarnessConfig
from .experiments import load_form

__all__ = ["CriterionResult", "run_selftest", "CRITERIA"]


@dataclass
class CriterionResult:
    index: int
    name: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.index:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _exact(cfg):
    prec = 2001
    delta = delta_form(prec).coeffs
    eta = eta_power_series(24, prec - 1).coeffs
    if delta[1:] != eta[:prec - 1]:
        return False, "Eisenstein and eta-product expansions differ"
    for w in EIGENFORM_WEIGHTS:
        form = load_form(w, prec, cfg)
        rep = hecke_check(form, prec - 1)
        if not rep.ok:
            return False, f"weight {w}: {rep.counterexample}"
        # Hecke relations never see a(p) for primes p > prec/2; the eta product does
        if w == 12 and form.raw[1:] != eta[:prec - 1]:
            return False, "weight 12: loaded coefficients differ from the eta product"
    ok, worst, at = deligne_check(load_form(12, 10001, cfg))
    return ok, f"n <= {prec - 1} exact; max |lambda|/d = {worst:.3f} at n = {at}"


def _delta(cfg):
    errs = [delta_identity_scan(Q, range(-100, 101))["max_error"] for Q in (5, 10, 20)]
    c = [abs(make_kernel(Q).c_Q - 1) for Q in (5, 10, 20)]
    ok = max(errs) < cfg.identity_tol and c[1] <= c[0] and c[2] <= c[1]
    return ok, f"max error {max(errs):.1e}; |c_Q - 1| = " + ", ".join(f"{v:.1e}" for v in c)


def _poisson(cfg):
    worst = tail = 0.0
    for X in (50.0, 200.0):
        for q in range(1, 6):
            for a in range(q):
                if math.gcd(a, q) == 1:
                    r = poisson_verify(None, X, a, q, C=cfg.C)
                    worst, tail = max(worst, r.rel_error), max(tail, r.tail)
    return worst < cfg.identity_tol and tail < cfg.tail_tol, f"rel {worst:.1e}, tail {tail:.1e}"


def _voronoi(cfg):
    r = voronoi_verify(load_form(12, 4001, cfg), 1, 1, 100.0, C=cfg.C, tail_tol=cfg.tail_tol)
    return r.rel_error < cfg.truncated_tol, f"(q, X) = (1, 100): rel {r.rel_error:.1e}"


def _pipeline(cfg):
    f = load_form(12, 2 * 100 + 4 * 10 + 2, cfg)
    tr = run_pipeline(ShiftedSumSpec.split((f, f, f), 100, 10), 10, 10)
    e1, e2 = tr.rel_error("delta_expanded"), tr.rel_error("post_poisson")
    tail = tr.stages["post_poisson"].tail / abs(tr.direct)
    ok = e1 < cfg.identity_tol and e2 < cfg.truncated_tol
    return ok, f"N = 100, H = 10: delta-expanded {e1:.1e}, post-Poisson {e2:.1e} (tail {tail:.1e})"


def _character(cfg):
    for q1 in range(1, 9):
        for q2 in range(1, 9):
            r = q1 * q2
            for a1 in range(q1):
                if math.gcd(a1, q1) != 1:
                    continue
                for a2 in range(q2):
                    if math.gcd(a2, q2) != 1:
                        continue
                    for h in range(r):
                        if abs(character_sum(a1, a2, q1, q2, h) - character_sum_bruteforce(a1, a2, q1, q2, h)) > 1e-9:
                            return False, f"mismatch at {(a1, a2, q1, q2, h)}"
    return True, "q1, q2 <= 8 exhaustive"


def _ingham(cfg):
    r = ingham_fit(1, [10 ** 4, 3 * 10 ** 4, 10 ** 5, 3 * 10 ** 5, 10 ** 6])
    return r.rel_error < 0.1, f"leading {r.leading:.5f} vs {r.target:.5f}"


def _twist(cfg):
    r = twist_scan(load_form(12, 10001, cfg), TwistScan.random(50, [1000, 3000, 10000], cfg.seed))
    ok = r.sup_ratio[-1] <= r.sup_ratio[0] and np.all(np.isfinite(r.zero_ratio)) and r.zero_ratio.max() <= 1.0
    return bool(ok), "sup " + ", ".join(f"{v:.3f}" for v in r.sup_ratio) + f"; alpha = 0 max {r.zero_ratio.max():.3f}"


def _decay(cfg):
    grid = [1000, 3000, 10000, 30000]
    f = load_form(12, required_prec(grid[-1], 0.6) + 1, cfg)
    r = decay_scan([f, f, f], grid, 0.6)
    return r.exponent < 1 and r.ratio_decreasing, f"exponent {r.exponent:.3f}, ratio decreasing {r.ratio_decreasing}"


def _jdecay(cfg):
    d = j_decay()
    env = j_envelope(hmax=12)
    ok = d.ratio < 1e-8 and all(e.stable for e in env)
    return ok, f"ratio {d.ratio:.1e} at h = {d.h_test}; C = " + ", ".join(f"{e.constant:.2e}" for e in env)


CRITERIA = [
    ("exact arithmetic", _exact),
    ("delta identity", _delta),
    ("Poisson", _poisson),
    ("Voronoi", _voronoi),
    ("pipeline identity", _pipeline),
    ("character sum", _character),
    ("Ingham coefficient", _ingham),
    ("twist cancellation", _twist),
    ("decay experiment", _decay),
    ("J decay", _jdecay),
]


def run_selftest(cfg: HarnessConfig | None = None, echo=print) -> list[CriterionResult]:
    cfg = cfg or HarnessConfig()
    out = []
    for i, (name, fn) in enumerate(CRITERIA, 1):
        t0 = time.perf_counter()
        try:
            ok, detail = fn(cfg)
        except Exception as exc:  # a crash is a failed criterion, not a crashed selftest
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = CriterionResult(i, name, bool(ok), detail, time.perf_counter() - t0)
        if echo:
            echo(res.line())
        out.append(res)
    return out
