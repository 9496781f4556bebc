"""The ten acceptance criteria at full scale and stated tolerances.

Each test records a one-line verdict that is printed in the terminal summary
(also printed inline with ``-s``). Expect several minutes for the whole file.
"""
import math
import time

import numpy as np
import pytest

from shiftconv.delta import delta_identity_scan, make_kernel
from shiftconv.forms.eigenform import EIGENFORM_WEIGHTS, deligne_check, eigenform, hecke_check
from shiftconv.forms.qseries import delta_form, eta_power_series
from shiftconv.numerics.quadrature import QuadratureConfig
from shiftconv.shifted import (
    INGHAM_CONSTANT,
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
from shiftconv.summation import TwistScan, poisson_verify, twist_scan, voronoi_verify

pytestmark = pytest.mark.acceptance

IDENTITY_TOL = 1e-6
TRUNCATED_TOL = 1e-4
TAIL_TOL = 1e-10
SEED = 20240601


def _judge(record, index, name, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:
        record(index, f"[FAIL] {index:2d} {name}: {type(exc).__name__}: {exc} ({time.perf_counter() - t0:.1f}s)")
        raise
    line = f"[{'PASS' if ok else 'FAIL'}] {index:2d} {name}: {detail} ({time.perf_counter() - t0:.1f}s)"
    record(index, line)
    print(line)
    assert ok, detail


def test_01_exact_arithmetic(record_criterion):
    def run():
        prec = 10001
        delta = delta_form(prec).coeffs
        eta = eta_power_series(24, prec - 1).coeffs
        if delta[1:] != eta[:prec - 1]:
            return False, "Eisenstein and eta-product expansions differ"
        for w in EIGENFORM_WEIGHTS:
            rep = hecke_check(eigenform(w, prec), prec - 1)
            if not rep.ok:
                return False, f"Hecke fails for weight {w}: {rep.counterexample}"
        ok, worst, at = deligne_check(eigenform(12, 100001))
        return ok, (f"Delta agrees to n = {prec - 1}; Hecke exact for weights {list(EIGENFORM_WEIGHTS)}; "
                    f"max |lambda(n)|/d(n) = {worst:.3f} (n = {at}) over n <= 100000")
    _judge(record_criterion, 1, "exact arithmetic", run)


def test_02_delta_identity(record_criterion):
    def run():
        Qs = (5, 10, 20)
        errs = [delta_identity_scan(Q, range(-100, 101))["max_error"] for Q in Qs]
        dev = [abs(make_kernel(Q).c_Q - 1) for Q in Qs]
        ok = max(errs) < IDENTITY_TOL and dev[1] <= dev[0] and dev[2] <= dev[1]
        return ok, ("max error " + ", ".join(f"{e:.1e}" for e in errs) + "; |c_Q - 1| = "
                    + ", ".join(f"{d:.2e}" for d in dev))
    _judge(record_criterion, 2, "delta identity", run)


def test_03_poisson(record_criterion):
    def run():
        worst = tail = 0.0
        count = 0
        for X in (50.0, 200.0, 1000.0):
            for q in range(1, 11):
                for a in range(q):
                    if math.gcd(a, q) == 1:
                        r = poisson_verify(None, X, a, q)
                        worst, tail = max(worst, r.rel_error), max(tail, r.tail)
                        count += 1
        return worst < IDENTITY_TOL and tail < TAIL_TOL, f"{count} cases: max rel {worst:.1e}, max tail {tail:.1e}"
    _judge(record_criterion, 3, "Poisson", run)


def test_04_voronoi(record_criterion):
    def run():
        qc = QuadratureConfig(rel_tol=1e-12)
        out = []
        for w in (12, 16):
            f = eigenform(w, 4001)
            for q, X in ((1, 100), (2, 500), (5, 1000)):
                r = voronoi_verify(f, 1, q, float(X), tail_tol=TAIL_TOL, config=qc)
                out.append((w, q, X, r.rel_error))
        worst = max(e for *_, e in out)
        return worst < TRUNCATED_TOL, "rel " + ", ".join(f"k{w}({q},{X}) {e:.1e}" for w, q, X, e in out)
    _judge(record_criterion, 4, "Voronoi", run)


def test_05_pipeline_identity(record_criterion):
    def run():
        N, H = 500, 30
        f = eigenform(12, 2 * N + 4 * H + 2)
        tr = run_pipeline(ShiftedSumSpec.split((f, f, f), N, H), 23, 23)
        e1, e2 = tr.rel_error("delta_expanded"), tr.rel_error("post_poisson")
        st = tr.stages["post_poisson"]
        ok = e1 < IDENTITY_TOL and e2 < TRUNCATED_TOL
        return ok, (f"S = {tr.direct:.6e}; delta-expanded {e1:.1e}; post-Poisson {e2:.1e} "
                    f"(tail/|S| {st.tail / abs(tr.direct):.1e}, {st.terms:.2e} terms)")
    _judge(record_criterion, 5, "pipeline identity", run)


def test_06_character_sum(record_criterion):
    def run():
        worst, cases = 0.0, 0
        for q1 in range(1, 9):
            for q2 in range(1, 9):
                for a1 in (a for a in range(q1) if math.gcd(a, q1) == 1):
                    for a2 in (a for a in range(q2) if math.gcd(a, q2) == 1):
                        for h in range(q1 * q2):
                            d = abs(character_sum(a1, a2, q1, q2, h) - character_sum_bruteforce(a1, a2, q1, q2, h))
                            worst = max(worst, d)
                            cases += 1
        return worst < 1e-9, f"{cases} cases, max |closed - brute| = {worst:.1e}"
    _judge(record_criterion, 6, "character sum", run)


def test_07_ingham(record_criterion):
    def run():
        r = ingham_fit(1, [10 ** 5, 3 * 10 ** 5, 10 ** 6, 3 * 10 ** 6, 10 ** 7])
        assert r.target == pytest.approx(INGHAM_CONSTANT)
        return r.rel_error < 0.1, f"leading {r.leading:.5f} vs {r.target:.5f} (rel {r.rel_error:.1e})"
    _judge(record_criterion, 7, "Ingham coefficient", run)


def test_08_twist(record_criterion):
    def run():
        xgrid = [1000, 3000, 10000, 30000, 100000]
        r = twist_scan(eigenform(12, xgrid[-1] + 1), TwistScan.random(200, xgrid, SEED))
        monotone = bool(np.all(np.diff(r.sup_ratio) <= 0))
        zmax = float(r.zero_ratio.max())
        ok = r.sup_ratio[-1] <= r.sup_ratio[0] and np.isfinite(zmax) and zmax <= 1.0
        return bool(ok), ("sup " + ", ".join(f"{v:.3f}" for v in r.sup_ratio)
                          + f" (monotone {monotone}); alpha = 0 max {zmax:.3f}")
    _judge(record_criterion, 8, "twist cancellation", run)


def test_09_decay(record_criterion):
    def run():
        grid = [1000, 3000, 10000, 30000]
        f = eigenform(12, required_prec(grid[-1], 0.6) + 1)
        r = decay_scan([f, f, f], grid, 0.6)
        ok = r.exponent < 1 and r.ratio_decreasing
        return ok, (f"exponent {r.exponent:.4f}; trivial ratio " + ", ".join(f"{v:.2e}" for v in r.trivial_ratio))
    _judge(record_criterion, 9, "decay experiment", run)


def test_10_j_decay(record_criterion):
    def run():
        d = j_decay()
        env = j_envelope(hmax=40)
        ok = d.ratio < 1e-8 and all(e.stable and math.isfinite(e.constant) for e in env)
        return ok, (f"|J({d.h_test})|/|J(0)| = {d.ratio:.1e}; C_j = "
                    + ", ".join(f"{e.constant:.3e} (coarse {e.constant_coarse:.3e}, half {e.constant_half:.3e})"
                                for e in env))
    _judge(record_criterion, 10, "J decay", run)
