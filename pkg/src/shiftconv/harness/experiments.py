"""One function per subcommand. Each returns a finished ExperimentReport."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..delta import delta_identity_scan
from ..forms.arithmetic import divisor_table
from ..forms.eigenform import deligne_check, eigenform, hecke_check
from ..numerics.quadrature import QuadratureConfig
from ..summation import TwistScan, poisson_verify, twist_scan, voronoi_verify
from ..shifted import (
    PipelineConfig,
    ShiftedSumSpec,
    averaged_sum,
    decay_scan,
    ingham_fit,
    j_decay,
    j_envelope,
    required_prec,
    run_pipeline,
)
from .config import HarnessConfig
from .report import ExperimentReport

__all__ = [
    "pmap",
    "load_form",
    "run_coeffs",
    "run_delta_check",
    "run_poisson_check",
    "run_voronoi_check",
    "run_twist_scan",
    "run_shifted_sum",
    "run_pipeline_check",
    "run_divisor_fit",
    "run_decay_scan",
    "run_j_decay",
]


def pmap(fn, items, workers: int = 1) -> list:
    """Ordered map; results come back in input order whatever the pool does."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def load_form(weight: int, prec: int, cfg: HarnessConfig):
    return eigenform(weight, prec, cache_dir=cfg.cache_dir or None)


def _report(name: str, cfg: HarnessConfig, **inputs) -> ExperimentReport:
    return ExperimentReport(name, inputs, cfg.digest())


def run_coeffs(cfg: HarnessConfig, weight: int = 12, prec: int = 100) -> ExperimentReport:
    rep = _report("coeffs", cfg, weight=weight, prec=prec)
    f = load_form(weight, prec, cfg)
    d = divisor_table("d", prec - 1)
    n = np.arange(1, prec)
    rep.table("coefficients", ["n", "a(n)", "lambda(n)", "d(n)"],
              zip(n, f.raw[1:], f.normalized[1:], d[1:]))
    hk = hecke_check(f, prec - 1)
    ok, worst, at = deligne_check(f)
    rep.add("a1", int(f.raw[1]), 0)
    rep.add("deligne_max_ratio", worst, 0.0)  # exact integers; ratio rounded once
    rep.inputs["deligne_argmax"] = at
    rep.check("hecke", hk.ok)
    rep.check("deligne", ok)
    if not hk.ok:
        rep.inputs["hecke_counterexample"] = hk.counterexample
    return rep.finish()


def run_delta_check(cfg: HarnessConfig, Q: int = 10, n_range=(-100, 100)) -> ExperimentReport:
    rep = _report("delta_check", cfg, Q=Q, n_range=list(n_range))
    ns = range(n_range[0], n_range[1] + 1)
    res = delta_identity_scan(Q, ns)
    rep.table("values", ["n", "delta_eval", "indicator"],
              zip(res["n"], res["values"], (res["n"] == 0).astype(int)))
    rep.add("max_error", res["max_error"], res["max_error"])
    rep.add("c_Q", res["c_Q"], 1e-15 * Q)
    rep.inputs["argmax"] = res["argmax"]
    rep.check("identity", res["max_error"] < cfg.identity_tol)
    return rep.finish()


def _poisson_one(args):
    a, q, X, C = args
    return poisson_verify(None, X, a, q, C=C)


def run_poisson_check(cfg: HarnessConfig, q_max: int = 10, xs=(50, 200, 1000)) -> ExperimentReport:
    rep = _report("poisson_check", cfg, q_max=q_max, X=list(xs))
    jobs = [(a, q, float(X), cfg.C) for X in xs for q in range(1, q_max + 1)
            for a in range(q) if math.gcd(a, q) == 1]
    res = pmap(_poisson_one, jobs, cfg.workers)
    rep.table("cases", ["a", "q", "X", "lhs_re", "lhs_im", "rel_error", "tail", "cut", "quad_error"],
              [(r.a, r.q, r.X, r.lhs.real, r.lhs.imag, r.rel_error, r.tail, r.cut, r.quad_error) for r in res])
    worst = max(r.rel_error for r in res)
    tail = max(r.tail for r in res)
    rep.add("max_rel_error", worst, worst)
    rep.add("max_tail", tail, tail)
    rep.check("identity", worst < cfg.identity_tol)
    rep.check("tail", tail < cfg.tail_tol)
    return rep.finish()


def _voronoi_one(args):
    weight, q, X, C, tail_tol, cache_dir, rel_tol = args
    # room for the left side and several doublings of the dual cut
    prec = max(int(2 * X) + 2, 4001)
    f = eigenform(weight, prec, cache_dir=cache_dir or None)
    qc = QuadratureConfig(rel_tol=rel_tol)
    return voronoi_verify(f, 1, q, X, C=C, tail_tol=tail_tol, config=qc)


def run_voronoi_check(cfg: HarnessConfig, weights=(12, 16), pairs=((1, 100), (2, 500), (5, 1000))) -> ExperimentReport:
    rep = _report("voronoi_check", cfg, weights=list(weights), pairs=[list(p) for p in pairs])
    jobs = [(w, q, float(X), cfg.C, cfg.tail_tol, cfg.cache_dir, cfg.quad_tol) for w in weights for q, X in pairs]
    res = pmap(_voronoi_one, jobs, cfg.workers)
    rep.table("cases", ["weight", "a", "q", "X", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_error", "tail",
                        "cut", "quad_error"],
              [(r.weight, r.a, r.q, r.X, r.lhs.real, r.lhs.imag, r.rhs.real, r.rhs.imag, r.rel_error, r.tail,
                r.cut, r.quad_error) for r in res])
    worst = max(r.rel_error for r in res)
    rep.add("max_rel_error", worst, max(r.tail + r.quad_error for r in res))
    rep.check("identity", worst < cfg.truncated_tol)
    return rep.finish()


def run_twist_scan(cfg: HarnessConfig, weight: int = 12, count: int = 200,
                   xgrid=(1000, 3000, 10000, 30000, 100000), zero_bound: float = 1.0) -> ExperimentReport:
    rep = _report("twist_scan", cfg, weight=weight, count=count, xgrid=list(xgrid), seed=cfg.seed)
    f = load_form(weight, max(xgrid) + 1, cfg)
    r = twist_scan(f, TwistScan.random(count, xgrid, cfg.seed))
    rep.table("sup", ["X", "sup_ratio", "zero_ratio"], zip(r.xgrid.astype(int), r.sup_ratio, r.zero_ratio))
    rep.table("ratios", ["alpha"] + [f"X={int(x)}" for x in r.xgrid],
              [[a] + list(row) for a, row in zip(r.alphas, r.ratios)])
    eps = 1e-12 * count  # compensated prefix sums; error far below this
    rep.add("sup_ratio_first", float(r.sup_ratio[0]), eps)
    rep.add("sup_ratio_last", float(r.sup_ratio[-1]), eps)
    rep.add("zero_ratio_max", float(r.zero_ratio.max()), eps)
    rep.inputs["sup_ratio_monotone"] = bool(np.all(np.diff(r.sup_ratio) <= 0))
    rep.check("no_increase", r.sup_ratio[-1] <= r.sup_ratio[0])
    rep.check("zero_bounded", r.zero_ratio.max() <= zero_bound)
    return rep.finish()


def _spec(cfg, weights, N, H, split):
    prec = 2 * N + 4 * H + 2
    forms = tuple(load_form(w, prec, cfg) for w in weights)
    return (ShiftedSumSpec.split if split else ShiftedSumSpec)(forms, N, H)


def run_shifted_sum(cfg: HarnessConfig, weights=(12, 12, 12), N: int = 500, H: int = 30,
                    split: bool = False) -> ExperimentReport:
    rep = _report("shifted_sum", cfg, weights=list(weights), N=N, H=H, split=split)
    spec = _spec(cfg, weights, N, H, split)
    s_h = averaged_sum(spec, "h")
    s_n = averaged_sum(spec, "n")
    err = abs(s_h - s_n) + 1e-16 * N * abs(s_h)
    rep.add("S", s_h, err)
    rep.add("S_n_order", s_n, err)
    rep.check("orders_agree", abs(s_h - s_n) <= cfg.identity_tol * max(abs(s_h), 1e-300))
    return rep.finish()


def run_pipeline_check(cfg: HarnessConfig, weights=(12, 12, 12), N: int = 500, H: int = 30, Q: int | None = None,
                       kappa: float = 30.0, stages=("delta_expanded", "post_poisson"),
                       budget: int | None = None, poisson_budget: int | None = None) -> ExperimentReport:
    rep = _report("pipeline_check", cfg, weights=list(weights), N=N, H=H, Q=Q, kappa=kappa, stages=list(stages))
    spec = _spec(cfg, weights, N, H, True)
    pc = PipelineConfig(dual_kappa=kappa)
    if budget:
        pc = PipelineConfig(budget=budget, poisson_budget=pc.poisson_budget, dual_kappa=kappa)
    if poisson_budget:
        pc = PipelineConfig(budget=pc.budget, poisson_budget=poisson_budget, dual_kappa=kappa)
    tr = run_pipeline(spec, Q, Q, pc, stages)
    rep.add("direct", tr.direct, 1e-15 * abs(tr.direct))
    rows = []
    for name, st in tr.stages.items():
        rel = tr.rel_error(name)
        bound = (st.tail + st.quad_error) / abs(tr.direct)
        rep.add(name, st.value, st.tail + st.quad_error + 1e-14 * abs(tr.direct))
        rows.append((name, st.value, rel, st.tail, st.quad_error, st.terms, st.seconds))
        tol = cfg.identity_tol if name == "delta_expanded" else cfg.truncated_tol
        rep.check(name, rel < tol)
        rep.inputs[f"{name}_truncation_bound"] = bound
    rep.table("stages", ["stage", "value", "rel_error", "tail", "quad_error", "terms", "seconds"], rows)
    return rep.finish()


def run_divisor_fit(cfg: HarnessConfig, h: int = 1,
                    xgrid=(10 ** 5, 3 * 10 ** 5, 10 ** 6, 3 * 10 ** 6, 10 ** 7), tol: float = 0.1) -> ExperimentReport:
    rep = _report("divisor_fit", cfg, h=h, xgrid=list(xgrid))
    r = ingham_fit(h, xgrid)
    rep.table("values", ["X", "D2"], zip(r.xgrid, r.values))
    # exact integer data; the error is the fit's own model error, not roundoff
    rep.add("leading", r.leading, abs(r.leading - r.target))
    rep.add("rel_error", float(r.rel_error), float(r.rel_error))
    rep.inputs["target"] = r.target
    rep.check("leading_within_tol", r.rel_error < tol)
    return rep.finish()


def run_decay_scan(cfg: HarnessConfig, weights=(12, 12, 12), ngrid=(1000, 3000, 10000, 30000),
                   theta: float = 0.6, eps_margin: float = 0.05) -> ExperimentReport:
    rep = _report("decay_scan", cfg, weights=list(weights), ngrid=list(ngrid), theta=theta, eps_margin=eps_margin)
    prec = max(required_prec(n, theta) for n in ngrid) + 1
    forms = [load_form(w, prec, cfg) for w in weights]
    r = decay_scan(forms, ngrid, theta, eps_margin)
    rep.table("grid", ["N", "H", "S", "trivial_ratio"], zip(r.Ns.astype(int), r.Hs, r.values, r.trivial_ratio))
    # the slope's standard error from the least-squares fit
    if math.isfinite(r.exponent):
        A = np.vstack([np.log(r.Ns), np.ones(r.Ns.size)]).T
        resid = np.log(np.abs(r.values)) - A @ np.linalg.lstsq(A, np.log(np.abs(r.values)), rcond=None)[0]
        dof = max(1, r.Ns.size - 2)
        cov = np.linalg.inv(A.T @ A) * float(resid @ resid) / dof
        se = float(math.sqrt(cov[0, 0]))
    else:
        se = math.nan
    rep.add("exponent", r.exponent, se)
    rep.inputs["in_regime"] = r.in_regime
    rep.inputs["notes"] = r.notes
    if r.in_regime:
        rep.check("exponent_below_1", r.exponent < 1)
        rep.check("ratio_decreasing", r.ratio_decreasing)
    return rep.finish()


def run_j_decay(cfg: HarnessConfig, hmax: int = 40, multiplier: float = 8.0) -> ExperimentReport:
    rep = _report("j_decay", cfg, hmax=hmax, multiplier=multiplier)
    d = j_decay(multiplier=multiplier, hmax=hmax)
    env = j_envelope(hmax=hmax)
    rep.table("profile", ["h", "abs_J"], zip(d.hs, d.values))
    tol = 1e-12 * d.value0  # quadrature absolute tolerance
    rep.add("J0", d.value0, tol)
    rep.add("ratio_at_test", float(d.ratio), tol / d.value0)
    rep.inputs["h_test"] = d.h_test
    rep.check("decay", d.ratio < 1e-8)
    rep.check("trivial_bound", d.value0 <= d.bound0)
    for e in env:
        rep.add(f"envelope_C_j{e.j}", e.constant, abs(e.constant - e.constant_coarse))
        rep.check(f"envelope_j{e.j}_stable", e.stable)
    return rep.finish()
