"""The delta-symbol pipeline for the averaged shifted sum, stage by stage.

Stage 1 (delta-expanded): detect m = n + h and l = n + 2h with two delta
expansions, collapsing each primitive-residue sum to a Ramanujan sum.

Stage 2 (post-Poisson): keep the residues a1, a2 explicit, and apply Poisson
summation to the h-sum. Writing s1 = n - m and s2 = n - l, the phases depend
on (s1, s2) only, so the n, m, l sums collapse onto the triple correlation

    T(s1, s2) = sum_n g1(n) g2(n - s1) g3(n - s2),

and each (q1, q2) block becomes

    sum_{a1, a2} sum_{hd = -(a1 q2 + 2 a2 q1) (q1 q2)} H int V(x) e(-hd H x/(q1 q2))
        sum_{s1, s2} e(a1 s1/q1 + a2 s2/q2) T(s1, s2) k1(s1 + xH) k2(s2 + 2xH) dx,

with k_i(t) = h(q_i/Q_i, t/Q_i^2). The x-integral uses the trapezoid rule,
which is spectrally accurate because V vanishes to all orders at 1 and 2.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..delta import DeltaKernel, h_eval, make_kernel, q_cutoff
from ..forms.arithmetic import ramanujan_values
from .sums import ShiftedSumSpec, averaged_sum

__all__ = [
    "BudgetExceeded",
    "PipelineConfig",
    "StageResult",
    "PipelineTrace",
    "delta_expanded_sum",
    "post_poisson_sum",
    "dual_cutoff",
    "run_pipeline",
]

DEFAULT_BUDGET = 10 ** 9
# the post-Poisson stage counts multiply-adds of its dense folds; at the
# default dual cut the N = 500, H = 30, Q = 23 reference sum needs about 2.4e10
DEFAULT_POISSON_BUDGET = 5 * 10 ** 10


class BudgetExceeded(RuntimeError):
    def __init__(self, stage: str, projected: int, budget: int):
        super().__init__(f"{stage}: projected {projected:.3e} terms exceeds budget {budget:.3e}")
        self.projected = projected
        self.budget = budget


@dataclass(frozen=True)
class PipelineConfig:
    budget: int = DEFAULT_BUDGET
    poisson_budget: int = DEFAULT_POISSON_BUDGET
    dual_kappa: float = 30.0  # dual cut |hd| <= kappa (q1 q2 / H + 1)
    tail_shell: float = 1.25  # measured shell kappa .. tail_shell * kappa
    window_band: float = 40.0  # cycles reserved for V in the x-rule
    kernel_band: float = 160.0  # kernel band is kernel_band * H / (q Q) cycles


@dataclass
class StageResult:
    name: str
    value: float
    imag: float = 0.0
    tail: float = 0.0
    quad_error: float = 0.0
    terms: int = 0
    seconds: float = 0.0
    blocks: np.ndarray | None = None  # per (q1, q2) contributions
    extra: dict = field(default_factory=dict)


@dataclass
class PipelineTrace:
    N: int
    H: int
    Q1: int
    Q2: int
    direct: float
    stages: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def rel_error(self, stage: str) -> float:
        return abs(self.stages[stage].value - self.direct) / abs(self.direct)


def _check_spec(spec: ShiftedSumSpec) -> None:
    if spec.W2 is None or spec.W3 is None:
        raise ValueError("the pipeline needs the split form with W2 and W3 localizing m and l")


def _kernel_for(Q: int, kernel: DeltaKernel | None) -> DeltaKernel:
    if kernel is not None and kernel.Q == Q:
        return kernel
    return make_kernel(Q)


def _kernel_table(Q: int, kern: DeltaKernel, ks: np.ndarray):
    """Rows c_q(k) h(q/Q, k/Q^2) for every q that can contribute over ``ks``."""
    qmax = q_cutoff(int(np.max(np.abs(ks))), Q)
    rows = np.empty((qmax, ks.size))
    for q in range(1, qmax + 1):
        rows[q - 1] = ramanujan_values(q, ks) * h_eval(kern, q / Q, ks / (Q * Q))
    return rows


def delta_expanded_sum(spec: ShiftedSumSpec, Q1: int, Q2: int, kernel: DeltaKernel | None = None,
                       config: PipelineConfig | None = None) -> StageResult:
    """Both delta expansions inserted; exact up to rounding.

    The q-sums run over every q whose kernel is non-zero on the shift range,
    which exceeds Q once |n + h - m| > Q^2 / 2.
    """
    cfg = config or PipelineConfig()
    _check_spec(spec)
    if Q1 <= 1 or Q2 <= 1:
        raise ValueError("Q1, Q2 must exceed 1")
    t0 = time.perf_counter()
    k1, k2 = _kernel_for(Q1, kernel), _kernel_for(Q2, kernel)
    n_idx, g1 = spec.weighted(1)
    m_idx, g2 = spec.weighted(2)
    l_idx, g3 = spec.weighted(3)
    hs = spec.h_range()
    vh = spec.V.eval(hs / spec.H)

    ks1 = np.arange(n_idx[0] + hs[0] - m_idx[-1], n_idx[-1] + hs[-1] - m_idx[0] + 1)
    ks2 = np.arange(n_idx[0] + 2 * hs[0] - l_idx[-1], n_idx[-1] + 2 * hs[-1] - l_idx[0] + 1)
    q1max = q_cutoff(int(np.max(np.abs(ks1))), Q1)
    q2max = q_cutoff(int(np.max(np.abs(ks2))), Q2)
    nh = hs.size * n_idx.size
    projected = q1max * g2.size * ks1.size + q2max * g3.size * ks2.size + q1max * q2max * nh
    if projected > cfg.budget:
        raise BudgetExceeded("delta-expanded", projected, cfg.budget)

    E1 = _kernel_table(Q1, k1, ks1)
    E2 = _kernel_table(Q2, k2, ks2)
    # A[q1, p] = sum_m g2(m) E1[q1, p - m] at p = n + h; likewise B at p = n + 2h
    A = np.array([np.convolve(g2, row) for row in E1])
    B = np.array([np.convolve(g3, row) for row in E2])
    p1 = (n_idx[None, :] + hs[:, None]) - m_idx[0] - ks1[0]
    p2 = (n_idx[None, :] + 2 * hs[:, None]) - l_idx[0] - ks2[0]
    Ahat = A[:, p1.ravel()]
    Bhat = B[:, p2.ravel()] * (vh[:, None] * g1[None, :]).ravel()[None, :]
    blocks = Ahat @ Bhat.T
    scale = k1.c_Q * k2.c_Q / (spec.H * Q1 ** 2 * Q2 ** 2)
    value = scale * math.fsum(blocks.ravel())
    beyond = scale * (math.fsum(blocks.ravel()) - math.fsum(blocks[:Q1, :Q2].ravel()))
    return StageResult("delta_expanded", value, 0.0, 0.0, 0.0, int(projected), time.perf_counter() - t0,
                       scale * blocks, {"q1max": q1max, "q2max": q2max, "beyond_Q": beyond})


def dual_cutoff(q1: int, q2: int, H: int, kappa: float) -> int:
    # the small slack keeps exact products such as 30 * (1/30 + 1) from rounding up
    return int(math.ceil(kappa * (q1 * q2 + H) / H - 1e-9))


def _pow2_at_least(v: float) -> int:
    return 1 << max(4, math.ceil(math.log2(max(v, 1.0))))


def _triple_correlation(spec: ShiftedSumSpec):
    n_idx, g1 = spec.weighted(1)
    m_idx, g2 = spec.weighted(2)
    l_idx, g3 = spec.weighted(3)
    s1 = np.arange(n_idx[0] - m_idx[-1], n_idx[-1] - m_idx[0] + 1)
    s2 = np.arange(n_idx[0] - l_idx[-1], n_idx[-1] - l_idx[0] + 1)

    def toeplitz(g, idx, s):
        m = n_idx[:, None] - s[None, :] - idx[0]
        ok = (m >= 0) & (m < g.size)
        out = np.zeros(m.shape)
        out[ok] = g[m[ok]]
        return out

    G2 = toeplitz(g2, m_idx, s1)
    G3 = toeplitz(g3, l_idx, s2)
    T = G2.T @ (g1[:, None] * G3)
    return s1, s2, T, n_idx.size * s1.size * s2.size


def _fold(values: np.ndarray, s: np.ndarray, q: int) -> np.ndarray:
    """Sum rows of ``values`` (axis 0 indexed by the contiguous range s) by residue of s mod q."""
    front = int(s[0] % q)
    back = (-(front + s.size)) % q
    pad = [(front, back)] + [(0, 0)] * (values.ndim - 1)
    padded = np.pad(values, pad)
    return padded.reshape((-1, q) + values.shape[1:]).sum(axis=0)


def _fold_product(a: np.ndarray, b: np.ndarray, s: np.ndarray, q: int) -> np.ndarray:
    """_fold(a * b, s, q) without materializing the product."""
    out = np.empty((q,) + np.broadcast_shapes(a.shape[1:], b.shape[1:]), dtype=np.result_type(a, b))
    for j in range(q):
        rho = int((s[0] + j) % q)
        out[rho] = (a[j::q] * b[j::q]).sum(axis=0)
    return out


def _group_sum(keys: np.ndarray, rows: np.ndarray, count: int) -> np.ndarray:
    """out[k] = sum of rows with key k."""
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    out = np.zeros((count,) + rows.shape[1:], dtype=rows.dtype)
    if k.size:
        starts = np.flatnonzero(np.r_[True, k[1:] != k[:-1]])
        out[k[starts]] = np.add.reduceat(rows[order], starts, axis=0)
    return out


def post_poisson_sum(spec: ShiftedSumSpec, Q1: int, Q2: int, kernel: DeltaKernel | None = None,
                     config: PipelineConfig | None = None) -> StageResult:
    """Poisson-dual form of the h-sum, truncated at |hd| <= kappa (q1 q2/H + 1).

    The dual terms in the shell (kappa, tail_shell * kappa] are evaluated as
    well and reported as the measured truncation tail; the quadrature error
    compares the x-rule against its own every-other-node subrule.
    """
    cfg = config or PipelineConfig()
    _check_spec(spec)
    if Q1 <= 1 or Q2 <= 1:
        raise ValueError("Q1, Q2 must exceed 1")
    t0 = time.perf_counter()
    kern1, kern2 = _kernel_for(Q1, kernel), _kernel_for(Q2, kernel)
    H = spec.H
    s1, s2, T, t_terms = _triple_correlation(spec)
    hs = spec.h_range()
    # V localizes x = h/H to its support; shifts seen by the kernels
    x_lo, x_hi = spec.V.support
    t1max = max(abs(s1[0] + x_lo * H), abs(s1[-1] + x_hi * H))
    t2max = max(abs(s2[0] + 2 * x_lo * H), abs(s2[-1] + 2 * x_hi * H))
    q1max = q_cutoff(int(math.ceil(t1max)), Q1)
    q2max = q_cutoff(int(math.ceil(t2max)), Q2)

    def band_margin(q1, q2):
        return cfg.window_band + cfg.kernel_band * H / (min(q1 / Q1, q2 / Q2) * Q1 * Q2)

    def nodes_needed(q1, q2):
        r = q1 * q2
        L_ext = math.ceil(cfg.tail_shell * dual_cutoff(q1, q2, H, cfg.dual_kappa))
        return _pow2_at_least((L_ext * H / r + band_margin(q1, q2)) * (x_hi - x_lo))

    # grid per modulus, fine enough for every partner at least as large
    grid_y = {q2: max(nodes_needed(q1, q2) for q1 in range(q2, q1max + 1)) if q2 <= q1max else nodes_needed(q1max, q2)
              for q2 in range(1, q2max + 1)}
    grid_x = {q1: max(nodes_needed(q1, q2) for q2 in range(q1 + 1, q2max + 1)) if q1 < q2max else 0
              for q1 in range(1, q1max + 1)}
    pair_nodes = {(a, b): nodes_needed(a, b) for a in range(1, q1max + 1) for b in range(1, q2max + 1)}
    projected = t_terms + sum(T.size * s for s in grid_y.values()) + sum(T.size * s for s in grid_x.values())
    projected += sum(pair_nodes[a, b] * (s1.size * b if a >= b else s2.size * a) for (a, b) in pair_nodes)
    if projected > cfg.poisson_budget:
        raise BudgetExceeded("post-Poisson", projected, cfg.poisson_budget)

    def xgrid(s):
        return x_lo + (x_hi - x_lo) * np.arange(1, s) / s

    ktab_cache: dict = {}

    def ktab(kern, Q, q, shifts, scale, s):
        key = (scale, q, s)
        if key not in ktab_cache:
            x = xgrid(s)
            ktab_cache[key] = h_eval(kern, q / Q, (shifts[:, None] + scale * H * x[None, :]) / (Q * Q))
        return ktab_cache[key]

    blocks = np.zeros((q1max, q2max))
    imag = np.zeros((q1max, q2max))
    tails = np.zeros((q1max, q2max))
    qerr = np.zeros((q1max, q2max))

    def finish(q1, q2, Z, s):
        """Z[rho1, rho2, x] -> block value via residue DFT and the dual sum."""
        r = q1 * q2
        P = np.fft.ifft2(Z, axes=(0, 1)) * (q1 * q2)
        a1 = np.array([a for a in range(q1) if math.gcd(a, q1) == 1])
        a2 = np.array([a for a in range(q2) if math.gcd(a, q2) == 1])
        P = P[np.ix_(a1, a2)]
        beta = (a1[:, None] * q2 + 2 * a2[None, :] * q1) % r
        L = dual_cutoff(q1, q2, H, cfg.dual_kappa)
        L_ext = math.ceil(cfg.tail_shell * L)
        x = xgrid(s)
        vx = spec.V.eval(x) * ((x_hi - x_lo) / s)
        hd = np.arange(-L_ext, L_ext + 1)
        cls = np.mod(-hd, r)
        # only residue classes hit by some admissible (a1, a2)
        used, inv = np.unique(beta, return_inverse=True)
        sel = np.isin(cls, used)
        hd, cls = hd[sel], cls[sel]
        ph = np.exp(-2j * np.pi * np.outer(hd, x) * (H / r)) * vx[None, :]
        inner = np.abs(hd) <= L
        where = np.searchsorted(used, cls)
        E_in = _group_sum(where[inner], ph[inner], used.size)
        E_out = _group_sum(where[~inner], ph[~inner], used.size)
        Pf = P.reshape(-1, x.size)
        idx = inv.ravel()
        val = np.einsum("px,px->", Pf, E_in[idx])
        tail = np.einsum("px,px->", Pf, E_out[idx])
        # every-other-node subrule on the dual terms it can still resolve
        keep = inner & (np.abs(hd) * H / r <= max(0.0, (s / 2) / (x_hi - x_lo) - band_margin(q1, q2)))
        keep |= hd == 0
        E_chk = _group_sum(where[keep], ph[keep], used.size)[idx]
        full = np.einsum("px,px->", Pf, E_chk)
        half = np.einsum("px,px->", Pf[:, 1::2], E_chk[:, 1::2]) * 2.0
        return val, tail, abs(full - half)

    for q2 in range(1, q2max + 1):
        s_y = grid_y[q2]
        K2 = ktab(kern2, Q2, q2, s2, 2.0, s_y)
        # Y[s1, rho2, x] = sum_{s2 = rho2 (q2)} T[s1, s2] K2[s2, x]
        Y = np.stack([T[:, np.mod(s2, q2) == rho] @ K2[np.mod(s2, q2) == rho] for rho in range(q2)], axis=1)
        for q1 in range(q2, q1max + 1):
            s = pair_nodes[q1, q2]
            step = s_y // s
            K1 = ktab(kern1, Q1, q1, s1, 1.0, s)
            Ysub = Y[:, :, step - 1::step]
            Z = _fold_product(K1[:, None, :], Ysub, s1, q1)
            v, t, e = finish(q1, q2, Z, s)
            blocks[q1 - 1, q2 - 1], imag[q1 - 1, q2 - 1] = v.real, v.imag
            tails[q1 - 1, q2 - 1], qerr[q1 - 1, q2 - 1] = abs(t), e
        del Y
    for q1 in range(1, min(q1max, q2max - 1) + 1):
        s_x = grid_x[q1]
        K1 = ktab(kern1, Q1, q1, s1, 1.0, s_x)
        # X[rho1, s2, x] = sum_{s1 = rho1 (q1)} K1[s1, x] T[s1, s2]
        Xt = np.stack([K1[np.mod(s1, q1) == rho].T @ T[np.mod(s1, q1) == rho] for rho in range(q1)], axis=0)
        for q2 in range(q1 + 1, q2max + 1):
            s = pair_nodes[q1, q2]
            step = s_x // s
            K2 = ktab(kern2, Q2, q2, s2, 2.0, s)
            Xsub = np.moveaxis(Xt[:, step - 1::step, :], 2, 0)  # (s2, rho1, x)
            Z = np.moveaxis(_fold_product(K2[:, None, :], Xsub, s2, q2), 0, 1)  # (rho1, rho2, x)
            v, t, e = finish(q1, q2, Z, s)
            blocks[q1 - 1, q2 - 1], imag[q1 - 1, q2 - 1] = v.real, v.imag
            tails[q1 - 1, q2 - 1], qerr[q1 - 1, q2 - 1] = abs(t), e
        del Xt
    scale = kern1.c_Q * kern2.c_Q / (Q1 ** 2 * Q2 ** 2)
    value = scale * math.fsum(blocks.ravel())
    return StageResult(
        "post_poisson", value, scale * math.fsum(imag.ravel()), scale * float(tails.sum()),
        scale * float(qerr.sum()), int(projected), time.perf_counter() - t0, scale * blocks,
        {"q1max": q1max, "q2max": q2max, "kappa": cfg.dual_kappa, "h_count": hs.size,
         "dual_counts": {k: 2 * dual_cutoff(k[0], k[1], H, cfg.dual_kappa) + 1 for k in pair_nodes},
         "nodes": pair_nodes},
    )


def run_pipeline(spec: ShiftedSumSpec, Q1: int | None = None, Q2: int | None = None,
                 config: PipelineConfig | None = None, stages=("delta_expanded", "post_poisson")) -> PipelineTrace:
    Q1 = Q1 or math.ceil(math.sqrt(spec.N))
    Q2 = Q2 or math.ceil(math.sqrt(spec.N))
    direct = averaged_sum(spec)
    trace = PipelineTrace(spec.N, spec.H, Q1, Q2, direct, params={"config": config or PipelineConfig()})
    if "delta_expanded" in stages:
        trace.stages["delta_expanded"] = delta_expanded_sum(spec, Q1, Q2, config=config)
    if "post_poisson" in stages:
        trace.stages["post_poisson"] = post_poisson_sum(spec, Q1, Q2, config=config)
    return trace
