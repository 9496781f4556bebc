"""Command-line entry point: ``shiftconv <subcommand> [flags]``.

Exit status 0 on success, 1 when a tolerance check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import sys

from ..delta import DeltaConstructionError
from ..numerics.quadrature import QuadratureError
from ..shifted import BudgetExceeded
from ..summation import VoronoiTruncationError
from . import experiments as ex
from .config import OUTPUT_ENV, ConfigError, load_config
from .selftest import run_selftest

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
# computations that refuse to produce a number count as failures, not usage errors
REFUSALS = (BudgetExceeded, DeltaConstructionError, QuadratureError, VoronoiTruncationError)


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _pairs(text: str) -> list[tuple[int, int]]:
    try:
        return [tuple(int(float(v)) for v in p.split(":")) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected q:X pairs, got {text!r}") from None


_COMMON = argparse.ArgumentParser(add_help=False)
_g = _COMMON.add_argument_group("harness configuration")
_g.add_argument("--config", help="key = value file; flags override it")
_g.add_argument("--output-dir", dest="output_dir", help=f"report directory (env {OUTPUT_ENV} also sets it)")
_g.add_argument("--quad-tol", dest="quad_tol", type=float)
_g.add_argument("--identity-tol", dest="identity_tol", type=float)
_g.add_argument("--truncated-tol", dest="truncated_tol", type=float)
_g.add_argument("--tail-tol", dest="tail_tol", type=float)
_g.add_argument("--C", dest="C", type=float, help="truncation constant in C log^3")
_g.add_argument("--workers", type=int)
_g.add_argument("--seed", type=int)
_g.add_argument("--cache-dir", dest="cache_dir", help="coefficient cache directory")

_CONFIG_KEYS = ("output_dir", "quad_tol", "identity_tol", "truncated_tol", "tail_tol", "C", "workers", "seed",
                "cache_dir")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shiftconv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", metavar="subcommand")
    sub.required = True

    def add(name, help, epilog):
        return sub.add_parser(name, parents=[_COMMON], help=help, epilog="CSV columns: " + epilog,
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    s = add("coeffs", "dump eigenform coefficients", "coeffs_coefficients.csv: n, a(n), lambda(n), d(n)")
    s.add_argument("--weight", type=int, default=12)
    s.add_argument("--prec", type=int, default=100)

    s = add("delta-check", "delta-symbol identity over an n range", "delta_check_values.csv: n, delta_eval, indicator")
    s.add_argument("--Q", type=int, default=10)
    s.add_argument("--n-range", dest="n_range", type=_range, default=(-100, 100))

    s = add("poisson-check", "Poisson summation in residue classes",
            "poisson_check_cases.csv: a, q, X, lhs_re, lhs_im, rel_error, tail, cut, quad_error")
    s.add_argument("--q-max", dest="q_max", type=int, default=10)
    s.add_argument("--X", dest="xs", type=_ints, default=[50, 200, 1000])

    s = add("voronoi-check", "holomorphic Voronoi summation",
            "voronoi_check_cases.csv: weight, a, q, X, lhs_re, lhs_im, rhs_re, rhs_im, rel_error, tail, cut, "
            "quad_error")
    s.add_argument("--weights", type=_ints, default=[12, 16])
    s.add_argument("--pairs", type=_pairs, default=[(1, 100), (2, 500), (5, 1000)], help="q:X list")

    s = add("twist-scan", "additive twists at seeded random alpha",
            "twist_scan_sup.csv: X, sup_ratio, zero_ratio; twist_scan_ratios.csv: alpha, X=<x> ...")
    s.add_argument("--weight", type=int, default=12)
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--x-grid", dest="xgrid", type=_ints, default=[1000, 3000, 10000, 30000, 100000])

    s = add("shifted-sum", "the averaged shifted sum, both traversal orders", "none (JSON only)")
    s.add_argument("--weights", type=_ints, default=[12, 12, 12])
    s.add_argument("--N", type=int, default=500)
    s.add_argument("--H", type=int, default=30)
    s.add_argument("--split", action="store_true", help="separate windows on the three factors")

    s = add("pipeline-check", "delta-expanded and post-Poisson stages against the direct sum",
            "pipeline_check_stages.csv: stage, value, rel_error, tail, quad_error, terms, seconds")
    s.add_argument("--weights", type=_ints, default=[12, 12, 12])
    s.add_argument("--N", type=int, default=500)
    s.add_argument("--H", type=int, default=30)
    s.add_argument("--Q", type=int, default=None, help="default ceil(sqrt N)")
    s.add_argument("--kappa", type=float, default=30.0, help="dual cut |h| <= kappa (q1 q2/H + 1)")
    s.add_argument("--stages", default="delta_expanded,post_poisson")
    s.add_argument("--budget", type=float, default=None)
    s.add_argument("--poisson-budget", dest="poisson_budget", type=float, default=None)

    s = add("divisor-fit", "Ingham fit of the divisor correlation", "divisor_fit_values.csv: X, D2")
    s.add_argument("--h", type=int, default=1)
    s.add_argument("--x-grid", dest="xgrid", type=_ints, default=[10 ** 5, 3 * 10 ** 5, 10 ** 6, 3 * 10 ** 6, 10 ** 7])

    s = add("decay-scan", "growth exponent of the shifted sum with H = ceil(N^theta)",
            "decay_scan_grid.csv: N, H, S, trivial_ratio")
    s.add_argument("--weights", type=_ints, default=[12, 12, 12])
    s.add_argument("--theta", type=float, default=0.6)
    s.add_argument("--n-grid", dest="ngrid", type=_ints, default=[1000, 3000, 10000, 30000])
    s.add_argument("--eps-margin", dest="eps_margin", type=float, default=0.05)

    s = add("j-decay", "decay of the post-Poisson x-integral at the reference point", "j_decay_profile.csv: h, abs_J")
    s.add_argument("--hmax", type=int, default=40)

    add("selftest", "reduced-scale acceptance suite", "none (prints one line per criterion)")
    return p


def _dispatch(args, cfg):
    c = args.command
    if c == "coeffs":
        return ex.run_coeffs(cfg, args.weight, args.prec)
    if c == "delta-check":
        return ex.run_delta_check(cfg, args.Q, args.n_range)
    if c == "poisson-check":
        return ex.run_poisson_check(cfg, args.q_max, args.xs)
    if c == "voronoi-check":
        return ex.run_voronoi_check(cfg, args.weights, args.pairs)
    if c == "twist-scan":
        return ex.run_twist_scan(cfg, args.weight, args.count, args.xgrid)
    if c == "shifted-sum":
        return ex.run_shifted_sum(cfg, args.weights, args.N, args.H, args.split)
    if c == "pipeline-check":
        stages = tuple(s.strip() for s in args.stages.split(",") if s.strip())
        bad = set(stages) - {"delta_expanded", "post_poisson"}
        if bad:
            raise UsageError(f"unknown stages {sorted(bad)}")
        return ex.run_pipeline_check(cfg, args.weights, args.N, args.H, args.Q, args.kappa, stages,
                                     int(args.budget) if args.budget else None,
                                     int(args.poisson_budget) if args.poisson_budget else None)
    if c == "divisor-fit":
        return ex.run_divisor_fit(cfg, args.h, args.xgrid)
    if c == "decay-scan":
        return ex.run_decay_scan(cfg, args.weights, args.ngrid, args.theta, args.eps_margin)
    if c == "j-decay":
        return ex.run_j_decay(cfg, args.hmax)
    raise UsageError(f"unknown subcommand {c}")  # pragma: no cover


_NEGATIVE_OK = ("--n-range",)


def _glue_negative(argv: list[str]) -> list[str]:
    """Let ``--n-range -100:100`` through; argparse would read -100:100 as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _NEGATIVE_OK and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = load_config(args.config, **{k: getattr(args, k) for k in _CONFIG_KEYS})
    except (ConfigError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"shiftconv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "selftest":
        results = run_selftest(cfg)
        return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL
    try:
        rep = _dispatch(args, cfg)
    except REFUSALS as exc:
        print(f"shiftconv: {args.command} refused: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"shiftconv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    paths = rep.write(cfg.output_dir)
    status = "ok" if rep.passed else "FAILED " + ",".join(k for k, v in rep.checks.items() if not v)
    print(f"{rep.experiment}: {status} ({rep.seconds:.2f}s) -> {paths[-1]}")
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
