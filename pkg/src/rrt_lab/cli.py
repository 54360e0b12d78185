"""``rrt-lab``: run the named experiments from the command line.

Exit codes: 0 = run completed and met its tolerance, 1 = run completed but a
tolerance failed, 2 = anything that prevented the run (bad flags or config,
unknown experiment, unwritable output, ...).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .harness import EXPERIMENTS, load_config, run_experiment

_HELP = {
    "depth-law": "scaled depth of vertex n against the max-Brownian-motion law",
    "depth-exact-check": "tree-grown samples against the exact conditional pmfs",
    "arcsine": "minimum time tau(n)/n against the generalized arcsine law",
    "outdeg-profile": "mean outdegree at floor(nt) against the limit profile",
    "scaling": "growth/decay exponents of the root and newest-vertex outdegrees",
    "subcritical": "depth law freezing when the weights are summable",
    "texpect": "normalized mean outdegree at the walk minimum vs its limit law",
    "sanity": "structural identities (normalization, recursivity, harmonic sums)",
    "bench": "growth throughput and sampler rebuild counts per backend",
}


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(","))


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rrt-lab",
        description="simulation lab for recursive trees grown in a random "
                    "environment of vertex weights")
    sub = parser.add_subparsers(dest="experiment", metavar="experiment", required=True)
    for name in EXPERIMENTS:
        sp = sub.add_parser(name, help=_HELP[name])
        sp.add_argument("--config", help="TOML config file (flags override it)")
        sp.add_argument("--seed", type=int, help="64-bit experiment seed (mandatory)")
        sp.add_argument("--n", type=int, help="tree / walk size")
        sp.add_argument("--n2", type=int, help="second size (subcritical)")
        sp.add_argument("--n-grid", type=_ints, metavar="N1,N2,...",
                        help="sizes for the scaling experiment")
        sp.add_argument("--reps", type=int, help="number of replicates")
        sp.add_argument("--threads", type=int,
                        help="worker threads (fallback: RRT_LAB_THREADS, else 1)")
        sp.add_argument("--out", help="CSV output path (JSON summary written next to it)")
        sp.add_argument("--tol", type=float, help="override the experiment tolerance")
        sp.add_argument("--env-model",
                        choices=["constant", "power", "stretched_exp",
                                 "product_form", "iid_weights"])
        sp.add_argument("--alpha", type=float, help="power / stretched exponent")
        sp.add_argument("--weight-dist", choices=["uniform", "exponential", "constant"])
        sp.add_argument("--weight-low", type=float)
        sp.add_argument("--weight-high", type=float)
        sp.add_argument("--weight-mean", type=float)
        sp.add_argument("--increments",
                        choices=["gaussian", "rademacher", "lattice_atom", "stable"])
        sp.add_argument("--sigma", type=float, help="gaussian increment scale")
        sp.add_argument("--stable-alpha", type=float)
        sp.add_argument("--stable-beta", type=float)
        sp.add_argument("--p0", type=float, help="atom at zero for lattice increments")
        sp.add_argument("--edge-lengths", choices=["unit", "deterministic", "exponential"])
        sp.add_argument("--edge-mean", type=float)
        sp.add_argument("--edge-const", type=float)
        sp.add_argument("--t-grid", type=_floats, metavar="T1,T2,...")
        sp.add_argument("--j-list", type=_ints, metavar="J1,J2,...")
        sp.add_argument("--cap", type=int, help="exact-pmf size cap")
        sp.add_argument("--sigma-m-reps", type=int,
                        help="replicates for auxiliary estimation passes")
        sp.add_argument("--chunk", type=int, help="replicates per worker task")
        sp.add_argument("--max-rebuilds", type=int)
        sp.add_argument("--time-limit", type=float, help="bench time budget, seconds")
    return parser

_FLAG_FIELDS = (
    "seed", "n", "n2", "n_grid", "reps", "threads", "out", "tol", "env_model",
    "alpha", "weight_dist", "weight_low", "weight_high", "weight_mean",
    "increments", "sigma", "stable_alpha", "stable_beta", "p0", "edge_lengths",
    "edge_mean", "edge_const", "t_grid", "j_list", "cap", "sigma_m_reps",
    "chunk", "max_rebuilds", "time_limit",
)


def _overrides_from(args: argparse.Namespace) -> dict:
    overrides = {name: getattr(args, name) for name in _FLAG_FIELDS}
    if overrides.get("threads") is None and "RRT_LAB_THREADS" in os.environ:
        raw = os.environ["RRT_LAB_THREADS"]
        try:
            overrides["threads"] = int(raw)
        except ValueError:
            raise ValueError(f"RRT_LAB_THREADS must be an integer, got {raw!r}") from None
    return overrides


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = _overrides_from(args)
        cfg = load_config(args.experiment, args.config, overrides)
        table, summary = run_experiment(cfg)
    except (ValueError, OSError) as exc:
        print(f"rrt-lab: error: {exc}", file=sys.stderr)
        return 2
    print(f"experiment: {summary['experiment']}")
    print(f"claim: {summary['claim']}")
    print(f"statistics: {json.dumps(summary['statistics'], sort_keys=True, default=str)}")
    if cfg.out is not None:
        print(f"wrote: {cfg.out} (+ JSON summary)")
    print("result: " + ("PASS" if summary["passed"] else "FAIL"))
    return 0 if summary["passed"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
