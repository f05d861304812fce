"""Command-line interface.

Subcommands:

  gen         generate an instance family to a points CSV / edge list
  solve       local-search k-median on a dataset file
  sample      draw a uniform sample, emit ``point_id,weight`` CSV
  coreset     build an importance-sampling coreset, emit CSV
  exact       exact k-median (brute force / 1D DP) on a dataset file
  verify      weak-coreset verification of a sample file
  experiment  run an experiment spec (TOML file or flags) to CSV

Results print as single JSON lines on stdout; data products go to files.
Exit codes: 0 success, 2 invalid input, 3 enumeration budget exceeded.
The ``KMEDSAMPLE_THREADS`` environment variable sizes the trial thread pool.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .core import Dataset, solution_balancedness
from .coreset import build_coreset
from .diagnostics import verify_weak_coreset
from .errors import KmedsampleError
from .exact import brute_force_kmedian, dp_1d_kmedian
from .harness import EXPERIMENT_TAGS, run_experiment, spec_from_dict
from .instances import gen_gaussian_mixture, gen_graph_random, gen_lemma5, gen_thm3
from .metric import (
    load_edge_list,
    load_matrix_csv,
    load_points_csv,
    write_edge_list,
    write_points_csv,
)
from .sampling import load_sample_csv, uniform_sample, write_sample_csv
from .solvers import LocalSearchConfig, local_search


def _load_dataset(args) -> Dataset:
    loaders = {"csv": load_points_csv, "edges": load_edge_list, "matrix": load_matrix_csv}
    return Dataset(loaders[args.format](args.input))


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="dataset file")
    p.add_argument(
        "--format", choices=("csv", "edges", "matrix"), default="csv", help="input format"
    )


def _emit(obj: dict) -> None:
    print(json.dumps(obj, sort_keys=True))


def _centers_repr(centers) -> list:
    out = []
    for c in centers:
        if isinstance(c, (int, np.integer)):
            out.append(int(c))
        else:
            out.append([float(x) for x in np.asarray(c).ravel()])
    return out


def _cmd_gen(args) -> int:
    if args.family == "thm3":
        ds = gen_thm3(n=args.n, beta=args.beta, t=args.t, seed=args.seed)
        write_points_csv(ds.backend, args.output)
    elif args.family == "lemma5":
        ds = gen_lemma5(n=args.n, f=args.f, w=args.w, seed=args.seed)
        write_points_csv(ds.backend, args.output)
    elif args.family == "gaussian_mixture":
        ds = gen_gaussian_mixture(
            k=args.k,
            per_cluster=args.per_cluster,
            d=args.d,
            separation=args.separation,
            spread=args.spread,
            seed=args.seed,
        )
        write_points_csv(ds.backend, args.output)
    else:  # graph_random
        backend = gen_graph_random(nv=args.nv, ne=args.ne, wmax=args.wmax, seed=args.seed)
        write_edge_list(backend, args.output)
    _emit({"family": args.family, "output": args.output})
    return 0


def _cmd_solve(args) -> int:
    X = _load_dataset(args)
    cfg = LocalSearchConfig(
        k=args.k,
        seed=args.seed,
        delta=args.delta,
        beta_min=args.beta_min,
        max_iterations=args.max_iterations,
    )
    result = local_search(X, cfg)
    _emit(
        {
            "cost": result.cost,
            "centers": _centers_repr(result.centers),
            "balancedness": solution_balancedness(X, result.centers),
            "swaps": result.swaps,
        }
    )
    return 0


def _cmd_sample(args) -> int:
    X = _load_dataset(args)
    S = uniform_sample(X, args.m, args.seed)
    if args.output:
        write_sample_csv(S, args.output)
    _emit({"m": S.size, "seed": args.seed, "output": args.output})
    return 0


def _cmd_coreset(args) -> int:
    X = _load_dataset(args)
    S = build_coreset(X, args.k, args.m, seed=args.seed)
    if args.output:
        write_sample_csv(S, args.output)
    _emit(
        {
            "m": S.size,
            "k": args.k,
            "weight_sum": float(S.weights.sum()),
            "output": args.output,
        }
    )
    return 0


def _cmd_exact(args) -> int:
    X = _load_dataset(args)
    if X.is_euclidean and X.backend.dim == 1 and args.beta_min == 0.0:
        res = dp_1d_kmedian(X, args.k)
    else:
        res = brute_force_kmedian(X, args.k, beta_min=args.beta_min)
    _emit(
        {
            "cost": res.cost,
            "centers": _centers_repr(res.centers),
            "balancedness": res.max_balance,
        }
    )
    return 0


def _cmd_verify(args) -> int:
    X = _load_dataset(args)
    S = load_sample_csv(X, args.sample)
    report = verify_weak_coreset(
        X, S, k=args.k, beta=args.beta, epsilon=args.epsilon, factor=args.factor
    )
    _emit(
        {
            "passes": report.passes,
            "reason": report.reason,
            "witness": _centers_repr(report.witness) if report.witness else None,
            "opt_x": report.opt_x,
            "opt_s": report.opt_s,
            "near_optimal_on_s": report.near_optimal_on_s,
        }
    )
    return 0


def _cmd_experiment(args) -> int:
    if args.spec:
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        with open(args.spec, "rb") as fh:
            data = tomllib.load(fh)
        data.setdefault("experiment", args.tag)
        if data["experiment"] != args.tag:
            raise KmedsampleError(
                f"spec file runs {data['experiment']!r} but the command says {args.tag!r}"
            )
        spec = spec_from_dict(data)
        if args.output:
            data["output"] = args.output
            spec = spec_from_dict(data)
    else:
        payload = {
            "experiment": args.tag,
            "k_values": args.k_list,
            "m_values": args.m_list,
            "repetitions": args.reps,
            "seed": args.seed,
            "output": args.output,
        }
        if args.input:
            payload["input_path"] = args.input
            payload["input_format"] = args.format
        if args.family:
            params = {}
            for kv in args.param or []:
                key, _, val = kv.partition("=")
                try:
                    params[key] = json.loads(val)
                except json.JSONDecodeError:
                    params[key] = val
            payload["generator"] = {
                "family": args.family,
                "params": params,
                "seed": args.seed,
            }
        spec = spec_from_dict(payload)
    rows = run_experiment(spec)
    _emit({"experiment": spec.experiment, "rows": len(rows), "output": spec.output})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kmedsample", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance family")
    gen_sub = p.add_subparsers(dest="family", required=True)
    g = gen_sub.add_parser("thm3")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--beta", type=float, required=True)
    g.add_argument("--t", type=int, default=1)
    g = gen_sub.add_parser("lemma5")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--f", type=int, required=True)
    g.add_argument("--w", type=float, required=True)
    g = gen_sub.add_parser("gaussian_mixture")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--per-cluster", dest="per_cluster", type=int, required=True)
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--separation", type=float, default=100.0)
    g.add_argument("--spread", type=float, default=1.0)
    g = gen_sub.add_parser("graph_random")
    g.add_argument("--nv", type=int, required=True)
    g.add_argument("--ne", type=int, required=True)
    g.add_argument("--wmax", type=float, default=1.0)
    for g in gen_sub.choices.values():
        g.add_argument("--seed", type=int, default=0)
        g.add_argument("-o", "--output", required=True)

    p = sub.add_parser("solve", help="local-search k-median")
    _add_input_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta-min", dest="beta_min", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=1e-4)
    p.add_argument("--max-iterations", dest="max_iterations", type=int, default=None)

    p = sub.add_parser("sample", help="uniform sample to CSV")
    _add_input_args(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("coreset", help="importance-sampling coreset to CSV")
    _add_input_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("exact", help="exact k-median oracle")
    _add_input_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta-min", dest="beta_min", type=float, default=0.0)

    p = sub.add_parser("verify", help="verification checks")
    verify_sub = p.add_subparsers(dest="check", required=True)
    v = verify_sub.add_parser("weak-coreset")
    _add_input_args(v)
    v.add_argument("--sample", required=True, help="sample CSV (point_id,weight)")
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--beta", type=float, required=True)
    v.add_argument("--epsilon", type=float, required=True)
    v.add_argument("--factor", type=float, default=3.0)

    p = sub.add_parser("experiment", help="run an experiment to CSV")
    p.add_argument("tag", choices=EXPERIMENT_TAGS)
    p.add_argument("--spec", default=None, help="TOML experiment spec")
    p.add_argument("--input", default=None)
    p.add_argument("--format", choices=("csv", "edges", "matrix"), default="csv")
    p.add_argument("--family", default=None, help="generator family (instead of --input)")
    p.add_argument("--param", action="append", help="generator parameter key=value")
    p.add_argument("--k-list", dest="k_list", type=int, nargs="+", default=[2])
    p.add_argument("--m-list", dest="m_list", type=int, nargs="+", default=[])
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen": _cmd_gen,
        "solve": _cmd_solve,
        "sample": _cmd_sample,
        "coreset": _cmd_coreset,
        "exact": _cmd_exact,
        "verify": _cmd_verify,
        "experiment": _cmd_experiment,
    }
    try:
        return handlers[args.command](args)
    except KmedsampleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
