"""Command line entry point: ``hypercollapse <subcommand> ...``.

Exit status is 0 on success, 1 for bad input or configuration and 2 when
the beta series violates the model assumption on ``beta'(t) + log(1-t)``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analytic
from .collapse import collapse
from .errors import HypercollapseError, ModelAssumptionError
from .genrand import make_rng, sample_hypergraph
from .model import Hypergraph, HypergraphSpec, parse_edge_list


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _betas(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad beta list {text!r}") from None


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--file", type=Path, help="hypergraph text file ('N <n>' then one edge per line)")
    p.add_argument("--edges", help="edge list such as '0;0 1;1 2' (needs --n)")
    p.add_argument("--n", type=int, help="number of vertices")
    p.add_argument("--beta", type=_betas, help="sample from this beta list instead (needs --n)")
    p.add_argument("--seed", type=int, default=0)


def _load_graph(args) -> Hypergraph:
    if args.file is not None:
        return Hypergraph.load(args.file)
    if args.n is None:
        raise HypercollapseError("give --file, or --n with --edges or --beta")
    if args.edges is not None:
        return Hypergraph(args.n, parse_edge_list(args.edges))
    if args.beta is not None:
        return sample_hypergraph(HypergraphSpec(args.n, args.beta), make_rng(args.seed))
    raise HypercollapseError("give --edges or --beta together with --n")


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_limits(args) -> int:
    print(analytic.limits(args.beta).to_json())
    return 0


def cmd_run(args) -> int:
    from .experiments import ExperimentConfig, run_experiment

    cfg = ExperimentConfig.load(args.config)
    if args.out is not None:
        cfg.output_path = args.out
    if cfg.output_path is None:
        cfg.output_path = Path(".")
    if args.parallelism is not None:
        cfg.parallelism = args.parallelism
    _, agg = run_experiment(cfg)
    print(f"wrote {cfg.output_path / 'trials.csv'} and {cfg.output_path / 'aggregate.json'}")
    for name, s in agg.observables.items():
        lim = "n/a" if s.limit is None else f"{s.limit:.6f}"
        print(f"{name:>16}: mean={s.mean:.6f} stderr={s.stderr:.6f} limit={lim}")
    return 0


def cmd_collapse(args) -> int:
    h = _load_graph(args)
    rng = make_rng(args.seed) if args.policy == "random" else None
    res = collapse(h, policy=args.policy, rng=rng)
    if args.dump_order:
        res.dump_removal_order(args.dump_order)
    _emit({"N": h.n_vertices, "V_star": sorted(res.identifiable_vertices), "V_N": res.V_N, "H_N": res.H_N})
    return 0


def cmd_essential(args) -> int:
    from .essential import classify_all

    h = _load_graph(args)
    rep = classify_all(h, method=args.method)
    out = rep.to_dict()
    if args.list:
        out["essential_edges"] = [list(h.edges[i]) for i in rep.essential_ids()]
    _emit(out)
    return 0


def cmd_domains(args) -> int:
    from .domains import domain_size_distribution

    spec = HypergraphSpec(args.n, (0.0, args.beta2))
    dist = domain_size_distribution(spec, args.trials, make_rng(args.seed),
                                    probes_per_graph=args.probes_per_graph, overflow_at=args.overflow_at)
    text = dist.to_csv()
    if args.csv:
        args.csv.write_text(text)
    else:
        sys.stdout.write(text)
    if 2 * args.beta2 < 1:
        stat, p = dist.chi_square()
        print(f"chi-square over sizes 1..8, >=9: stat={stat:.4f} p={p:.4f}", file=sys.stderr)
    return 0


def cmd_graphcase(args) -> int:
    from .graphcase import core_mantle_fractions, core_mantle_limits, decompose

    if args.trials:
        if args.n is None or args.beta2 is None:
            raise HypercollapseError("--trials needs --n and --beta2")
        spec = HypergraphSpec(args.n, (0.0, args.beta2))
        core, mantle = core_mantle_fractions(spec, args.trials, args.seed)
        core_lim, mantle_lim = core_mantle_limits(args.beta2)
        _emit({"N": args.n, "trials": args.trials, "core_frac": core, "mantle_frac": mantle,
               "core_limit": core_lim, "mantle_limit": mantle_lim, "theta": analytic.theta(args.beta2)})
        return 0
    if args.beta2 is not None and args.beta is None:
        args.beta = (0.0, args.beta2)
    _emit(decompose(_load_graph(args)).summary())
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return 0 if run_selftest(seed=args.seed) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hypercollapse", description="Collapse and essential edges in Poisson random hypergraphs.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("limits", help="print the analytic limit constants for a beta list")
    p.add_argument("--beta", type=_betas, required=True, help="comma separated beta_1,beta_2,...")
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("run", help="run a Monte Carlo experiment from a TOML config")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--out", type=Path, help="output directory (overrides output_path)")
    p.add_argument("--parallelism", type=int)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("collapse", help="collapse one hypergraph and print V*")
    _add_graph_source(p)
    p.add_argument("--policy", choices=["min-id", "random", "fifo"], default="min-id")
    p.add_argument("--dump-order", type=Path, help="write the removal order, one vertex per line")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("essential", help="classify the edges of one hypergraph")
    _add_graph_source(p)
    p.add_argument("--method", choices=["local", "full", "graph"], default="local")
    p.add_argument("--list", action="store_true", help="also list the essential edges")
    p.set_defaults(func=cmd_essential)

    p = sub.add_parser("domains", help="empirical domain sizes against Borel(2 beta_2)")
    p.add_argument("--beta2", type=float, required=True)
    p.add_argument("--n", type=int, default=5000)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--probes-per-graph", type=int, default=1)
    p.add_argument("--overflow-at", type=int, default=1000)
    p.add_argument("--csv", type=Path, help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_domains)

    p = sub.add_parser("graphcase", help="components, 2-core and mantle of a graph")
    _add_graph_source(p)
    p.add_argument("--beta2", type=float)
    p.add_argument("--trials", type=int, default=0, help="Monte Carlo core/mantle fractions over this many graphs")
    p.set_defaults(func=cmd_graphcase)

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not getattr(args, "func", None):
        ap.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except ModelAssumptionError as exc:
        print(f"model assumption violated: {exc}", file=sys.stderr)
        return 2
    except (HypercollapseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
