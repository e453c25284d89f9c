"""
Command-line interface

Subcommands: sample, walk, chain, match, experiment, ingest, plot.
Exit codes: 0 success, 1 other failure, 2 configuration error, 3 data error.
"""
import argparse
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from .chain_analysis import (
    cover_time_stats,
    dump_chain_csv,
    dump_tv_curve_csv,
    enumerate_block_chain,
    enumerate_standard_chain,
    exact_mixing_time,
    power_iteration,
)
from .config import ExperimentConfig, GraphModel, InitMethod, SolverOptions, WalkKind
from .edgelighter import BlockWalkParams, StandardWalkParams, run_walk
from .errors import ConfigError, DataError, EdgelighterError, InvalidParameterError
from .etl import (
    EdgeListFile,
    LabelFile,
    induced_subgraph,
    largest_connected_component,
    load_network,
    parse_edge_list,
    parse_label_file,
    write_edge_list,
)
from .experiments import ExperimentOrchestrator, loglog_fit
from .graph_core import Graph, Partition, RngStream, skewed_sbm_params, sample_er, sample_sbm
from .matching import MatcherFactory, SeedSet, sample_seeds
from .utils import (
    load_environment,
    print_sweep_report,
    read_trace_csv,
    write_adjacency_svg,
    write_loglog_svg,
    write_manifest,
    write_svg_plot,
    write_sweep_outputs,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DATA = 3

SWEEP_MODELS = {
    'er-sweep': GraphModel.ER,
    'sbm-sweep': GraphModel.SBM,
    'loaded': GraphModel.LOADED,
}


# -- helpers -----------------------------------------------------------------

def _out_path(args, name: str) -> Path:
    path = Path(args.out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _load_graph(path: str, one_indexed: bool = False) -> Graph:
    return parse_edge_list(EdgeListFile(path, one_indexed=one_indexed))


def _load_partition(path: Optional[str], graph: Graph) -> Optional[Partition]:
    return parse_label_file(LabelFile(path), graph) if path else None


def _write_labels(partition: Partition, path: Path) -> None:
    """Labels keyed by dense vertex id, matching write_edge_list output"""
    lines = [f"{v} {int(label)}" for v, label in enumerate(partition.labels)]
    path.write_text("\n".join(lines) + "\n")


def _walk_params(args, partition: Optional[Partition]):
    if args.kind == WalkKind.BLOCK.value and partition is not None:
        return BlockWalkParams.uniform(partition.k, args.q1, args.q2)
    return StandardWalkParams(args.q1, args.q2)


# -- subcommands -------------------------------------------------------------

def cmd_sample(args) -> int:
    rng = RngStream(args.seed).derive("sample", args.model, args.n)
    if args.model == 'er':
        graph = sample_er(args.n, args.p, rng)
        partition = None
    else:
        graph, partition = sample_sbm(skewed_sbm_params(args.n, args.communities), rng)

    path = Path(args.output) if args.output else _out_path(args, f"{args.model}_n{args.n}.txt")
    write_edge_list(graph, str(path))
    if partition is not None:
        _write_labels(partition, path.with_name(path.stem + "_labels.txt"))
    print(f"Sampled {args.model} graph: n={graph.n}, {graph.edge_count} edges -> {path}")
    return EXIT_OK


def cmd_walk(args) -> int:
    rng = RngStream(args.seed)
    if args.input:
        graph = _load_graph(args.input, args.one_indexed)
    else:
        graph = sample_er(args.n, args.p, rng.derive("graph"))
    partition = _load_partition(args.labels, graph)
    if args.kind == WalkKind.BLOCK.value and partition is None:
        raise DataError("The block walk needs --labels")

    rows = []

    def record(state) -> None:
        rows.append({
            'step': state.step,
            'edge_count': state.graph.edge_count,
            'cover_rate': state.cover_rate,
            'position': state.position,
        })

    final = run_walk(
        graph, args.kind, _walk_params(args, partition), args.steps, args.every,
        record, rng.derive("walk"), partition=partition, keep_snapshots=False
    )[-1]

    csv_path = _out_path(args, f"walk_{args.kind}_n{graph.n}.csv")
    pd.DataFrame(rows).to_csv(csv_path, index=False, float_format='%.17g')
    write_edge_list(final.graph, str(csv_path.with_suffix('.final.txt')))
    print(f"Walked {final.step} steps: cover rate {final.cover_rate:.4f}, {final.graph.edge_count} edges -> {csv_path}")
    return EXIT_OK


def cmd_chain(args) -> int:
    if args.kind == WalkKind.BLOCK.value:
        if not (args.input and args.labels):
            raise DataError("Block chains need --input and --labels")
        graph = _load_graph(args.input)
        partition = _load_partition(args.labels, graph)
        params = BlockWalkParams.uniform(partition.k, args.q1, args.q2)
        model = enumerate_block_chain(graph, partition, params)
    else:
        graph, partition = None, None
        params = StandardWalkParams(args.q1, args.q2)
        model = enumerate_standard_chain(args.n, params)

    stem = f"chain_{args.kind}_n{model.n}"
    if args.action == 'enumerate':
        path = dump_chain_csv(model, _out_path(args, f"{stem}.csv"))
        print(f"{model.num_states} states, row-sum error {model.row_sum_error():.2e} -> {path}")

    elif args.action == 'stationary':
        iterated = power_iteration(model)
        residual = float(abs(iterated - model.stationary).sum()) / 2
        print(f"{model.num_states} states; power iteration vs closed form TV: {residual:.2e}")
        print(f"stationarity error {model.stationarity_error():.2e}, "
              f"detailed balance residual {model.detailed_balance_residual():.2e}")

    elif args.action == 'mixing':
        report = exact_mixing_time(model, epsilon=args.epsilon, threads=args.threads)
        path = dump_tv_curve_csv(report, _out_path(args, f"{stem}_tv.csv"))
        print(f"t_mix = {report.t_mix} (epsilon {report.epsilon}) -> {path}")

    else:
        rng = RngStream(args.seed).derive("cover", args.kind, model.n)
        stats = cover_time_stats(
            model.n, args.kind, params, args.replicates, rng, graph=graph, partition=partition
        )
        print(json.dumps(stats.to_dict(), indent=2))
    return EXIT_OK


def cmd_match(args) -> int:
    a = _load_graph(args.a, args.one_indexed)
    b = _load_graph(args.b, args.one_indexed)
    partition = _load_partition(args.labels, a)
    rng = RngStream(args.seed)
    if args.seed_ids:
        seeds = SeedSet([int(v) for v in args.seed_ids.split(',')], a.n)
    else:
        seeds = sample_seeds(a.n, args.seed_fraction, rng.derive("seeds"))

    options = SolverOptions(
        init=InitMethod(args.init),
        max_iterations=args.max_iterations,
        tolerance=args.tolerance,
        restarts=args.restarts
    )
    matcher = MatcherFactory.create_matcher(args.solver, options, rng.derive("solver"))
    result = matcher.match(a, b, seeds, partition)

    summary = result.to_dict()
    summary['seeds'] = len(seeds)
    summary['permutation'] = result.permutation.image.tolist()
    path = _out_path(args, f"match_{args.solver}_n{a.n}.json")
    path.write_text(json.dumps(summary, indent=2))
    print(f"objective {result.objective}, correctness {result.correctness:.4f}, "
          f"{result.shuffled} shuffled -> {path}")
    return EXIT_OK


def _experiment_config(args) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.from_file(args.config)
    elif args.preset:
        config = ExperimentConfig.preset(args.preset)
    else:
        config = ExperimentConfig(name=args.kind)

    overrides = {'model': SWEEP_MODELS[args.kind]}
    # only flags given on the command line beat the config file
    for flag, key in (('seed', 'seed'), ('threads', 'threads'), ('out_dir', 'output_dir')):
        if flag in args.explicit:
            overrides[key] = getattr(args, flag)
    if args.replicates is not None:
        overrides['replicates'] = args.replicates
    if args.n_values:
        overrides['n_values'] = tuple(args.n_values)
    if args.max_steps is not None:
        overrides['max_steps'] = args.max_steps
    config = replace(config, **overrides)
    try:
        config.validate()
    except InvalidParameterError as e:
        raise ConfigError(str(e)) from e
    return config


def cmd_experiment(args) -> int:
    config = _experiment_config(args)
    orchestrator = ExperimentOrchestrator(config, show_progress=not args.quiet)
    graph, partition = None, None
    if config.model == GraphModel.LOADED:
        graph, partition = load_network(config)
        results = orchestrator.run_loaded_graph(graph, partition)
    else:
        results = orchestrator.run()

    root = write_sweep_outputs(results, config.output_dir, plots=not args.no_plots)
    if graph is not None and not args.no_plots:
        write_adjacency_svg(graph, str(root / "adjacency.svg"), partition, title=config.name)
    write_manifest(str(root), config, {'experiment': args.kind})
    if not args.quiet:
        print_sweep_report(results)
    return EXIT_OK if results.successful else EXIT_FAILURE


def cmd_ingest(args) -> int:
    graph = _load_graph(args.edge_list, args.one_indexed)
    if args.range:
        graph = induced_subgraph(graph, id_range=tuple(args.range))
    if args.lcc:
        graph = largest_connected_component(graph)
    partition = _load_partition(args.labels, graph)

    path = Path(args.output) if args.output else _out_path(args, Path(args.edge_list).stem + "_clean.txt")
    write_edge_list(graph, str(path))
    if partition is not None:
        _write_labels(partition, path.with_name(path.stem + "_labels.txt"))
    print(f"Ingested {args.edge_list}: n={graph.n}, {graph.edge_count} edges -> {path}")
    return EXIT_OK


def cmd_plot(args) -> int:
    if args.trace:
        trace = read_trace_csv(args.trace)
        path = Path(args.output) if args.output else Path(args.trace).with_suffix('.svg')
        write_svg_plot(trace, str(path), title=args.title)
    elif args.graph:
        graph = _load_graph(args.graph, args.one_indexed)
        partition = _load_partition(args.labels, graph)
        path = Path(args.output) if args.output else Path(args.graph).with_name(Path(args.graph).stem + "_adjacency.svg")
        write_adjacency_svg(graph, str(path), partition, title=args.title)
    else:
        summary = pd.read_csv(args.summary)
        rows = summary[(summary['scope'] == 'global') & (summary['beta'] == args.beta)]
        points = [(float(n), float(t)) for n, t in zip(rows['n'], rows['median_t_hat'])
                  if math.isfinite(t) and t > 0]
        if not points:
            raise DataError(f"No finite medians for beta={args.beta} in {args.summary}")
        fit = loglog_fit(points) if len(points) >= 2 else None
        path = Path(args.output) if args.output else Path(args.summary).with_name(f"loglog_beta{args.beta:g}.svg")
        write_loglog_svg(points, fit, str(path), label=f"{args.beta:g}-anonymization time")
    print(f"Plot -> {path}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help="Master seed (default EDGELIGHTER_SEED or 0)")
    common.add_argument('--threads', type=int, default=None, help="Worker threads (default EDGELIGHTER_THREADS or 1)")
    common.add_argument('--out-dir', default=None, help="Output directory (default EDGELIGHTER_OUT_DIR or ./outputs)")
    common.add_argument('--verbose', action='store_true', help="Debug logging")
    common.add_argument('--quiet', action='store_true', help="Warnings only, no progress bars")

    parser = argparse.ArgumentParser(prog='edgelighter', description="Edgelighter walks and graph de-anonymization experiments")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('sample', parents=[common], help="Sample an ER or SBM graph")
    p.add_argument('--model', choices=['er', 'sbm'], default='er')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--p', type=float, default=0.5)
    p.add_argument('--communities', type=int, default=None)
    p.add_argument('--output', default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser('walk', parents=[common], help="Run an edgelighter walk")
    p.add_argument('--input', default=None, help="Edge list (default: sample ER(n, p))")
    p.add_argument('--one-indexed', action='store_true')
    p.add_argument('--labels', default=None)
    p.add_argument('--n', type=int, default=20)
    p.add_argument('--p', type=float, default=0.5)
    p.add_argument('--kind', choices=[k.value for k in WalkKind], default='standard')
    p.add_argument('--q1', type=float, default=0.5, help="P(on -> off) on traversal")
    p.add_argument('--q2', type=float, default=0.5, help="P(off -> on) on traversal")
    p.add_argument('--steps', type=int, required=True)
    p.add_argument('--every', type=int, default=1)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser('chain', parents=[common], help="Exact analysis of tiny chains")
    p.add_argument('action', choices=['enumerate', 'stationary', 'mixing', 'cover'])
    p.add_argument('--kind', choices=['standard', 'block'], default='standard')
    p.add_argument('--n', type=int, default=3)
    p.add_argument('--input', default=None)
    p.add_argument('--labels', default=None)
    p.add_argument('--q1', type=float, default=0.5)
    p.add_argument('--q2', type=float, default=0.5)
    p.add_argument('--epsilon', type=float, default=0.25)
    p.add_argument('--replicates', type=int, default=1000)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser('match', parents=[common], help="Match two graphs")
    p.add_argument('--a', required=True)
    p.add_argument('--b', required=True)
    p.add_argument('--one-indexed', action='store_true')
    p.add_argument('--labels', default=None)
    p.add_argument('--solver', choices=['faq', 'exact'], default='faq')
    p.add_argument('--seed-fraction', type=float, default=0.05)
    p.add_argument('--seed-ids', default=None, help="Comma-separated seed vertices")
    p.add_argument('--init', choices=[m.value for m in InitMethod], default='barycenter')
    p.add_argument('--max-iterations', type=int, default=30)
    p.add_argument('--tolerance', type=float, default=1e-6)
    p.add_argument('--restarts', type=int, default=1)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser('experiment', parents=[common], help="Run an anonymization sweep")
    p.add_argument('kind', choices=sorted(SWEEP_MODELS))
    p.add_argument('--config', default=None, help="TOML config file")
    p.add_argument('--preset', default=None, help="Named preset")
    p.add_argument('--replicates', type=int, default=None)
    p.add_argument('--n-values', type=int, nargs='+', default=None)
    p.add_argument('--max-steps', type=int, default=None)
    p.add_argument('--no-plots', action='store_true')
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser('ingest', parents=[common], help="Clean a SNAP edge list")
    p.add_argument('edge_list')
    p.add_argument('--one-indexed', action='store_true')
    p.add_argument('--range', type=int, nargs=2, metavar=('LOW', 'HIGH'), default=None)
    p.add_argument('--lcc', action='store_true', help="Keep the largest connected component")
    p.add_argument('--labels', default=None)
    p.add_argument('--output', default=None)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser('plot', parents=[common], help="Render a trace, log-log or adjacency figure")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--trace', default=None, help="Trace CSV")
    group.add_argument('--summary', default=None, help="Sweep summary CSV")
    group.add_argument('--graph', default=None, help="Edge list for an adjacency-matrix figure")
    p.add_argument('--labels', default=None, help="Community labels ordering the adjacency rows")
    p.add_argument('--one-indexed', action='store_true')
    p.add_argument('--beta', type=float, default=0.5)
    p.add_argument('--title', default=None)
    p.add_argument('--output', default=None)
    p.set_defaults(func=cmd_plot)

    return parser


def _configure_logging(args) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_environment()
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)

    args.explicit = {flag for flag in ('seed', 'threads', 'out_dir') if getattr(args, flag) is not None}

    try:
        # unset global flags fall back to the environment through ExperimentConfig
        try:
            defaults = ExperimentConfig()
        except ValueError as e:
            raise ConfigError(f"Invalid EDGELIGHTER_* environment value: {e}") from e
        args.seed = defaults.seed if args.seed is None else args.seed
        args.threads = defaults.threads if args.threads is None else args.threads
        args.out_dir = defaults.output_dir if args.out_dir is None else args.out_dir

        return args.func(args)
    except (ConfigError, InvalidParameterError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except DataError as e:
        logger.error(f"Data error: {e}")
        return EXIT_DATA
    except EdgelighterError as e:
        logger.error(f"❌ {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
