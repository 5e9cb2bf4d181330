"""Command-line entry point: ``streampart {partition,fennel,metrics,make-order}``."""

from __future__ import annotations

import argparse
import logging
import sys
import time

from .engine import EngineConfig, partition
from .fennel import default_params, fennel_pass
from .graph import load_metis, read_assignment, write_assignment
from .metrics import build_report
from .multilevel import MultilevelConfig
from .ordering import parse_order_spec, random_order, save_order, source_order
from .scoring import DEFAULT_THETA, ScoreKind, ScoringConfig
from .state import PartitionState

log = logging.getLogger("streampart")


def _positive_int(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return val


def _add_common(p: argparse.ArgumentParser, with_k: bool = True) -> None:
    p.add_argument("graph", help="input graph in METIS format")
    p.add_argument("--order", default="source",
                   help="stream order: source, random:SEED or file:PATH (default: source)")
    if with_k:
        p.add_argument("--k", type=_positive_int, required=True, help="number of blocks")
        p.add_argument("--epsilon", type=float, default=0.03,
                       help="allowed imbalance; L_max = ceil((1+eps) c(V) / k) (default: 0.03)")
    p.add_argument("--report", help="also write the report here (JSON if the name ends in .json)")
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for per-batch lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streampart",
        description="Buffered streaming graph partitioning with prioritized batching.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="run the buffered streaming partitioner")
    _add_common(p)
    p.add_argument("--q-max", type=_positive_int, default=1_048_576,
                   help="priority buffer capacity (default: 1048576)")
    p.add_argument("--delta", type=_positive_int, default=65_536,
                   help="batch size (default: 65536)")
    p.add_argument("--d-max", type=_positive_int, default=10_000,
                   help="hub degree threshold and score normalizer (default: 10000)")
    p.add_argument("--disc-factor", type=float, default=1000.0,
                   help="score discretization factor for the bucket queue (default: 1000)")
    p.add_argument("--score", choices=[s.value for s in ScoreKind], default="haa",
                   help="buffer score (default: haa)")
    p.add_argument("--theta", type=float, default=None,
                   help="ANR weight for haa/cbs (default: 0.75 for haa, 2 for cbs)")
    p.add_argument("--beta", type=float, default=None, help="degree exponent for haa (default: 2)")
    p.add_argument("--eta", type=float, default=None, help="buffered-neighbor weight for nss (default: 0.5)")
    p.add_argument("--passes", type=_positive_int, default=1,
                   help="total passes; passes after the first restream without a buffer (default: 1)")
    p.add_argument("--parallel", action="store_true",
                   help="overlap reading, buffering and partitioning in the first pass")
    p.add_argument("--seed", type=int, default=0, help="seed for coarsening tie-breaks (default: 0)")
    p.add_argument("--stop-size", type=_positive_int, default=None,
                   help="coarsening stops at this many nodes (default: max(2k, 2048))")
    p.add_argument("--refine-rounds", type=_positive_int, default=3,
                   help="local search rounds per level (default: 3)")
    p.add_argument("--alpha", type=float, default=None,
                   help="Fennel alpha (default: sqrt(k) * w(E) / c(V)^1.5)")
    p.add_argument("-o", "--output", help="assignment output path (default: GRAPH.part.K)")

    p = sub.add_parser("fennel", help="one-pass Fennel baseline without buffering")
    _add_common(p)
    p.add_argument("--alpha", type=float, default=None,
                   help="Fennel alpha (default: sqrt(k) * w(E) / c(V)^1.5)")
    p.add_argument("-o", "--output", help="assignment output path (default: GRAPH.fennel.K)")

    p = sub.add_parser("metrics", help="evaluate an existing assignment")
    _add_common(p, with_k=False)
    p.add_argument("--assignment", required=True, help="one block id per line")
    p.add_argument("--k", type=_positive_int, default=None, help="number of blocks (default: max block + 1)")
    p.add_argument("--epsilon", type=float, default=0.03, help="imbalance used for the balance check (default: 0.03)")

    p = sub.add_parser("make-order", help="write a stream order file")
    p.add_argument("graph", help="input graph in METIS format")
    p.add_argument("--seed", type=int, default=None, help="random permutation seed (omit for source order)")
    p.add_argument("--out", required=True, help="output path, one 0-based node id per line")
    return parser


def _check_conflicts(args, parser: argparse.ArgumentParser) -> None:
    kind = args.score
    if args.beta is not None and kind != "haa":
        parser.error("--beta only applies to --score haa")
    if args.eta is not None and kind != "nss":
        parser.error("--eta only applies to --score nss")
    if args.theta is not None and kind not in ("haa", "cbs"):
        parser.error("--theta only applies to --score haa or cbs")
    if args.stop_size is not None and args.stop_size < 2 * args.k:
        parser.error("--stop-size must be at least 2k")


def _scoring(args) -> ScoringConfig:
    kind = ScoreKind(args.score)
    kwargs = {"kind": kind, "d_max": args.d_max}
    if args.theta is not None:
        kwargs["theta"] = args.theta
    elif kind in DEFAULT_THETA:
        kwargs["theta"] = DEFAULT_THETA[kind]
    if args.beta is not None:
        kwargs["beta"] = args.beta
    if args.eta is not None:
        kwargs["eta"] = args.eta
    return ScoringConfig(**kwargs)


def _emit(report, args) -> None:
    sys.stdout.write(report.to_text())
    if args.report:
        report.write(args.report)


def cmd_partition(args, parser) -> int:
    _check_conflicts(args, parser)
    g = load_metis(args.graph)
    order = parse_order_spec(args.order, g.n)
    cfg = EngineConfig(
        k=args.k,
        epsilon=args.epsilon,
        q_max=args.q_max,
        delta=args.delta,
        d_max=args.d_max,
        disc_factor=args.disc_factor,
        scoring=_scoring(args),
        passes=args.passes,
        seed=args.seed,
        parallel=args.parallel,
        alpha=args.alpha,
        multilevel=MultilevelConfig(stop_size=args.stop_size, refine_rounds=args.refine_rounds),
    )
    log.info("partitioning n=%d m=%d into k=%d blocks", g.n, g.m, cfg.k)
    result = partition(g, order, cfg)
    out = args.output or f"{args.graph}.part.{args.k}"
    write_assignment(result.state, out)
    report = build_report(
        g, result.state, order,
        ier_values=[r.ier for r in result.records if r.pass_index == 1],
        passes=cfg.passes, runtime_s=result.runtime_s,
    )
    _emit(report, args)
    return 0


def cmd_fennel(args, parser) -> int:
    g = load_metis(args.graph)
    order = parse_order_spec(args.order, g.n)
    t0 = time.perf_counter()
    params = None
    if args.alpha is not None:
        l_max = PartitionState.for_graph(g, args.k, args.epsilon).l_max
        params = default_params(g, args.k, l_max, alpha=args.alpha)
    state = fennel_pass(g, order, args.k, args.epsilon, params)
    runtime = time.perf_counter() - t0
    write_assignment(state, args.output or f"{args.graph}.fennel.{args.k}")
    _emit(build_report(g, state, order, passes=1, runtime_s=runtime), args)
    return 0


def cmd_metrics(args, parser) -> int:
    g = load_metis(args.graph)
    order = parse_order_spec(args.order, g.n)
    blocks = read_assignment(args.assignment, g.n)
    k = args.k if args.k is not None else max(blocks, default=0) + 1
    if blocks and max(blocks) >= k:
        raise ValueError(f"assignment uses block {max(blocks)} but k={k}")
    state = PartitionState.from_blocks(g.node_weights, blocks, k, args.epsilon)
    _emit(build_report(g, state, order), args)
    return 0


def cmd_make_order(args, parser) -> int:
    g = load_metis(args.graph)
    order = source_order(g.n) if args.seed is None else random_order(g.n, args.seed)
    save_order(order, args.out)
    return 0


COMMANDS = {
    "partition": cmd_partition,
    "fennel": cmd_fennel,
    "metrics": cmd_metrics,
    "make-order": cmd_make_order,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(getattr(args, "verbose", 0), logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args, parser)
    except (OSError, ValueError, RuntimeError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"streampart: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
