#!/usr/bin/env python3
"""
Command-line interface for the hopsets package.
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .altmodels import clique_sssp, stream_sssp
from .config import FAMILIES, RunConfig
from .constants import (
    EXIT_CONFIG_ERROR, EXIT_MODEL_PRECONDITION, EXIT_OK, EXIT_VERIFICATION_FAILED, INF, MODELS,
    PRNG_NAME, SWEEP_COLUMNS,
)
from .exceptions import (
    ConfigurationError, DisconnectedGraph, GraphFormatError, HopsetError, PreconditionViolated,
    VerificationFailed, WrongModel,
)
from .graph import Distance, Graph, hop_diameter
from .graphio import grid_graph, parse_generator, path_graph, random_graph, read_edge_list, write_edge_list
from .hopset import hop_set, hopset_sssp, write_hopset
from .overlay import OverlayParams, extract_path
from .simharness import run_congest_pipeline
from .stream import EdgeStream
from .verify import check_estimates, check_hopset

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hopsets",
        description="hopsets: approximate shortest paths from hop sets and overlays",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Write a graph
  hopsets generate --gen random:64,128,10,7 --output g.txt

  # Build and check a hop set
  hopsets hopset --gen path:16 --eps 1/2 --verify

  # Distances from node 0 under CONGEST accounting
  hopsets sssp --input g.txt --model congest --verify

  # Cost table for doubling path sizes
  hopsets sweep --family path --n-min 128 --n-max 2048 --model congest --output sweep.csv
        """,
    )
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level (default WARNING)")
    parser.add_argument("--config", default=None,
                        help="JSON file of defaults (default: $HOPSET_CONFIG)")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    def common(sub: argparse.ArgumentParser, graph: bool = True) -> None:
        if graph:
            source = sub.add_mutually_exclusive_group()
            source.add_argument("--input", help="Edge-list file")
            source.add_argument("--gen", help="Generator spec, e.g. path:16 or random:n,m,W,seed")
        sub.add_argument("--eps", help="Accuracy as num/den in (0, 1] (default 1/2)")
        sub.add_argument("--p", type=int, help="Override the level count")
        sub.add_argument("--seed", type=int, help="Seed for stream order and pair sampling")
        sub.add_argument("--output", help="Output file")

    generate_parser = subparsers.add_parser("generate", help="Write a generated graph")
    generate_parser.add_argument("--gen", required=True, help="Generator spec")
    generate_parser.add_argument("--output", required=True, help="Edge-list file to write")

    hopset_parser = subparsers.add_parser("hopset", help="Build a hop set")
    common(hopset_parser)
    hopset_parser.add_argument("--verify", action="store_true",
                               help="Check the hop-set sandwich on all or sampled pairs")

    for name, text in (("sssp", "Distances from one source"),
                       ("sweep", "Cost table over doubling graph sizes")):
        sub = subparsers.add_parser(name, help=text)
        common(sub, graph=name == "sssp")
        sub.add_argument("--model", choices=MODELS, help="Cost model (default sequential)")
        sub.add_argument("--ell", type=int, help="Overlay segment length (default ceil(sqrt n))")
        sub.add_argument("--a", type=int, help="Ruling-set ID width constant")
        sub.add_argument("--source", type=int, help="Source node (default 0)")
        sub.add_argument("--finish-range", type=int, dest="finish_range",
                         help="Range of the final bounded searches on the overlay")
        if name == "sssp":
            sub.add_argument("--verify", action="store_true",
                             help="Check estimates against exact distances")
        else:
            sub.add_argument("--family", choices=FAMILIES, help="Graph family")
            sub.add_argument("--n-min", type=int, dest="n_min", help="Smallest n")
            sub.add_argument("--n-max", type=int, dest="n_max", help="Largest n (doubling)")
            sub.add_argument("--weight", type=int, help="Weight bound W (default 1)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point; returns the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if not args.command:
        parser.print_help()
        return EXIT_CONFIG_ERROR

    try:
        config = RunConfig.from_args(args)
        if config.command == "generate":
            handle_generate(config)
        elif config.command == "hopset":
            handle_hopset(config)
        elif config.command == "sssp":
            handle_sssp(config)
        elif config.command == "sweep":
            handle_sweep(config)
        else:
            raise ConfigurationError(f"unknown command: {config.command}")
    except (ConfigurationError, GraphFormatError) as e:
        return _fail(EXIT_CONFIG_ERROR, e, line=getattr(e, "line_number", None))
    except VerificationFailed as e:
        return _fail(EXIT_VERIFICATION_FAILED, e, report=e.report)
    except (DisconnectedGraph, PreconditionViolated, WrongModel) as e:
        return _fail(EXIT_MODEL_PRECONDITION, e)
    except HopsetError as e:
        return _fail(EXIT_VERIFICATION_FAILED, e)
    except OSError as e:
        return _fail(EXIT_CONFIG_ERROR, e)
    except KeyboardInterrupt:
        print("\nOperation cancelled by user", file=sys.stderr)
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def _fail(code: int, error: BaseException, **extra: Any) -> int:
    payload: Dict[str, Any] = {"status": "error", "kind": type(error).__name__,
                               "message": str(error), "exit": code}
    payload.update({k: v for k, v in extra.items() if v is not None})
    _emit(payload)
    return code


def _emit(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True, default=str))


def _text(value: Distance) -> str:
    return "inf" if value == INF else str(value)


# ---------------------------------------------------------------------------
# Graph input
# ---------------------------------------------------------------------------

def load_graph(config: RunConfig) -> Tuple[Graph, Dict[str, Any]]:
    """The graph the config names, with a description for the report."""
    if config.input is not None:
        G = read_edge_list(config.input)
        return G, {"input": config.input, "n": G.n, "m": G.m, "W": G.W}
    G, info = parse_generator(config.gen)
    info.update(m=G.m)
    return G, info


def _check_source(G: Graph, s: int) -> None:
    if not 0 <= s < G.n:
        raise ConfigurationError(f"source {s} is not a node of a graph with {G.n} nodes")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def handle_generate(config: RunConfig) -> None:
    """Handle the generate command."""
    G, info = parse_generator(config.gen)
    write_edge_list(G, config.output, comment=f"generated by {config.gen} ({PRNG_NAME})")
    _emit({"status": "ok", "graph": info, "m": G.m, "output": config.output})


def handle_hopset(config: RunConfig) -> None:
    """Handle the hopset command."""
    G, info = load_graph(config)
    F = hop_set(G, config.epsilon, p=config.p)
    if config.output:
        write_hopset(F, config.output)
    report: Dict[str, Any] = {"status": "ok", "graph": info, "hopset": F.summary(),
                              "levels": F.report, "output": config.output}
    if config.verify:
        check = check_hopset(G, F, seed=config.seed)
        report["verify"] = check.to_dict()
        if not check.ok:
            report["status"] = "failed"
            raise VerificationFailed(
                f"{len(check.violations)} pairs break the hop-set sandwich", report=report
            )
    _emit(report)


@dataclass
class ModelRun:
    """What one cost model produced for the report and the sweep table."""

    estimates: List[Distance]
    alpha: Fraction
    hopset_size: int
    cost: Optional[int] = None
    space: Optional[int] = None
    centers: Optional[int] = None
    ledger: Optional[Dict[str, Any]] = None
    extra: Dict[str, Any] = field(default_factory=dict)


def run_model(config: RunConfig, G: Graph, s: int) -> ModelRun:
    """Run the configured model from s."""
    if config.model == "sequential":
        result = hopset_sssp(G, s, config.epsilon, p=config.p)
        return ModelRun(result.estimates, result.alpha, len(result.hopset),
                        extra={"hopset": result.hopset.summary()})
    if config.model == "congest":
        params = OverlayParams.derive(G.n, G.W, config.epsilon, ell=config.ell, a=config.a)
        result = run_congest_pipeline(G, s, params, p=config.p, R=config.finish_range,
                                      seed=config.seed)
        return ModelRun(result.estimates, result.alpha, len(result.hopset),
                        cost=result.ledger.total, centers=len(result.centers),
                        ledger=result.ledger.to_dict(), extra=result.report)
    if config.model == "clique":
        result = clique_sssp(G, s, config.epsilon, p=config.p)
        return ModelRun(list(result.table.dist), result.alpha, len(result.hopset),
                        cost=result.ledger.total, ledger=result.ledger.to_dict(),
                        extra={"hopset": result.hopset.summary(), "rounds": result.table.h})
    if config.input is not None:
        stream = EdgeStream(config.input)
    else:
        stream = EdgeStream.from_edges(G.n, list(G.edges()), W=G.W, seed=config.seed)
    result = stream_sssp(stream, s, config.epsilon, p=config.p)
    return ModelRun(result.estimates, result.alpha, len(result.hopset),
                    cost=result.ledger.passes, space=result.ledger.peak_space_words,
                    ledger=result.ledger.to_dict(),
                    extra={"hopset": result.hopset.summary()})


def path_success(G: Graph, estimates: Sequence[Distance], s: int) -> Fraction:
    """Share of reached nodes whose path walk arrives at s."""
    reached = [u for u, d in enumerate(estimates) if d != INF]
    done = sum(extract_path(G, estimates, u, s).complete for u in reached)
    return Fraction(done, len(reached)) if reached else Fraction(1)


def handle_sssp(config: RunConfig) -> None:
    """Handle the sssp command."""
    G, info = load_graph(config)
    s = config.source
    _check_source(G, s)
    run = run_model(config, G, s)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(f"# sssp source={s} model={config.model} eps={config.epsilon}\n")
            for v, d in enumerate(run.estimates):
                fh.write(f"{v} {_text(d)}\n")
    report: Dict[str, Any] = {
        "status": "ok", "graph": info, "model": config.model, "source": s,
        "epsilon": str(config.epsilon), "alpha": str(run.alpha), "ledger": run.ledger,
        "details": run.extra, "output": config.output,
    }
    if config.verify:
        check = check_estimates(G, s, run.estimates, run.alpha, config.epsilon)
        report["verify"] = check.to_dict()
        report["verify"]["path_success"] = str(path_success(G, run.estimates, s))
        if "witness_constant" in run.extra:
            report["verify"]["witness_constant"] = run.extra["witness_constant"]
        if not check.ok:
            report["status"] = "failed"
            raise VerificationFailed("estimates fall outside [d, alpha*d]", report=report)
    _emit(report)


def sweep_graph(family: str, n: int, W: int, seed: int) -> Graph:
    if family == "path":
        return path_graph(n, W=W, seed=seed)
    if family == "grid":
        side = max(2, math.isqrt(n))
        return grid_graph(side, side, W=W, seed=seed)
    return random_graph(n, min(2 * n, n * (n - 1) // 2), W, seed)


def sweep_sizes(n_min: int, n_max: int) -> List[int]:
    sizes = []
    n = n_min
    while n <= n_max:
        sizes.append(n)
        n *= 2
    return sizes


def sweep_table(config: RunConfig) -> pd.DataFrame:
    """
    One row per size in the :data:`SWEEP_COLUMNS` layout, plus a trailing
    ``space`` column (peak stream words; empty for the other models).
    """
    rows = []
    for n in sweep_sizes(config.n_min, config.n_max):
        G = sweep_graph(config.family, n, config.weight, config.seed)
        s = min(config.source, G.n - 1)
        run = run_model(config, G, s)
        check = check_estimates(G, s, run.estimates, run.alpha, config.epsilon)
        rows.append({
            "n": G.n, "D": hop_diameter(G), "model": config.model, "cost": run.cost,
            "hopset_size": run.hopset_size, "centers": run.centers,
            "worst_ratio": float(check.worst_ratio), "space": run.space,
        })
        logger.info("sweep n=%d: cost %s, |F|=%d", G.n, run.cost, run.hopset_size)
    df = pd.DataFrame(rows, columns=[*SWEEP_COLUMNS, "space"])
    for column in ("cost", "space", "centers"):
        df[column] = df[column].astype("Int64")
    return df


def handle_sweep(config: RunConfig) -> None:
    """Handle the sweep command."""
    full = sweep_table(config)
    df = full[list(SWEEP_COLUMNS)]
    if not config.output:
        sys.stdout.write(df.to_csv(index=False))
        return
    if config.output.endswith(".parquet"):
        df.to_parquet(config.output, index=False, engine="pyarrow")
    else:
        df.to_csv(config.output, index=False)
    report: Dict[str, Any] = {"status": "ok", "rows": len(df), "output": config.output}
    if config.model == "streaming":
        report["peak_space_words"] = {int(n): int(w) for n, w in zip(full["n"], full["space"])}
    _emit(report)


if __name__ == "__main__":
    sys.exit(main())
