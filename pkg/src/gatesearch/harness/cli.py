"""Command-line entry point.

Subcommands:

    train   run a seeded training experiment, write CSVs + circuits + plot
    search  exhaustive shortest-circuit search for a target state
    replay  evaluate a saved gate program against a target
    plot    render a summary CSV to an SVG convergence plot

Exit codes: 0 success, 1 configuration error, 2 unexpected runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import re
import sys

from ..qsim import NoiseSpec
from . import circuits
from .config import ConfigError, RunConfig, _parse_seeds, load_config, resolve_target
from .oracle import brute_force_search
from .plot import emit_plot
from .runner import replay_circuit, run_experiment

DEFAULT_SEEDS = "0 1 2 3 4"
DEFAULT_EPISODES = 5000


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gatesearch",
        description="Reinforcement-learning search for state-preparation circuits.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    train = sub.add_parser("train", help="run a seeded training experiment")
    train.add_argument("--config", help="INI config file; flags below override it")
    train.add_argument("--name", help="experiment name (defaults to <target>-<algo>)")
    train.add_argument("--algo", choices=("a2c", "ppo"), help="training algorithm")
    train.add_argument("--target", help="target preset (bell, ghz3) or amplitude file")
    train.add_argument("--episodes", type=int, help=f"episodes per seed (default {DEFAULT_EPISODES})")
    train.add_argument("--seeds", help=f"seed list, e.g. '0,1,2' (default '{DEFAULT_SEEDS}')")
    train.add_argument("--threshold", type=float, help="fidelity threshold (default 0.99)")
    train.add_argument("--p-gate", type=float, help="per-gate depolarizing probability")
    train.add_argument("--p-meas", type=float, help="readout bit-flip probability")
    train.add_argument("--out", help="output directory (default 'runs')")
    train.set_defaults(handler=_cmd_train)

    search = sub.add_parser("search", help="exhaustive shortest-circuit search")
    search.add_argument("--target", required=True, help="target preset or amplitude file")
    search.add_argument("--depth", type=int, required=True, help="maximum circuit depth")
    search.add_argument("--threshold", type=float, default=0.99, help="fidelity threshold")
    search.set_defaults(handler=_cmd_search)

    replay = sub.add_parser("replay", help="evaluate a saved gate program")
    replay.add_argument("--circuit", required=True, help="gate program text file")
    replay.add_argument("--target", required=True, help="target preset or amplitude file")
    replay.add_argument("--p-gate", type=float, default=0.0)
    replay.add_argument("--p-meas", type=float, default=0.0)
    replay.set_defaults(handler=_cmd_replay)

    plot = sub.add_parser("plot", help="render a summary CSV to SVG")
    plot.add_argument("--summary", required=True, help="summary CSV path")
    plot.add_argument("--out", required=True, help="output SVG path")
    plot.add_argument("--title", help="plot title")
    plot.set_defaults(handler=_cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if getattr(args, "handler", None) is None:
        parser.print_help()
        return 1
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # anything unexpected is a runtime failure
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def _cmd_train(args) -> int:
    config = _build_run_config(args)
    result = run_experiment(config)
    plot_path = os.path.join(config.out_dir, f"{config.name}_plot.svg")
    emit_plot(result.summary_csv_path, plot_path, title=config.name)

    for seed in config.seeds:
        returns = result.seed_results[seed].returns()
        tail = returns[-min(100, returns.size):]
        print(f"seed {seed}: mean return over last {tail.size} episodes = {tail.mean():.4f}")
    best = result.best_program()
    if best is not None:
        print(f"best circuit ({best.fidelity:.6f} fidelity): {', '.join(best.labels)}")
    else:
        print("no circuit reached the threshold during training")
    print(f"summary: {result.summary_csv_path}")
    print(f"plot: {plot_path}")
    return 0


def _build_run_config(args) -> RunConfig:
    if args.config:
        config = load_config(args.config)
        updates = {}
        if args.name is not None:
            updates["name"] = args.name
        if args.algo is not None and args.algo != config.algorithm:
            # the file's hyperparameters were tuned for its own algorithm
            updates["algorithm"] = args.algo
            updates["hyper"] = None
        if args.target is not None:
            updates["target"] = args.target
        if args.episodes is not None:
            updates["episodes"] = args.episodes
        if args.seeds is not None:
            updates["seeds"] = _parse_seeds(args.seeds)
        if args.threshold is not None:
            updates["fidelity_threshold"] = args.threshold
        if args.p_gate is not None or args.p_meas is not None:
            updates["noise"] = NoiseSpec(
                p_gate=args.p_gate if args.p_gate is not None else config.noise.p_gate,
                p_meas=args.p_meas if args.p_meas is not None else config.noise.p_meas,
            )
        if args.out is not None:
            updates["out_dir"] = args.out
        try:
            return dataclasses.replace(config, **updates) if updates else config
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    if not args.algo or not args.target:
        raise ConfigError("without --config, both --algo and --target are required")
    name = args.name or _default_name(args.target, args.algo)
    try:
        noise = NoiseSpec(p_gate=args.p_gate or 0.0, p_meas=args.p_meas or 0.0)
    except ValueError as exc:
        raise ConfigError(f"invalid noise probabilities: {exc}") from exc
    return RunConfig(
        name=name,
        algorithm=args.algo,
        target=args.target,
        episodes=args.episodes if args.episodes is not None else DEFAULT_EPISODES,
        seeds=_parse_seeds(args.seeds) if args.seeds is not None else _parse_seeds(DEFAULT_SEEDS),
        out_dir=args.out if args.out is not None else "runs",
        fidelity_threshold=args.threshold if args.threshold is not None else 0.99,
        noise=noise,
    )


def _default_name(target: str, algo: str) -> str:
    stem = os.path.splitext(os.path.basename(target))[0]
    slug = re.sub(r"[^A-Za-z0-9_-]+", "-", stem).strip("-") or "target"
    return f"{slug}-{algo}"


def _cmd_search(args) -> int:
    target = resolve_target(args.target)
    try:
        program = brute_force_search(
            target.n_qubits, target, args.depth, args.threshold
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if program is None:
        print(f"no circuit within depth {args.depth} reaches fidelity {args.threshold}")
        return 0
    print(f"found {len(program)}-gate circuit with fidelity {program.fidelity:.9f}:")
    for action in program.actions:
        print(f"  {action.label}")
    return 0


def _cmd_replay(args) -> int:
    target = resolve_target(args.target)
    try:
        program = circuits.load_program(args.circuit, target.n_qubits)
    except OSError as exc:
        raise ConfigError(f"cannot read circuit file: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"invalid circuit file {args.circuit}: {exc}") from exc
    try:
        noise = NoiseSpec(p_gate=args.p_gate, p_meas=args.p_meas)
    except ValueError as exc:
        raise ConfigError(f"invalid noise probabilities: {exc}") from exc
    report = replay_circuit(program, target, noise)
    print(report.describe())
    return 0


def _cmd_plot(args) -> int:
    try:
        emit_plot(args.summary, args.out, title=args.title)
    except OSError as exc:
        raise ConfigError(f"cannot read summary: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"wrote {args.out}")
    return 0
