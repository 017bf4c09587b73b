"""Seeded experiment runs with CSV metrics, plus deterministic circuit replay.

Each seed trains independently and writes `<name>_seed<k>.csv` with one row
per episode (`seed,episode,return,fidelity,length`).  A post-pass aggregates
the seeds into `<name>_summary.csv` with per-episode mean and population
standard deviation of return and fidelity.  The best circuit a seed found
is saved next to its CSV in the gate-listing text format.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

from .. import agents, qsim
from ..agents import TrainResult
from ..env import CircuitEnv, GateAction
from ..qsim import MixedState, NoiseSpec, PureState
from . import circuits
from .config import ConfigError, RunConfig
from .oracle import CircuitProgram

CSV_HEADER = ["seed", "episode", "return", "fidelity", "length"]
SUMMARY_HEADER = ["episode", "mean_return", "std_return", "mean_fidelity", "std_fidelity"]


@dataclass
class ExperimentResult:
    """Everything run_experiment produced, with the file paths."""

    config: RunConfig
    seed_results: dict[int, TrainResult]
    seed_csv_paths: dict[int, str]
    summary_csv_path: str
    circuit_paths: dict[int, str]

    def best_program(self) -> CircuitProgram | None:
        """Highest-fidelity (then shortest) circuit across all seeds."""
        best: tuple[float, int, tuple[int, ...]] | None = None
        for result in self.seed_results.values():
            if result.best_actions is None:
                continue
            cand = (-result.best_fidelity, len(result.best_actions), result.best_actions)
            if best is None or cand < best:
                best = cand
        if best is None:
            return None
        action_set = CircuitEnv(self.config.env_config()).actions
        gates = tuple(action_set[i] for i in best[2])
        return CircuitProgram(gates, "agent", -best[0])


def run_experiment(config: RunConfig) -> ExperimentResult:
    """Train every seed, write per-seed CSVs, circuits, and the summary."""
    env_config = config.env_config()  # raises ConfigError on a bad target
    hyper = config.resolved_hyper()
    try:
        os.makedirs(config.out_dir, exist_ok=True)
        probe = os.path.join(config.out_dir, f".{config.name}.probe")
        with open(probe, "w", encoding="utf-8"):
            pass
        os.remove(probe)
    except OSError as exc:
        raise ConfigError(f"output directory {config.out_dir!r} is not writable: {exc}") from exc

    seed_results: dict[int, TrainResult] = {}
    seed_csv_paths: dict[int, str] = {}
    circuit_paths: dict[int, str] = {}
    for seed in config.seeds:
        env = CircuitEnv(env_config)
        result = agents.train(env, config.algorithm, hyper, config.episodes, seed)
        seed_results[seed] = result

        csv_path = os.path.join(config.out_dir, f"{config.name}_seed{seed}.csv")
        _write_seed_csv(csv_path, seed, result)
        seed_csv_paths[seed] = csv_path

        if result.best_actions is not None:
            gates = [env.actions[i] for i in result.best_actions]
            circuit_path = os.path.join(
                config.out_dir, f"{config.name}_seed{seed}_circuit.txt"
            )
            circuits.save_program(
                circuit_path,
                gates,
                header=(
                    f"best circuit from seed {seed} "
                    f"(episode {result.best_episode}, fidelity {result.best_fidelity:.6f})"
                ),
            )
            circuit_paths[seed] = circuit_path

    summary_path = os.path.join(config.out_dir, f"{config.name}_summary.csv")
    write_summary(summary_path, seed_results)
    return ExperimentResult(config, seed_results, seed_csv_paths, summary_path, circuit_paths)


def _write_seed_csv(path: str, seed: int, result: TrainResult) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for record in result.episodes:
            writer.writerow(
                [
                    seed,
                    record.episode,
                    repr(record.episode_return),
                    repr(record.fidelity),
                    record.length,
                ]
            )


def write_summary(path: str, seed_results: dict[int, TrainResult]) -> None:
    """Per-episode mean and population std of return and fidelity across seeds."""
    returns = np.stack([r.returns() for r in seed_results.values()])
    fidelities = np.stack([r.fidelities() for r in seed_results.values()])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        for episode in range(returns.shape[1]):
            writer.writerow(
                [
                    episode,
                    repr(float(returns[:, episode].mean())),
                    repr(float(returns[:, episode].std())),
                    repr(float(fidelities[:, episode].mean())),
                    repr(float(fidelities[:, episode].std())),
                ]
            )


def read_summary(path: str) -> dict[str, np.ndarray]:
    """Load a summary CSV back into column arrays."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SUMMARY_HEADER:
            raise ValueError(f"{path}: not a summary CSV (header {header})")
        rows = [[float(cell) for cell in row] for row in reader]
    if not rows:
        raise ValueError(f"{path}: summary has no data rows")
    data = np.array(rows)
    return {name: data[:, i] for i, name in enumerate(SUMMARY_HEADER)}


# ---------------------------------------------------------------------------
# Replay
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReplayReport:
    """Deterministic fidelities of a fixed program against a target."""

    program: tuple[GateAction, ...]
    noise_free_fidelity: float
    noisy_fidelity: float | None
    noise: NoiseSpec

    def describe(self) -> str:
        lines = []
        if not self.program:
            lines.append("(empty circuit)")
        for i, action in enumerate(self.program, start=1):
            lines.append(f"step {i}: {circuits.describe_action(action)}")
        lines.append(f"noise-free fidelity: {self.noise_free_fidelity:.6f}")
        if self.noisy_fidelity is not None:
            lines.append(
                f"noisy fidelity (p_gate={self.noise.p_gate}, "
                f"p_meas={self.noise.p_meas}): {self.noisy_fidelity:.6f}"
            )
        return "\n".join(lines)


def replay_circuit(
    program,
    target: PureState,
    noise: NoiseSpec = qsim.NOISELESS,
) -> ReplayReport:
    """Apply a gate program to |0...0> and report exact fidelities.

    Readout error does not enter state evolution, so the noisy fidelity is
    computed with gate noise alone; it is reported only when the noise
    model is not the noiseless one.
    """
    program = tuple(program)
    n = target.n_qubits
    for action in program:
        for q in action.qubits:
            if q >= n:
                raise ValueError(
                    f"gate {action.label!r} touches qubit {q}, register has {n}"
                )
    pure = PureState.zero(n)
    for action in program:
        pure = qsim.apply_gate_pure(pure, action.gate, action.qubits)
    noise_free = qsim.fidelity(pure, target)

    noisy = None
    if not noise.is_noiseless:
        mixed = MixedState.zero(n)
        for action in program:
            mixed = qsim.apply_gate_mixed(mixed, action.gate, action.qubits, noise)
        noisy = qsim.fidelity(mixed, target)
    return ReplayReport(program, noise_free, noisy, noise)
