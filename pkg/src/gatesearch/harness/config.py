"""Experiment configuration: an INI file with CLI-flag overrides.

A config names the experiment, picks the algorithm and target, and pins
every knob the env and the trainer expose.  Targets are either a named
preset ("bell", "ghz3") or a path to an amplitude text file.  Parsing and
re-serializing a config yields an equivalent config.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass

import numpy as np

from .. import qsim
from ..agents import ALGORITHMS, AgentHyper
from ..env import EnvConfig
from ..qsim import NoiseSpec, PureState


class ConfigError(Exception):
    """A problem with user-supplied configuration (CLI exit code 1)."""


SQRT1_2 = 1.0 / math.sqrt(2.0)

TARGET_PRESETS: dict[str, tuple[float, ...]] = {
    "bell": (SQRT1_2, 0.0, 0.0, SQRT1_2),
    "ghz3": (SQRT1_2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, SQRT1_2),
}


def resolve_target(label: str) -> PureState:
    """Turn a preset name or an amplitude-file path into a statevector."""
    key = label.strip()
    if key.lower() in TARGET_PRESETS:
        return PureState.from_amplitudes(np.array(TARGET_PRESETS[key.lower()], dtype=complex))
    if not os.path.exists(key):
        raise ConfigError(
            f"target {label!r} is neither a preset ({', '.join(sorted(TARGET_PRESETS))}) "
            f"nor an existing file"
        )
    try:
        return qsim.load_target_state(key)
    except ValueError as exc:
        raise ConfigError(f"invalid target file: {exc}") from exc


def default_hyper(algorithm: str) -> AgentHyper:
    if algorithm == "a2c":
        return AgentHyper.a2c_defaults()
    return AgentHyper.ppo_defaults()


@dataclass(frozen=True)
class RunConfig:
    """Everything one experiment needs, flat and serializable."""

    name: str
    algorithm: str
    target: str  # preset name or file path
    episodes: int
    seeds: tuple[int, ...]
    out_dir: str
    fidelity_threshold: float = 0.99
    max_steps: int = 20
    noise: NoiseSpec = qsim.NOISELESS
    step_penalty: float = 0.01
    hyper: AgentHyper | None = None  # None = the algorithm's defaults

    def __post_init__(self) -> None:
        if not self.name:
            raise ConfigError("experiment name must be nonempty")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(
                f"algorithm must be one of {', '.join(ALGORITHMS)}, got {self.algorithm!r}"
            )
        if self.episodes < 1:
            raise ConfigError(f"episodes must be >= 1, got {self.episodes}")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError(f"duplicate seeds in {self.seeds}")

    def resolved_hyper(self) -> AgentHyper:
        return self.hyper if self.hyper is not None else default_hyper(self.algorithm)

    def target_state(self) -> PureState:
        return resolve_target(self.target)

    def env_config(self) -> EnvConfig:
        try:
            return EnvConfig(
                target=self.target_state(),
                fidelity_threshold=self.fidelity_threshold,
                max_steps=self.max_steps,
                noise=self.noise,
                step_penalty=self.step_penalty,
            )
        except ValueError as exc:
            raise ConfigError(f"invalid environment settings: {exc}") from exc


# ---------------------------------------------------------------------------
# INI round trip
# ---------------------------------------------------------------------------

_HYPER_KEYS = (
    "learning_rate",
    "discount",
    "value_coef",
    "entropy_coef",
    "clip_ratio",
    "update_epochs",
    "update_horizon",
)


def save_config(config: RunConfig, path) -> None:
    parser = configparser.ConfigParser()
    parser["experiment"] = {
        "name": config.name,
        "algorithm": config.algorithm,
        "episodes": str(config.episodes),
        "seeds": " ".join(str(s) for s in config.seeds),
        "out_dir": config.out_dir,
    }
    parser["env"] = {
        "target": config.target,
        "n_qubits": str(config.target_state().n_qubits),
        "fidelity_threshold": repr(config.fidelity_threshold),
        "max_steps": str(config.max_steps),
        "p_gate": repr(config.noise.p_gate),
        "p_meas": repr(config.noise.p_meas),
        "step_penalty": repr(config.step_penalty),
    }
    hyper = config.resolved_hyper()
    parser["agent"] = {key: repr(getattr(hyper, key)) for key in _HYPER_KEYS}
    with open(path, "w", encoding="utf-8") as fh:
        parser.write(fh)


def _parse_seeds(text: str) -> tuple[int, ...]:
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise ConfigError("seeds list is empty")
    try:
        return tuple(int(t) for t in tokens)
    except ValueError as exc:
        raise ConfigError(f"invalid seed list {text!r}") from exc


def load_config(path) -> RunConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise ConfigError(f"config file {path} not found or unreadable")
    try:
        exp = parser["experiment"]
    except KeyError:
        raise ConfigError(f"{path}: missing [experiment] section") from None
    env = parser["env"] if parser.has_section("env") else {}

    def need(section, key: str):
        if key not in section:
            raise ConfigError(f"{path}: missing required key {key!r}")
        return section[key]

    try:
        noise = NoiseSpec(
            p_gate=float(env.get("p_gate", "0")),
            p_meas=float(env.get("p_meas", "0")),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: invalid noise settings: {exc}") from exc

    algorithm = need(exp, "algorithm").strip().lower()
    hyper = None
    if parser.has_section("agent"):
        try:
            base = default_hyper(algorithm) if algorithm in ALGORITHMS else default_hyper("ppo")
            values = {}
            for key in _HYPER_KEYS:
                if key in parser["agent"]:
                    raw = parser["agent"][key]
                    values[key] = (
                        int(raw) if key in ("update_epochs", "update_horizon") else float(raw)
                    )
                else:
                    values[key] = getattr(base, key)
            hyper = AgentHyper(**values)
        except ValueError as exc:
            raise ConfigError(f"{path}: invalid agent hyperparameters: {exc}") from exc

    try:
        config = RunConfig(
            name=need(exp, "name"),
            algorithm=algorithm,
            target=need(env, "target") if "target" in env else need(exp, "target"),
            episodes=int(need(exp, "episodes")),
            seeds=_parse_seeds(need(exp, "seeds")),
            out_dir=exp.get("out_dir", "runs"),
            fidelity_threshold=float(env.get("fidelity_threshold", "0.99")),
            max_steps=int(env.get("max_steps", "20")),
            noise=noise,
            step_penalty=float(env.get("step_penalty", "0.01")),
            hyper=hyper,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    if "n_qubits" in env:
        declared = int(env["n_qubits"])
        actual = config.target_state().n_qubits
        if declared != actual:
            raise ConfigError(
                f"{path}: n_qubits = {declared} but target {config.target!r} has {actual} qubits"
            )
    return config
