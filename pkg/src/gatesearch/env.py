"""Gate-placement environment for circuit search.

An episode starts from |0...0> and each action appends one gate from a
fixed vocabulary: for every qubit a pi/4 phase rotation, X, Y, Z and
Hadamard, plus a CNOT for every ordered qubit pair.  The observation is
the vector of single-qubit Pauli expectations (qubit-major, axes x, y, z),
damped by readout noise when configured.  Each step costs a small penalty;
reaching the target fidelity ends the episode with reward F - penalty.

The simulation backend is chosen automatically: a plain statevector when
the environment is noise-free, a density matrix when gate or readout
noise is configured (or when forced, e.g. to cross-check the two paths).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qsim
from .qsim import Gate, GateKind, MixedState, NoiseSpec, NOISELESS, PureState

PHASE_ANGLE = math.pi / 4.0  # the one rotation angle in the vocabulary


@dataclass(frozen=True)
class GateAction:
    """One vocabulary entry: a gate bound to specific qubit(s)."""

    gate: Gate
    qubits: tuple[int, ...]

    @property
    def label(self) -> str:
        """Stable text form, e.g. "h 0", "cx 1 0", "phase 0 0.785...". """
        kind = self.gate.kind
        if kind is GateKind.CNOT:
            return f"cx {self.qubits[0]} {self.qubits[1]}"
        if kind is GateKind.PHASE:
            return f"phase {self.qubits[0]} {self.gate.angle!r}"
        return f"{kind.value} {self.qubits[0]}"


def build_action_set(n_qubits: int) -> tuple[GateAction, ...]:
    """The full gate vocabulary for a register, in a fixed canonical order.

    Per qubit (ascending): phase(pi/4), X, Y, Z, H.  Then CNOTs over all
    ordered (control, target) pairs, lexicographic.  Sizes: 5n + n(n-1).
    """
    if n_qubits < 2:
        raise ValueError(f"need at least 2 qubits for a CNOT vocabulary, got {n_qubits}")
    actions: list[GateAction] = []
    for q in range(n_qubits):
        actions.append(GateAction(qsim.phase_gate(PHASE_ANGLE), (q,)))
        actions.append(GateAction(qsim.PAULI_X, (q,)))
        actions.append(GateAction(qsim.PAULI_Y, (q,)))
        actions.append(GateAction(qsim.PAULI_Z, (q,)))
        actions.append(GateAction(qsim.HADAMARD, (q,)))
    for control in range(n_qubits):
        for target in range(n_qubits):
            if control != target:
                actions.append(GateAction(qsim.CNOT, (control, target)))
    return tuple(actions)


@dataclass(frozen=True)
class EnvConfig:
    """Static description of one search problem."""

    target: PureState
    fidelity_threshold: float = 0.99
    max_steps: int = 20
    noise: NoiseSpec = NOISELESS
    step_penalty: float = 0.01

    def __post_init__(self) -> None:
        if self.target.n_qubits < 2:
            raise ValueError("target must cover at least 2 qubits")
        if not 0.0 < self.fidelity_threshold <= 1.0:
            raise ValueError(f"fidelity_threshold must be in (0, 1], got {self.fidelity_threshold}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be positive, got {self.max_steps}")
        if self.step_penalty < 0.0:
            raise ValueError(f"step_penalty must be nonnegative, got {self.step_penalty}")

    @property
    def n_qubits(self) -> int:
        return self.target.n_qubits


@dataclass(frozen=True)
class StepResult:
    observation: np.ndarray
    reward: float
    done: bool
    fidelity: float
    steps_used: int


class CircuitEnv:
    """Stateful episode runner over a fixed action vocabulary.

    All full-register gate unitaries and observable matrices are built once
    at construction, so stepping is a handful of small dense matrix products.
    """

    def __init__(
        self,
        config: EnvConfig,
        *,
        force_density_matrix: bool = False,
        observation_shots: int | None = None,
        rng: np.random.Generator | None = None,
    ) -> None:
        if observation_shots is not None and observation_shots < 1:
            raise ValueError(f"observation_shots must be positive, got {observation_shots}")
        self.config = config
        self.actions = build_action_set(config.n_qubits)
        self.observation_shots = observation_shots
        self._rng = rng if rng is not None else np.random.default_rng()
        self._use_density = force_density_matrix or not config.noise.is_noiseless

        n = config.n_qubits
        dim = 2**n
        self._target = config.target.amplitudes
        self._unitaries = np.stack(
            [qsim.gate_unitary(a.gate, a.qubits, n) for a in self.actions]
        )
        # Observables in qubit-major order: q0 x,y,z then q1 x,y,z, ...
        self._observables = np.stack(
            [
                qsim.embed_operator(qsim.PAULI_BY_AXIS[axis], q, n)
                for q in range(n)
                for axis in "xyz"
            ]
        )
        # Per-qubit Pauli triples for the depolarizing channel.
        self._noise_paulis = [
            np.stack(
                [
                    qsim.embed_operator(qsim.PAULI_BY_AXIS[axis], q, n)
                    for axis in "xyz"
                ]
            )
            for q in range(n)
        ]
        self._dim = dim
        self._psi: np.ndarray | None = None
        self._rho: np.ndarray | None = None
        self._steps = 0
        self._done = True  # require reset() before stepping
        self._fidelity = 0.0
        self._episode_actions: list[int] = []
        self.reset()

    # -- episode control ----------------------------------------------------

    def reset(self) -> np.ndarray:
        """Start a fresh episode from |0...0> and return its observation."""
        if self._use_density:
            self._rho = np.zeros((self._dim, self._dim), dtype=complex)
            self._rho[0, 0] = 1.0
            self._psi = None
        else:
            self._psi = np.zeros(self._dim, dtype=complex)
            self._psi[0] = 1.0
            self._rho = None
        self._steps = 0
        self._done = False
        self._episode_actions = []
        self._fidelity = self._compute_fidelity()
        return self._observe()

    def step(self, action_index: int) -> StepResult:
        """Append one gate, advance the simulation, and score the result."""
        if self._done:
            raise RuntimeError("episode is finished; call reset() before stepping")
        index = int(action_index)
        if not 0 <= index < len(self.actions):
            raise IndexError(
                f"action index {index} out of range [0, {len(self.actions)})"
            )
        action = self.actions[index]
        unitary = self._unitaries[index]
        if self._use_density:
            rho = unitary @ self._rho @ unitary.conj().T
            p = self.config.noise.p_gate
            if p > 0.0:
                for q in action.qubits:
                    paulis = self._noise_paulis[q]
                    flipped = np.einsum("kab,bc,kdc->ad", paulis, rho, paulis.conj())
                    rho = (1.0 - 0.75 * p) * rho + 0.25 * p * flipped
            self._rho = rho
        else:
            self._psi = unitary @ self._psi

        self._steps += 1
        self._episode_actions.append(index)
        self._fidelity = self._compute_fidelity()
        success = self._fidelity >= self.config.fidelity_threshold
        self._done = success or self._steps >= self.config.max_steps
        if success:
            reward = self._fidelity - self.config.step_penalty
        else:
            reward = -self.config.step_penalty
        return StepResult(
            observation=self._observe(),
            reward=reward,
            done=self._done,
            fidelity=self._fidelity,
            steps_used=self._steps,
        )

    # -- views --------------------------------------------------------------

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @property
    def observation_size(self) -> int:
        return 3 * self.config.n_qubits

    @property
    def steps_used(self) -> int:
        return self._steps

    @property
    def done(self) -> bool:
        return self._done

    @property
    def fidelity(self) -> float:
        return self._fidelity

    @property
    def episode_actions(self) -> tuple[int, ...]:
        """Action indices taken since the last reset."""
        return tuple(self._episode_actions)

    def current_state(self) -> PureState | MixedState:
        n = self.config.n_qubits
        if self._use_density:
            return MixedState(n, self._rho.copy())
        return PureState(n, self._psi.copy())

    # -- internals ----------------------------------------------------------

    def _compute_fidelity(self) -> float:
        t = self._target
        if self._use_density:
            value = np.vdot(t, self._rho @ t).real
        else:
            value = abs(np.vdot(t, self._psi)) ** 2
        return float(np.clip(value, 0.0, 1.0))

    def _observe(self) -> np.ndarray:
        if self._use_density:
            values = np.einsum("aij,ji->a", self._observables, self._rho).real
        else:
            values = np.einsum(
                "i,aij,j->a", self._psi.conj(), self._observables, self._psi
            ).real
        values = np.clip(values, -1.0, 1.0)
        p_meas = self.config.noise.p_meas
        damped = (1.0 - 2.0 * p_meas) * values
        if self.observation_shots is None:
            return damped
        # Finite-shot mode: each observable becomes an empirical +-1 mean.
        shots = self.observation_shots
        plus_prob = np.clip((1.0 + damped) / 2.0, 0.0, 1.0)
        counts = self._rng.binomial(shots, plus_prob)
        return 2.0 * counts / shots - 1.0


def run_actions(env: CircuitEnv, action_indices) -> StepResult:
    """Reset, play a fixed gate sequence, return the final step's result.

    The sequence must fit in one episode (no early termination mid-list
    except on its final action).
    """
    env.reset()
    result: StepResult | None = None
    for index in action_indices:
        result = env.step(index)
    if result is None:
        return StepResult(
            observation=env._observe(),
            reward=0.0,
            done=env.done,
            fidelity=env.fidelity,
            steps_used=0,
        )
    return result
