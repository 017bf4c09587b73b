"""Exhaustive shortest-circuit search, independent of any learned policy.

Enumerates all gate sequences over the env's exact action vocabulary in
breadth-first order and returns the first (hence shortest, ties broken by
lexicographic action index) sequence whose final state reaches the target
fidelity.  The whole depth level is evolved at once: the frontier is a
matrix of statevectors and each action's full-register unitary hits every
column in one batched product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..env import GateAction, build_action_set
from ..qsim import PureState, gate_unitary

SEQUENCE_BUDGET = 100_000_000  # total sequences enumerable across all depths


@dataclass(frozen=True)
class CircuitProgram:
    """An ordered gate list plus where it came from."""

    actions: tuple[GateAction, ...]
    provenance: str  # "oracle" or "agent"
    fidelity: float

    def __len__(self) -> int:
        return len(self.actions)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.actions)


def brute_force_search(
    n_qubits: int,
    target: PureState,
    max_depth: int,
    threshold: float = 0.99,
) -> CircuitProgram | None:
    """Shortest gate sequence with fidelity >= threshold, or None.

    Raises ValueError if the enumeration would exceed the sequence budget.
    """
    if target.n_qubits != n_qubits:
        raise ValueError(
            f"target spans {target.n_qubits} qubits, search asked for {n_qubits}"
        )
    if max_depth < 0:
        raise ValueError(f"max_depth must be nonnegative, got {max_depth}")
    actions = build_action_set(n_qubits)
    n_actions = len(actions)
    total = sum(n_actions**d for d in range(1, max_depth + 1))
    if total > SEQUENCE_BUDGET:
        raise ValueError(
            f"search would enumerate {total} sequences over depth {max_depth}, "
            f"budget is {SEQUENCE_BUDGET}"
        )

    dim = 2**n_qubits
    start = np.zeros(dim, dtype=complex)
    start[0] = 1.0
    t_conj = target.amplitudes.conj()

    initial_fidelity = float(abs(t_conj @ start) ** 2)
    if initial_fidelity >= threshold:
        return CircuitProgram((), "oracle", initial_fidelity)

    unitaries = np.stack([gate_unitary(a.gate, a.qubits, n_qubits) for a in actions])

    frontier = start[:, None]  # columns are statevectors, one per sequence
    for depth in range(1, max_depth + 1):
        # Column w*A + a extends parent column w with action a, so column
        # order stays lexicographic in the action sequence.
        expanded = np.einsum("aij,jw->iwa", unitaries, frontier)
        frontier = expanded.reshape(dim, frontier.shape[1] * n_actions)
        fidelities = np.abs(t_conj @ frontier) ** 2
        hits = np.nonzero(fidelities >= threshold)[0]
        if hits.size:
            best = int(hits[0])
            return CircuitProgram(
                _decode(best, depth, n_actions, actions),
                "oracle",
                float(fidelities[best]),
            )
    return None


def _decode(index: int, depth: int, n_actions: int, actions) -> tuple[GateAction, ...]:
    """Flat frontier column index back to its action sequence."""
    digits = []
    for _ in range(depth):
        index, a = divmod(index, n_actions)
        digits.append(a)
    return tuple(actions[a] for a in reversed(digits))
