"""Exact simulator for small qubit registers.

Pure states are complex statevectors of length 2**n, mixed states are
2**n x 2**n density matrices.  Qubit ordering is little-endian throughout
the package: qubit 0 is the least significant bit of the amplitude index,
so for two qubits the basis order is |q1 q0> = 00, 01, 10, 11 and the
state "qubit 0 in |1>, qubit 1 in |0>" sits at index 1.

Gates are applied as dense full-register matrices, which is exact and
plenty fast for the register sizes this package targets (n <= 4 for
tomography, small n generally).  Gate noise is a single-qubit depolarizing
channel applied after each gate to every qubit the gate touched; readout
noise is an independent symmetric bit flip folded analytically into
expectation values.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

SQRT1_2 = 1.0 / math.sqrt(2.0)

# 2x2 building blocks, complex128.
IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X_MATRIX = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y_MATRIX = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z_MATRIX = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) * SQRT1_2

PAULI_BY_AXIS = {"x": PAULI_X_MATRIX, "y": PAULI_Y_MATRIX, "z": PAULI_Z_MATRIX}


class GateKind(enum.Enum):
    """The gate vocabulary the search agent may place on a circuit."""

    PHASE = "phase"  # diag(1, e^{i*angle}), rotation about the Z axis
    PAULI_X = "x"
    PAULI_Y = "y"
    PAULI_Z = "z"
    HADAMARD = "h"
    CNOT = "cx"


SINGLE_QUBIT_KINDS = frozenset(
    {GateKind.PHASE, GateKind.PAULI_X, GateKind.PAULI_Y, GateKind.PAULI_Z, GateKind.HADAMARD}
)


@dataclass(frozen=True)
class Gate:
    """A gate kind plus its angle parameter (PHASE only)."""

    kind: GateKind
    angle: float | None = None

    def __post_init__(self) -> None:
        if self.kind is GateKind.PHASE:
            if self.angle is None:
                raise ValueError("PHASE gate requires an angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind.name} gate takes no angle")

    @property
    def n_qubits(self) -> int:
        return 2 if self.kind is GateKind.CNOT else 1


def phase_gate(angle: float) -> Gate:
    return Gate(GateKind.PHASE, float(angle))


PAULI_X = Gate(GateKind.PAULI_X)
PAULI_Y = Gate(GateKind.PAULI_Y)
PAULI_Z = Gate(GateKind.PAULI_Z)
HADAMARD = Gate(GateKind.HADAMARD)
CNOT = Gate(GateKind.CNOT)


@dataclass(frozen=True)
class NoiseSpec:
    """Depolarizing strength per gate and readout bit-flip probability."""

    p_gate: float = 0.0
    p_meas: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_gate <= 1.0:
            raise ValueError(f"p_gate must be in [0, 1], got {self.p_gate}")
        if not 0.0 <= self.p_meas <= 1.0:
            raise ValueError(f"p_meas must be in [0, 1], got {self.p_meas}")

    @property
    def is_noiseless(self) -> bool:
        return self.p_gate == 0.0 and self.p_meas == 0.0


NOISELESS = NoiseSpec(0.0, 0.0)


@dataclass(frozen=True)
class PureState:
    """Unit-norm statevector over n qubits (little-endian amplitude order)."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if amps.shape != (2**self.n_qubits,):
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got shape {amps.shape}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > 1e-8:
            raise ValueError(f"statevector norm^2 = {norm_sq}, expected 1")

    @classmethod
    def zero(cls, n_qubits: int) -> "PureState":
        """The all-zeros register |0...0>."""
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex)
        n = int(round(math.log2(amps.size)))
        if 2**n != amps.size:
            raise ValueError(f"amplitude count {amps.size} is not a power of two")
        return cls(n, amps)


@dataclass(frozen=True)
class MixedState:
    """Density matrix over n qubits: Hermitian, unit trace."""

    n_qubits: int
    rho: np.ndarray

    def __post_init__(self) -> None:
        rho = np.asarray(self.rho, dtype=complex)
        object.__setattr__(self, "rho", rho)
        dim = 2**self.n_qubits
        if rho.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} density matrix, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-8:
            raise ValueError("density matrix is not Hermitian")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > 1e-8:
            raise ValueError(f"density matrix trace = {trace}, expected 1")

    @classmethod
    def from_pure(cls, state: PureState) -> "MixedState":
        amps = state.amplitudes
        return cls(state.n_qubits, np.outer(amps, amps.conj()))

    @classmethod
    def zero(cls, n_qubits: int) -> "MixedState":
        return cls.from_pure(PureState.zero(n_qubits))

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "MixedState":
        dim = 2**n_qubits
        return cls(n_qubits, np.eye(dim, dtype=complex) / dim)


# ---------------------------------------------------------------------------
# Gate matrices and embedding into the full register
# ---------------------------------------------------------------------------


def gate_matrix(gate: Gate) -> np.ndarray:
    """The gate's matrix in its own 2- or 4-dimensional space.

    For CNOT the local ordering is (control, target) little-endian: the
    control is the low bit of the 4-dimensional index.
    """
    kind = gate.kind
    if kind is GateKind.PHASE:
        return np.array([[1, 0], [0, np.exp(1j * gate.angle)]], dtype=complex)
    if kind is GateKind.PAULI_X:
        return PAULI_X_MATRIX
    if kind is GateKind.PAULI_Y:
        return PAULI_Y_MATRIX
    if kind is GateKind.PAULI_Z:
        return PAULI_Z_MATRIX
    if kind is GateKind.HADAMARD:
        return HADAMARD_MATRIX
    # CNOT, basis |target control>: control = bit 0, target = bit 1.
    mat = np.zeros((4, 4), dtype=complex)
    for control in (0, 1):
        for target in (0, 1):
            src = (target << 1) | control
            dst = ((target ^ control) << 1) | control
            mat[dst, src] = 1.0
    return mat


def embed_operator(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Lift a single-qubit operator to the full 2**n register."""
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit index {qubit} out of range for {n_qubits} qubits")
    high = np.eye(2 ** (n_qubits - 1 - qubit), dtype=complex)
    low = np.eye(2**qubit, dtype=complex)
    return np.kron(high, np.kron(op, low))


def gate_unitary(gate: Gate, qubits: tuple[int, ...], n_qubits: int) -> np.ndarray:
    """Full-register unitary for a gate acting on the given qubit(s)."""
    qubits = tuple(int(q) for q in qubits)
    _check_qubits(gate, qubits, n_qubits)
    if gate.kind is not GateKind.CNOT:
        return embed_operator(gate_matrix(gate), qubits[0], n_qubits)
    control, target = qubits
    proj0 = np.array([[1, 0], [0, 0]], dtype=complex)
    proj1 = np.array([[0, 0], [0, 1]], dtype=complex)
    keep = embed_operator(proj0, control, n_qubits)
    flip = embed_operator(proj1, control, n_qubits) @ embed_operator(
        PAULI_X_MATRIX, target, n_qubits
    )
    return keep + flip


def _check_qubits(gate: Gate, qubits: tuple[int, ...], n_qubits: int) -> None:
    expected = gate.n_qubits
    if len(qubits) != expected:
        raise ValueError(
            f"{gate.kind.name} acts on {expected} qubit(s), got indices {qubits}"
        )
    for q in qubits:
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit index {q} out of range for {n_qubits} qubits")
    if gate.kind is GateKind.CNOT and qubits[0] == qubits[1]:
        raise ValueError("CNOT control and target must be distinct")


# ---------------------------------------------------------------------------
# State evolution
# ---------------------------------------------------------------------------


def apply_gate_pure(state: PureState, gate: Gate, qubits: tuple[int, ...]) -> PureState:
    """Apply a unitary gate to a pure state."""
    unitary = gate_unitary(gate, tuple(qubits), state.n_qubits)
    return PureState(state.n_qubits, unitary @ state.amplitudes)


def apply_gate_mixed(
    state: MixedState,
    gate: Gate,
    qubits: tuple[int, ...],
    noise: NoiseSpec = NOISELESS,
) -> MixedState:
    """Apply a gate to a density matrix, then depolarize every touched qubit.

    A CNOT is followed by independent single-qubit depolarizing channels on
    both control and target, i.e. the tensor product of two single-qubit
    channels.
    """
    qubits = tuple(qubits)
    unitary = gate_unitary(gate, qubits, state.n_qubits)
    rho = unitary @ state.rho @ unitary.conj().T
    result = MixedState(state.n_qubits, rho)
    if noise.p_gate > 0.0:
        for q in qubits:
            result = depolarize(result, q, noise.p_gate)
    return result


def depolarize(state: MixedState, qubit: int, p: float) -> MixedState:
    """Single-qubit depolarizing channel: rho -> (1-p) rho + p * I/2 on `qubit`.

    Implemented as the equivalent Kraus mixture with weights
    (1 - 3p/4, p/4, p/4, p/4) on (I, X, Y, Z).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing probability must be in [0, 1], got {p}")
    if p == 0.0:
        return state
    n = state.n_qubits
    rho = state.rho
    mixed = np.zeros_like(rho)
    for pauli in (PAULI_X_MATRIX, PAULI_Y_MATRIX, PAULI_Z_MATRIX):
        full = embed_operator(pauli, qubit, n)
        mixed += full @ rho @ full.conj().T
    return MixedState(n, (1.0 - 0.75 * p) * rho + 0.25 * p * mixed)


def depolarizing_kraus(p: float) -> list[np.ndarray]:
    """The four 2x2 Kraus operators of the depolarizing channel."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing probability must be in [0, 1], got {p}")
    ops = [math.sqrt(1.0 - 0.75 * p) * IDENTITY_2]
    for pauli in (PAULI_X_MATRIX, PAULI_Y_MATRIX, PAULI_Z_MATRIX):
        ops.append(math.sqrt(0.25 * p) * pauli)
    return ops


# ---------------------------------------------------------------------------
# Measurement-side quantities
# ---------------------------------------------------------------------------


def pauli_expectation(state: PureState | MixedState, qubit: int, axis: str) -> float:
    """<sigma_axis> on one qubit; axis is "x", "y" or "z"."""
    key = axis.lower()
    if key not in PAULI_BY_AXIS:
        raise ValueError(f"axis must be one of x, y, z; got {axis!r}")
    op = embed_operator(PAULI_BY_AXIS[key], qubit, state.n_qubits)
    if isinstance(state, PureState):
        value = np.vdot(state.amplitudes, op @ state.amplitudes)
    else:
        value = np.einsum("ij,ji->", state.rho, op)
    return float(np.clip(value.real, -1.0, 1.0))


def readout_damped_expectation(true_value: float, p_meas: float) -> float:
    """Expectation of a +-1 observable whose readout flips with probability p_meas.

    An independent symmetric flip maps +1 -> -1 with probability p_meas, so
    the observed mean shrinks by the factor (1 - 2 p_meas).
    """
    return (1.0 - 2.0 * p_meas) * true_value


def fidelity(state: PureState | MixedState, target: PureState) -> float:
    """Overlap with a pure target: |<target|psi>|^2 or <target|rho|target>."""
    if state.n_qubits != target.n_qubits:
        raise ValueError(
            f"qubit count mismatch: state has {state.n_qubits}, target has {target.n_qubits}"
        )
    t = target.amplitudes
    if isinstance(state, PureState):
        value = abs(np.vdot(t, state.amplitudes)) ** 2
    else:
        value = np.vdot(t, state.rho @ t).real
    return float(np.clip(value, 0.0, 1.0))


# ---------------------------------------------------------------------------
# Pauli-basis tomography (exact, small registers only)
# ---------------------------------------------------------------------------

TOMOGRAPHY_MAX_QUBITS = 4

_PAULI_BY_LETTER = {
    "I": IDENTITY_2,
    "X": PAULI_X_MATRIX,
    "Y": PAULI_Y_MATRIX,
    "Z": PAULI_Z_MATRIX,
}


def pauli_string_operator(label: str) -> np.ndarray:
    """Tensor product operator for a Pauli string.

    Character k of the label is the operator on qubit k, e.g. "XZ" is X on
    qubit 0 and Z on qubit 1.
    """
    if not label or any(c not in _PAULI_BY_LETTER for c in label):
        raise ValueError(f"invalid Pauli string {label!r}")
    op = _PAULI_BY_LETTER[label[-1]]
    for c in reversed(label[:-1]):
        op = np.kron(op, _PAULI_BY_LETTER[c])
    return op


def pauli_string_labels(n_qubits: int, include_identity: bool = False):
    """All length-n Pauli strings, identity-only string optionally included."""
    for letters in itertools.product("IXYZ", repeat=n_qubits):
        label = "".join(letters)
        if include_identity or label != "I" * n_qubits:
            yield label


def all_pauli_expectations(state: PureState | MixedState) -> dict[str, float]:
    """Exact expectation of every non-identity Pauli string (n <= 4)."""
    n = state.n_qubits
    if n > TOMOGRAPHY_MAX_QUBITS:
        raise ValueError(
            f"full Pauli expectation set limited to {TOMOGRAPHY_MAX_QUBITS} qubits, got {n}"
        )
    rho = state.rho if isinstance(state, MixedState) else MixedState.from_pure(state).rho
    out = {}
    for label in pauli_string_labels(n):
        op = pauli_string_operator(label)
        out[label] = float(np.einsum("ij,ji->", rho, op).real)
    return out


def tomography_reconstruct(expectations: dict[str, float], n_qubits: int) -> MixedState:
    """Rebuild a density matrix from the complete set of Pauli expectations.

    Requires all 4**n - 1 non-identity strings; the identity coefficient is
    fixed to 1 by unit trace.
    """
    if n_qubits > TOMOGRAPHY_MAX_QUBITS:
        raise ValueError(
            f"tomography limited to {TOMOGRAPHY_MAX_QUBITS} qubits, got {n_qubits}"
        )
    dim = 2**n_qubits
    rho = np.eye(dim, dtype=complex)
    for label in pauli_string_labels(n_qubits):
        if label not in expectations:
            raise ValueError(f"missing Pauli string {label!r} in expectations")
        rho += expectations[label] * pauli_string_operator(label)
    return MixedState(n_qubits, rho / dim)


# ---------------------------------------------------------------------------
# Target-state files
# ---------------------------------------------------------------------------


def load_target_state(path) -> PureState:
    """Read a statevector from a text file of "re im" pairs, one per line.

    The vector must have a power-of-two length and unit norm within 1e-6;
    it is renormalized exactly on load. Blank lines and '#' comments are
    ignored.
    """
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 're im', got {raw!r}")
            try:
                re_part, im_part = float(parts[0]), float(parts[1])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric amplitude {raw!r}") from exc
            values.append(complex(re_part, im_part))
    amps = np.asarray(values, dtype=complex)
    n = int(round(math.log2(amps.size))) if amps.size else 0
    if amps.size == 0 or 2**n != amps.size:
        raise ValueError(f"{path}: amplitude count {amps.size} is not a power of two")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"{path}: statevector norm {norm} is not 1 within 1e-6")
    return PureState(n, amps / norm)
