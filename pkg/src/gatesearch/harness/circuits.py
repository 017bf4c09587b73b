"""Text form for gate programs: one gate per line, blank/# lines ignored.

    h 0
    cx 0 1
    phase 1 0.7853981633974483

Single-qubit lines are "<kind> <qubit>", CNOT lines are "cx <control>
<target>", and phase lines carry the rotation angle as a full-precision
float.  The format round-trips through GateAction labels unchanged.
"""

from __future__ import annotations

from .. import qsim
from ..env import GateAction
from ..qsim import GateKind

_FIXED_KINDS = {
    "x": qsim.PAULI_X,
    "y": qsim.PAULI_Y,
    "z": qsim.PAULI_Z,
    "h": qsim.HADAMARD,
}


def format_program(actions) -> str:
    """One label per line; the inverse of parse_program."""
    return "\n".join(a.label for a in actions) + ("\n" if actions else "")


def parse_program(text: str, n_qubits: int) -> tuple[GateAction, ...]:
    """Parse a gate listing, validating kinds and qubit indices."""
    actions: list[GateAction] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0].lower()
        try:
            if kind == "cx":
                if len(tokens) != 3:
                    raise ValueError("expected 'cx <control> <target>'")
                control, target = int(tokens[1]), int(tokens[2])
                _check_qubit(control, n_qubits)
                _check_qubit(target, n_qubits)
                if control == target:
                    raise ValueError("control and target must differ")
                actions.append(GateAction(qsim.CNOT, (control, target)))
            elif kind == "phase":
                if len(tokens) != 3:
                    raise ValueError("expected 'phase <qubit> <angle>'")
                qubit = int(tokens[1])
                _check_qubit(qubit, n_qubits)
                actions.append(GateAction(qsim.phase_gate(float(tokens[2])), (qubit,)))
            elif kind in _FIXED_KINDS:
                if len(tokens) != 2:
                    raise ValueError(f"expected '{kind} <qubit>'")
                qubit = int(tokens[1])
                _check_qubit(qubit, n_qubits)
                actions.append(GateAction(_FIXED_KINDS[kind], (qubit,)))
            else:
                raise ValueError(f"unknown gate kind {tokens[0]!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return tuple(actions)


def _check_qubit(q: int, n_qubits: int) -> None:
    if not 0 <= q < n_qubits:
        raise ValueError(f"qubit index {q} out of range for {n_qubits} qubits")


def save_program(path, actions, header: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        fh.write(format_program(actions))


def load_program(path, n_qubits: int) -> tuple[GateAction, ...]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_program(fh.read(), n_qubits)


def describe_action(action: GateAction) -> str:
    """Human-readable one-liner, e.g. "CNOT control q1 target q0"."""
    kind = action.gate.kind
    if kind is GateKind.CNOT:
        return f"CNOT control q{action.qubits[0]} target q{action.qubits[1]}"
    if kind is GateKind.PHASE:
        return f"phase({action.gate.angle:.6g}) on q{action.qubits[0]}"
    names = {
        GateKind.PAULI_X: "X",
        GateKind.PAULI_Y: "Y",
        GateKind.PAULI_Z: "Z",
        GateKind.HADAMARD: "H",
    }
    return f"{names[kind]} on q{action.qubits[0]}"
