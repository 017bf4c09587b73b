"""
A tour of the quantum register simulator
========================================

Statevectors, density matrices, depolarizing noise, readout damping,
and reconstructing a state from its Pauli expectation values.
"""

import numpy as np

from gatesearch import qsim

# ---------------------------------------------------------------------
# Pure states. Qubit 0 is the least significant bit of the basis index,
# so |01> means "qubit 0 excited, qubit 1 in the ground state".
# ---------------------------------------------------------------------

state = qsim.PureState.zero(2)
print("initial amplitudes:", np.round(state.amplitudes, 6))

state = qsim.apply_gate_pure(state, qsim.HADAMARD, (0,))
state = qsim.apply_gate_pure(state, qsim.CNOT, (0, 1))
print("after H(q0), CNOT(q0 -> q1):", np.round(state.amplitudes, 6))

bell = qsim.PureState.from_amplitudes(
    np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
)
print("fidelity with the Bell state:", qsim.fidelity(state, bell))

# phase gates only touch the |1> component of their qubit
phased = qsim.apply_gate_pure(state, qsim.phase_gate(np.pi / 4), (1,))
print("phase(pi/4) on q1:", np.round(phased.amplitudes, 6))
print("fidelity after the phase kick:", round(qsim.fidelity(phased, bell), 6))

# ---------------------------------------------------------------------
# Density matrices and depolarizing noise. Every gate is followed by a
# depolarizing channel on the qubits it touched.
# ---------------------------------------------------------------------

noise = qsim.NoiseSpec(p_gate=0.05, p_meas=0.0)
rho = qsim.MixedState.zero(2)
rho = qsim.apply_gate_mixed(rho, qsim.HADAMARD, (0,), noise)
rho = qsim.apply_gate_mixed(rho, qsim.CNOT, (0, 1), noise)

print()
print("noisy Bell preparation at p_gate = 0.05")
print("  purity tr(rho^2) =", round(float(np.trace(rho.rho @ rho.rho).real), 6))
print("  fidelity         =", round(qsim.fidelity(rho, bell), 6))

ideal = qsim.MixedState.zero(2)
ideal = qsim.apply_gate_mixed(ideal, qsim.HADAMARD, (0,), qsim.NOISELESS)
ideal = qsim.apply_gate_mixed(ideal, qsim.CNOT, (0, 1), qsim.NOISELESS)
print("  noiseless density route gives fidelity", qsim.fidelity(ideal, bell))

# ---------------------------------------------------------------------
# Measurement. Readout error shrinks every expectation value toward 0;
# it never changes the state itself.
# ---------------------------------------------------------------------

plus = qsim.apply_gate_mixed(qsim.MixedState.zero(2), qsim.HADAMARD, (0,), noise)
exact = qsim.pauli_expectation(plus, qubit=0, axis="x")
print()
print("<X on q0> after a noisy H:", round(exact, 6))
for p_meas in (0.01, 0.05, 0.2):
    damped = qsim.readout_damped_expectation(exact, p_meas)
    print(f"<X on q0> read out with p_meas={p_meas}: {damped:.6f}")

# ---------------------------------------------------------------------
# Tomography: 4^n - 1 Pauli expectations pin the state down exactly.
# ---------------------------------------------------------------------

expectations = qsim.all_pauli_expectations(rho)
rebuilt = qsim.tomography_reconstruct(expectations, 2)
print()
print("tomography reconstruction error:",
      float(np.max(np.abs(rebuilt.rho - rho.rho))))
