"""Learning under hardware-style noise.

Gate noise caps the reachable fidelity, so the success threshold is
dropped to 0.95. Training runs at two depolarizing strengths; stronger
noise should show up as lower converged fidelity. The learned circuit
is then replayed exactly, with and without noise.
"""

import os

import numpy as np

from gatesearch.harness import RunConfig, replay_circuit, run_experiment
from gatesearch.harness.config import resolve_target
from gatesearch.qsim import NoiseSpec

out_root = os.path.join(os.path.dirname(__file__), "out", "noisy_bell")
target = resolve_target("bell")
best_programs = {}

for p in (0.001, 0.005):
    config = RunConfig(
        name=f"bell-noisy-{p}",
        algorithm="ppo",
        target="bell",
        episodes=1500,
        seeds=(0, 1, 2),
        out_dir=os.path.join(out_root, f"p{p}"),
        fidelity_threshold=0.95,
        noise=NoiseSpec(p_gate=p, p_meas=p),
    )
    result = run_experiment(config)
    finals = [
        result.seed_results[s].fidelities()[-100:].mean() for s in config.seeds
    ]
    print(f"p_gate = p_meas = {p}: "
          f"mean final fidelity per seed = {np.round(finals, 4)}")
    best_programs[p] = result.best_program()

print()
for p, program in best_programs.items():
    report = replay_circuit(program.actions, target, NoiseSpec(p, p))
    print(f"best circuit at p={p}: {', '.join(program.labels)}")
    print(f"  ideal fidelity {report.noise_free_fidelity:.6f}, "
          f"noisy fidelity {report.noisy_fidelity:.6f}")

# the depolarizing channel hits both CNOT qubits, so a 2-gate Bell
# circuit loses roughly 2 * p of fidelity at small p
p = 0.005
report = replay_circuit(best_programs[p].actions, target, NoiseSpec(p, 0.0))
print()
print(f"fidelity drop at p_gate={p}: {1 - report.noisy_fidelity:.6f} "
      f"(about 2*p = {2 * p})")
