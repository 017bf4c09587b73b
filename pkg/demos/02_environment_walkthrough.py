"""Stepping the circuit-building environment by hand.

The agent sees 3n Pauli expectations, pays a small penalty per gate, and
the episode ends when the prepared state reaches the fidelity threshold
or the gate budget runs out.
"""

import numpy as np

from gatesearch.env import CircuitEnv, EnvConfig, build_action_set
from gatesearch.harness.config import resolve_target
from gatesearch.qsim import NoiseSpec

target = resolve_target("bell")
env = CircuitEnv(EnvConfig(target=target))

# the discrete action vocabulary: 5 single-qubit gates per qubit,
# then every ordered CNOT pair
print(f"{env.n_actions} actions for 2 qubits:")
for i, action in enumerate(build_action_set(2)):
    print(f"  {i:2d}  {action.label}")

obs = env.reset()
print()
print("reset observation (q0 x,y,z then q1 x,y,z):", obs)

# a wrong move first: X on qubit 1 does not help
result = env.step(6)
print()
print("step 'x 1':  reward", result.reward, " fidelity", round(result.fidelity, 4))

# undo it, then build the Bell pair: H on qubit 0, CNOT 0 -> 1
result = env.step(6)
print("step 'x 1':  reward", result.reward, " fidelity", round(result.fidelity, 4))
result = env.step(4)
print("step 'h 0':  reward", result.reward, " fidelity", round(result.fidelity, 4))
result = env.step(10)
print("step 'cx 0 1': reward", round(result.reward, 4),
      " fidelity", round(result.fidelity, 4), " done", result.done)

print()
print("episode used", result.steps_used, "gates:",
      [env.actions[i].label for i in env.episode_actions])
print("final observation:", np.round(result.observation, 4))

# observations in a noisy env are damped and optionally shot-sampled
noisy = CircuitEnv(
    EnvConfig(target=target, noise=NoiseSpec(p_gate=0.01, p_meas=0.05)),
    observation_shots=2000,
    rng=np.random.default_rng(0),
)
noisy.reset()
noisy_result = noisy.step(4)
print()
print("same 'h 0' in a noisy env (p_gate=0.01, p_meas=0.05, 2000 shots):")
print("  observation:", np.round(noisy_result.observation, 4))
