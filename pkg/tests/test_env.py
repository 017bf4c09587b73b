"""Environment tests: action vocabulary, rewards, termination, noise plumbing."""

import math

import numpy as np
import pytest

from gatesearch import qsim
from gatesearch.env import (
    CircuitEnv,
    EnvConfig,
    GateAction,
    PHASE_ANGLE,
    StepResult,
    build_action_set,
    run_actions,
)
from gatesearch.qsim import (
    CNOT,
    HADAMARD,
    MixedState,
    NoiseSpec,
    PureState,
    apply_gate_mixed,
    fidelity,
)

SQRT1_2 = 1.0 / math.sqrt(2.0)
BELL = PureState.from_amplitudes([SQRT1_2, 0.0, 0.0, SQRT1_2])
GHZ3 = PureState.from_amplitudes([SQRT1_2, 0, 0, 0, 0, 0, 0, SQRT1_2])


def bell_config(**overrides) -> EnvConfig:
    return EnvConfig(target=BELL, **overrides)


def action_index(env: CircuitEnv, label: str) -> int:
    for i, action in enumerate(env.actions):
        if action.label == label:
            return i
    raise AssertionError(f"no action labelled {label!r}")


# ===========================================================================
# Action vocabulary
# ===========================================================================


class TestActionSet:
    """Vocabulary size and canonical ordering."""

    @pytest.mark.parametrize("n,expected", [(2, 12), (3, 21), (4, 32)])
    def test_size_formula(self, n, expected):
        assert len(build_action_set(n)) == expected
        assert expected == 5 * n + n * (n - 1)

    def test_two_qubit_ordering(self):
        labels = [a.label for a in build_action_set(2)]
        assert labels == [
            f"phase 0 {PHASE_ANGLE!r}",
            "x 0",
            "y 0",
            "z 0",
            "h 0",
            f"phase 1 {PHASE_ANGLE!r}",
            "x 1",
            "y 1",
            "z 1",
            "h 1",
            "cx 0 1",
            "cx 1 0",
        ]

    def test_phase_angle_is_pi_over_four(self):
        actions = build_action_set(2)
        assert actions[0].gate.angle == pytest.approx(math.pi / 4, abs=0)

    def test_cnot_pairs_lexicographic(self):
        cx = [a.qubits for a in build_action_set(3) if a.gate is qsim.CNOT]
        assert cx == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]

    def test_single_qubit_register_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            build_action_set(1)


# ===========================================================================
# Episode mechanics
# ===========================================================================


class TestEpisodeMechanics:
    """Reset, stepping, rewards and termination rules."""

    def test_reset_observation_is_all_zero_state(self):
        env = CircuitEnv(bell_config())
        obs = env.reset()
        # Qubit-major x, y, z: |0> has <Z> = 1 and no transverse component.
        np.testing.assert_allclose(obs, [0, 0, 1, 0, 0, 1], atol=1e-12)
        assert env.steps_used == 0
        assert not env.done

    def test_initial_fidelity_versus_bell(self):
        env = CircuitEnv(bell_config())
        assert env.fidelity == pytest.approx(0.5, abs=1e-12)

    def test_single_hadamard_step(self):
        # H on qubit 1 from |00|: overlap amplitude with the Bell target is
        # 1/2, so fidelity is 0.25; episode continues at cost 0.01.
        env = CircuitEnv(bell_config())
        result = env.step(action_index(env, "h 1"))
        assert result.fidelity == pytest.approx(0.25, abs=1e-12)
        assert result.reward == pytest.approx(-0.01, abs=1e-15)
        assert not result.done
        assert result.steps_used == 1
        np.testing.assert_allclose(result.observation, [0, 0, 1, 1, 0, 0], atol=1e-12)

    def test_bell_episode_succeeds(self):
        env = CircuitEnv(bell_config())
        env.step(action_index(env, "h 0"))
        result = env.step(action_index(env, "cx 0 1"))
        assert result.done
        assert result.fidelity == pytest.approx(1.0, abs=1e-12)
        assert result.reward == pytest.approx(0.99, abs=1e-12)
        assert env.episode_actions == (4, 10)

    def test_alternative_bell_circuit_succeeds(self):
        # H on qubit 1 then CNOT(1 -> 0) is the mirror-image preparation.
        env = CircuitEnv(bell_config())
        env.step(action_index(env, "h 1"))
        result = env.step(action_index(env, "cx 1 0"))
        assert result.fidelity == pytest.approx(1.0, abs=1e-12)
        assert result.done

    def test_ghz_episode_succeeds(self):
        env = CircuitEnv(EnvConfig(target=GHZ3))
        for label in ("h 0", "cx 0 1", "cx 0 2"):
            result = env.step(action_index(env, label))
        assert result.done
        assert result.fidelity == pytest.approx(1.0, abs=1e-12)
        assert result.reward == pytest.approx(0.99, abs=1e-12)

    def test_truncation_at_max_steps(self):
        env = CircuitEnv(bell_config(max_steps=5))
        idle = action_index(env, "z 0")  # never moves toward the target
        for step in range(5):
            result = env.step(idle)
        assert result.done
        assert result.steps_used == 5
        assert result.reward == pytest.approx(-0.01, abs=1e-15)
        assert result.fidelity == pytest.approx(0.5, abs=1e-12)

    def test_success_on_final_step_keeps_goal_reward(self):
        # Threshold low enough that one H step clears it exactly at max_steps.
        env = CircuitEnv(bell_config(fidelity_threshold=0.2, max_steps=1))
        result = env.step(action_index(env, "h 1"))
        assert result.done
        assert result.reward == pytest.approx(0.25 - 0.01, abs=1e-12)

    def test_threshold_is_inclusive(self):
        # Target |01> reached by a single X: fidelity is exactly 1.0, which
        # must satisfy a threshold of exactly 1.0 (>= comparison, not >).
        target = PureState.from_amplitudes([0.0, 1.0, 0.0, 0.0])
        env = CircuitEnv(EnvConfig(target=target, fidelity_threshold=1.0))
        result = env.step(action_index(env, "x 0"))
        assert result.done
        assert result.reward == pytest.approx(0.99, abs=1e-15)

    def test_step_after_done_raises(self):
        env = CircuitEnv(bell_config())
        env.step(action_index(env, "h 0"))
        env.step(action_index(env, "cx 0 1"))
        with pytest.raises(RuntimeError, match="reset"):
            env.step(0)

    @pytest.mark.parametrize("bad", [-1, 12, 100])
    def test_invalid_action_index_raises(self, bad):
        env = CircuitEnv(bell_config())
        with pytest.raises(IndexError, match="out of range"):
            env.step(bad)

    def test_reset_clears_history(self):
        env = CircuitEnv(bell_config())
        env.step(action_index(env, "h 0"))
        env.reset()
        assert env.episode_actions == ()
        assert env.steps_used == 0
        assert env.fidelity == pytest.approx(0.5, abs=1e-12)

    def test_run_actions_helper(self):
        env = CircuitEnv(bell_config())
        result = run_actions(env, [4, 10])
        assert result.fidelity == pytest.approx(1.0, abs=1e-12)
        empty = run_actions(env, [])
        assert empty.steps_used == 0
        assert empty.fidelity == pytest.approx(0.5, abs=1e-12)

    def test_config_validation(self):
        with pytest.raises(ValueError, match="fidelity_threshold"):
            bell_config(fidelity_threshold=0.0)
        with pytest.raises(ValueError, match="max_steps"):
            bell_config(max_steps=0)
        with pytest.raises(ValueError, match="step_penalty"):
            bell_config(step_penalty=-0.01)


# ===========================================================================
# Observations
# ===========================================================================


class TestObservations:
    """Pauli expectation vectors, readout damping and shot sampling."""

    def test_qubit_major_axis_order(self):
        env = CircuitEnv(bell_config())
        result = env.step(action_index(env, "h 0"))
        np.testing.assert_allclose(result.observation, [1, 0, 0, 0, 0, 1], atol=1e-12)

    def test_entangled_state_has_zero_local_expectations(self):
        env = CircuitEnv(bell_config())
        env.step(action_index(env, "h 0"))
        result = env.step(action_index(env, "cx 0 1"))
        np.testing.assert_allclose(result.observation, np.zeros(6), atol=1e-12)

    def test_observation_size_property(self):
        assert CircuitEnv(bell_config()).observation_size == 6
        assert CircuitEnv(EnvConfig(target=GHZ3)).observation_size == 9

    def test_readout_damping(self):
        p_meas = 0.01
        env = CircuitEnv(bell_config(noise=NoiseSpec(p_meas=p_meas)))
        obs = env.reset()
        np.testing.assert_allclose(
            obs, [0, 0, 1 - 2 * p_meas, 0, 0, 1 - 2 * p_meas], atol=1e-12
        )

    def test_shot_sampling_matches_mean(self):
        env = CircuitEnv(
            bell_config(),
            observation_shots=200_000,
            rng=np.random.default_rng(7),
        )
        result = env.step(action_index(env, "h 0"))
        # <X> on qubit 0 is 1, a degenerate coin; <Z> on qubit 1 likewise.
        # Nondegenerate entries fluctuate at ~1/sqrt(shots) = 0.0022.
        np.testing.assert_allclose(result.observation[0], 1.0, atol=1e-12)
        np.testing.assert_allclose(result.observation, [1, 0, 0, 0, 0, 1], atol=0.012)

    def test_shot_sampling_is_seeded(self):
        def sampled_obs(seed):
            env = CircuitEnv(
                bell_config(noise=NoiseSpec(p_meas=0.05)),
                observation_shots=64,
                rng=np.random.default_rng(seed),
            )
            return env.step(4).observation

        np.testing.assert_array_equal(sampled_obs(3), sampled_obs(3))
        assert not np.array_equal(sampled_obs(3), sampled_obs(4))

    def test_shot_count_validated(self):
        with pytest.raises(ValueError, match="observation_shots"):
            CircuitEnv(bell_config(), observation_shots=0)


# ===========================================================================
# Noise plumbing and backend agreement
# ===========================================================================


class TestNoisePaths:
    """Density-matrix stepping agrees with the composed channel definition."""

    def test_density_path_matches_pure_when_noiseless(self):
        rng = np.random.default_rng(19)
        pure_env = CircuitEnv(bell_config())
        dense_env = CircuitEnv(bell_config(), force_density_matrix=True)
        for _ in range(30):
            pure_env.reset()
            dense_env.reset()
            for _ in range(int(rng.integers(1, 8))):
                a = int(rng.integers(pure_env.n_actions))
                rp = pure_env.step(a)
                rd = dense_env.step(a)
                assert rp.reward == pytest.approx(rd.reward, abs=1e-12)
                assert rp.fidelity == pytest.approx(rd.fidelity, abs=1e-12)
                np.testing.assert_allclose(rp.observation, rd.observation, atol=1e-12)
                assert rp.done == rd.done
                if rp.done:
                    break

    def test_noisy_step_matches_channel_composition(self):
        # Cross-check the cached einsum path against the reference
        # gate-then-depolarize pipeline built from simulator primitives.
        p = 0.02
        noise = NoiseSpec(p_gate=p)
        env = CircuitEnv(bell_config(noise=noise))
        reference = MixedState.zero(2)
        rng = np.random.default_rng(23)
        for _ in range(6):
            a = int(rng.integers(env.n_actions))
            action = env.actions[a]
            result = env.step(a)
            reference = apply_gate_mixed(reference, action.gate, action.qubits, noise)
            np.testing.assert_allclose(env.current_state().rho, reference.rho, atol=1e-12)
            assert result.fidelity == pytest.approx(fidelity(reference, BELL), abs=1e-12)
            if result.done:
                break

    def test_noisy_bell_fidelity_first_order(self):
        # Three gates touching four qubit slots in total: F = 1 - 2p + O(p^2).
        p = 0.001
        env = CircuitEnv(bell_config(noise=NoiseSpec(p_gate=p)))
        env.step(action_index(env, "h 0"))
        result = env.step(action_index(env, "cx 0 1"))
        assert result.fidelity < 1.0
        assert result.fidelity == pytest.approx(1.0 - 2.0 * p, abs=5.0 * p * p)

    def test_noise_monotone_in_strength(self):
        def bell_fidelity(p):
            env = CircuitEnv(bell_config(noise=NoiseSpec(p_gate=p)))
            env.step(4)
            return env.step(10).fidelity

        assert bell_fidelity(0.005) < bell_fidelity(0.001) < bell_fidelity(0.0)

    def test_gate_noise_does_not_touch_idle_qubits(self):
        # A noisy gate on qubit 0 leaves qubit 1's reduced state exact.
        env = CircuitEnv(bell_config(noise=NoiseSpec(p_gate=0.3)))
        result = env.step(action_index(env, "h 0"))
        np.testing.assert_allclose(result.observation[3:], [0, 0, 1], atol=1e-12)

    def test_density_backend_selected_for_readout_noise_only(self):
        env = CircuitEnv(bell_config(noise=NoiseSpec(p_meas=0.01)))
        assert isinstance(env.current_state(), MixedState)

    def test_pure_backend_selected_when_noiseless(self):
        env = CircuitEnv(bell_config())
        assert isinstance(env.current_state(), PureState)
