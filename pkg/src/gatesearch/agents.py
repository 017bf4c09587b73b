"""Actor-critic trainers: per-episode advantage updates and clipped-ratio updates.

Two on-policy algorithms share the same actor/critic pair:

* the episodic trainer updates once per finished episode from that episode's
  trajectory, with loss  value_coef * mean((V-R)^2) + mean(-log pi(a) * A)
  - entropy_coef * sum_t H_t  (the entropy term is summed over the episode,
  the other terms averaged);
* the clipped-ratio trainer collects a fixed horizon of env steps (episode
  boundaries may fall mid-buffer), then runs several epochs of
  mean(-min(q*A, clip(q, 1-C, 1+C)*A) + value_coef*(V-R)^2
  - entropy_coef*H_t), taking one Adam step per epoch and finally syncing
  the rollout policy to the updated one.

Advantages A = R - V are treated as constants in the policy terms; only the
squared error trains the critic.  Returns are plain discounted sums reset at
terminals; a horizon cut mid-episode truncates the tail sum (no bootstrap).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import nn
from .env import CircuitEnv

ALGORITHMS = ("a2c", "ppo")


@dataclass(frozen=True)
class AgentHyper:
    """Trainer hyperparameters; use the per-algorithm default constructors."""

    learning_rate: float
    discount: float = 0.99
    value_coef: float = 1.0
    entropy_coef: float = 0.001
    clip_ratio: float = 0.2
    update_epochs: int = 4
    update_horizon: int = 1000

    def __post_init__(self) -> None:
        if self.learning_rate <= 0.0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if not 0.0 < self.discount <= 1.0:
            raise ValueError(f"discount must be in (0, 1], got {self.discount}")
        if self.value_coef < 0.0 or self.entropy_coef < 0.0:
            raise ValueError("loss coefficients must be nonnegative")
        if not 0.0 <= self.clip_ratio < 1.0:
            raise ValueError(f"clip_ratio must be in [0, 1), got {self.clip_ratio}")
        if self.update_epochs < 1:
            raise ValueError(f"update_epochs must be >= 1, got {self.update_epochs}")
        if self.update_horizon < 1:
            raise ValueError(f"update_horizon must be >= 1, got {self.update_horizon}")

    @classmethod
    def a2c_defaults(cls, **overrides) -> "AgentHyper":
        base = dict(learning_rate=1e-4, discount=0.99, value_coef=1.0, entropy_coef=0.001)
        base.update(overrides)
        return cls(**base)

    @classmethod
    def ppo_defaults(cls, **overrides) -> "AgentHyper":
        base = dict(
            learning_rate=2e-3,
            discount=0.99,
            value_coef=0.5,
            entropy_coef=0.01,
            clip_ratio=0.2,
            update_epochs=4,
            update_horizon=1000,
        )
        base.update(overrides)
        return cls(**base)


@dataclass
class Transition:
    """One env step as seen by the agent."""

    state: np.ndarray
    action: int
    reward: float
    done: bool
    log_prob_old: float | None = None  # rollout-policy log pi(a|s), ratio updates only


@dataclass
class AgentParams:
    """Disjoint actor and critic networks."""

    actor: nn.Mlp
    critic: nn.Mlp

    def arrays(self) -> list[np.ndarray]:
        return self.actor.arrays() + self.critic.arrays()

    def copy(self) -> "AgentParams":
        return AgentParams(self.actor.copy(), self.critic.copy())

    def sync_from(self, other: "AgentParams") -> None:
        self.actor.load_from(other.actor)
        self.critic.load_from(other.critic)


def init_agent(obs_dim: int, n_actions: int, rng: np.random.Generator) -> AgentParams:
    if n_actions < 2:
        raise ValueError(f"need at least 2 actions, got {n_actions}")
    return AgentParams(
        actor=nn.init_mlp(obs_dim, n_actions, rng),
        critic=nn.init_mlp(obs_dim, 1, rng),
    )


# ---------------------------------------------------------------------------
# Core pieces
# ---------------------------------------------------------------------------


def select_action(probs: np.ndarray, rng: np.random.Generator) -> int:
    """Sample a categorical action index from a probability vector."""
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probs must be a nonempty 1-D vector")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-6:
        raise ValueError(f"probabilities must be nonnegative and sum to 1, sum={p.sum()}")
    edges = np.cumsum(p)
    index = int(np.searchsorted(edges, rng.random(), side="right"))
    return min(index, p.size - 1)


def discounted_returns(rewards, discount: float, terminals) -> np.ndarray:
    """R_t = sum_{t' >= t} discount^(t'-t) r_t', restarted after each terminal."""
    r = np.asarray(rewards, dtype=float)
    done = np.asarray(terminals, dtype=bool)
    if r.size == 0:
        raise ValueError("empty reward sequence")
    if r.shape != done.shape or r.ndim != 1:
        raise ValueError("rewards and terminal flags must be equal-length 1-D sequences")
    if not 0.0 < discount <= 1.0:
        raise ValueError(f"discount must be in (0, 1], got {discount}")
    out = np.empty_like(r)
    running = 0.0
    for t in range(r.size - 1, -1, -1):
        if done[t]:
            running = 0.0
        running = r[t] + discount * running
        out[t] = running
    return out


def entropy_terms(probs: np.ndarray, log_probs: np.ndarray) -> np.ndarray:
    """Per-row policy entropy -sum_j pi_j log pi_j (natural log)."""
    return -(probs * log_probs).sum(axis=-1)


def clipped_surrogate(q: np.ndarray, advantage: np.ndarray, clip_ratio: float):
    """Per-step loss -min(q*A, clip(q)*A) and the unclipped-branch mask.

    The mask marks steps where the unclipped surrogate attains the min; only
    those steps pass gradient to the policy.
    """
    surr1 = q * advantage
    surr2 = np.clip(q, 1.0 - clip_ratio, 1.0 + clip_ratio) * advantage
    return -np.minimum(surr1, surr2), surr1 <= surr2


@dataclass(frozen=True)
class LossReport:
    """Scalar loss components as composed into the training objective."""

    policy_loss: float
    value_loss: float
    entropy: float
    total: float


def _stack_batch(trajectory: list[Transition]):
    states = np.stack([tr.state for tr in trajectory])
    actions = np.array([tr.action for tr in trajectory], dtype=int)
    rewards = np.array([tr.reward for tr in trajectory], dtype=float)
    dones = np.array([tr.done for tr in trajectory], dtype=bool)
    return states, actions, rewards, dones


def a2c_update(
    trajectory: list[Transition],
    params: AgentParams,
    opt_state: nn.AdamState,
    hyper: AgentHyper,
) -> LossReport:
    """One episodic advantage update; mutates params in place."""
    if not trajectory:
        raise ValueError("empty trajectory")
    if any(tr.done for tr in trajectory[:-1]) or not trajectory[-1].done:
        raise ValueError("trajectory must contain exactly one terminal, at the end")
    states, actions, rewards, dones = _stack_batch(trajectory)
    steps = len(trajectory)
    returns = discounted_returns(rewards, hyper.discount, dones)

    logits, actor_tape = nn.mlp_forward(params.actor, states)
    log_probs = nn.log_softmax(logits)
    probs = np.exp(log_probs)
    values_2d, critic_tape = nn.mlp_forward(params.critic, states)
    values = values_2d[:, 0]

    advantage = returns - values  # constant in the policy term
    onehot = np.zeros_like(probs)
    onehot[np.arange(steps), actions] = 1.0
    per_step_entropy = entropy_terms(probs, log_probs)

    lp_taken = log_probs[np.arange(steps), actions]
    policy_loss = float(np.mean(-lp_taken * advantage))
    value_loss = float(np.mean((values - returns) ** 2))
    entropy_total = float(per_step_entropy.sum())
    total = (
        hyper.value_coef * value_loss
        + policy_loss
        - hyper.entropy_coef * entropy_total
    )

    d_logits = (probs - onehot) * (advantage / steps)[:, None]
    d_logits += hyper.entropy_coef * probs * (log_probs + per_step_entropy[:, None])
    d_values = (hyper.value_coef * 2.0 / steps) * (values - returns)

    grads = nn.mlp_backprop(params.actor, actor_tape, d_logits)
    grads += nn.mlp_backprop(params.critic, critic_tape, d_values[:, None])
    nn.adam_step(params.arrays(), grads, opt_state, hyper.learning_rate)
    return LossReport(policy_loss, value_loss, entropy_total, total)


def ppo_update(
    buffer: list[Transition],
    params: AgentParams,
    params_old: AgentParams,
    opt_state: nn.AdamState,
    hyper: AgentHyper,
) -> LossReport:
    """K-epoch clipped-ratio update over a full horizon; syncs params_old.

    Mutates params in place, copies the result into params_old, and clears
    the buffer.  The returned report averages the loss components over the
    epochs.
    """
    if len(buffer) != hyper.update_horizon:
        raise ValueError(
            f"buffer holds {len(buffer)} steps, update horizon is {hyper.update_horizon}"
        )
    for a, b in zip(params.arrays(), params_old.arrays()):
        if a.shape != b.shape:
            raise ValueError("params and params_old shapes do not match")
    states, actions, rewards, dones = _stack_batch(buffer)
    lp_old = np.array([tr.log_prob_old for tr in buffer], dtype=float)
    if np.any(~np.isfinite(lp_old)) or np.any(lp_old > 1e-12):
        raise ValueError("rollout log-probabilities missing or positive")
    steps = len(buffer)
    returns = discounted_returns(rewards, hyper.discount, dones)
    indices = np.arange(steps)

    reports = []
    for _ in range(hyper.update_epochs):
        logits, actor_tape = nn.mlp_forward(params.actor, states)
        log_probs = nn.log_softmax(logits)
        probs = np.exp(log_probs)
        values_2d, critic_tape = nn.mlp_forward(params.critic, states)
        values = values_2d[:, 0]

        lp_taken = log_probs[indices, actions]
        q = np.exp(lp_taken - lp_old)
        advantage = returns - values  # constant in the surrogate
        per_step_loss, unclipped = clipped_surrogate(q, advantage, hyper.clip_ratio)
        per_step_entropy = entropy_terms(probs, log_probs)

        policy_loss = float(per_step_loss.mean())
        value_loss = float(np.mean((values - returns) ** 2))
        entropy_mean = float(per_step_entropy.mean())
        total = (
            policy_loss
            + hyper.value_coef * value_loss
            - hyper.entropy_coef * entropy_mean
        )
        reports.append((policy_loss, value_loss, entropy_mean, total))

        d_lp = np.where(unclipped, -q * advantage, 0.0) / steps
        onehot = np.zeros_like(probs)
        onehot[indices, actions] = 1.0
        d_logits = d_lp[:, None] * (onehot - probs)
        d_logits += (hyper.entropy_coef / steps) * probs * (
            log_probs + per_step_entropy[:, None]
        )
        d_values = (hyper.value_coef * 2.0 / steps) * (values - returns)

        grads = nn.mlp_backprop(params.actor, actor_tape, d_logits)
        grads += nn.mlp_backprop(params.critic, critic_tape, d_values[:, None])
        nn.adam_step(params.arrays(), grads, opt_state, hyper.learning_rate)

    params_old.sync_from(params)
    buffer.clear()
    means = np.mean(np.array(reports), axis=0)
    return LossReport(*[float(x) for x in means])


# ---------------------------------------------------------------------------
# Training loop
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EpisodeRecord:
    episode: int
    episode_return: float
    fidelity: float
    length: int


@dataclass(frozen=True)
class UpdateRecord:
    episode: int
    env_steps: int
    report: LossReport


@dataclass
class TrainResult:
    """Per-episode metrics plus the best circuit seen during training."""

    episodes: list[EpisodeRecord] = field(default_factory=list)
    updates: list[UpdateRecord] = field(default_factory=list)
    best_actions: tuple[int, ...] | None = None
    best_fidelity: float = 0.0
    best_episode: int | None = None

    def returns(self) -> np.ndarray:
        return np.array([e.episode_return for e in self.episodes])

    def fidelities(self) -> np.ndarray:
        return np.array([e.fidelity for e in self.episodes])


def train(
    env: CircuitEnv,
    algorithm: str,
    hyper: AgentHyper,
    episodes: int,
    seed: int,
) -> TrainResult:
    """Run a full training experiment; deterministic for a given seed."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {algorithm!r}")
    if episodes < 1:
        raise ValueError(f"episodes must be >= 1, got {episodes}")
    rng = np.random.default_rng(seed)
    params = init_agent(env.observation_size, env.n_actions, rng)
    opt_state = nn.adam_init(params.arrays())
    result = TrainResult()

    if algorithm == "a2c":
        _train_episodic(env, params, opt_state, hyper, episodes, rng, result)
    else:
        _train_clipped(env, params, opt_state, hyper, episodes, rng, result)
    return result


def _note_episode(
    result: TrainResult,
    env: CircuitEnv,
    episode: int,
    episode_return: float,
    threshold: float,
) -> None:
    fidelity = env.fidelity
    length = env.steps_used
    result.episodes.append(EpisodeRecord(episode, episode_return, fidelity, length))
    succeeded = fidelity >= threshold
    if succeeded:
        better = fidelity > result.best_fidelity + 1e-12
        same_but_shorter = (
            result.best_actions is not None
            and abs(fidelity - result.best_fidelity) <= 1e-12
            and length < len(result.best_actions)
        )
        if result.best_actions is None or better or same_but_shorter:
            result.best_actions = env.episode_actions
            result.best_fidelity = fidelity
            result.best_episode = episode


def _train_episodic(env, params, opt_state, hyper, episodes, rng, result):
    threshold = env.config.fidelity_threshold
    for episode in range(episodes):
        obs = env.reset()
        trajectory: list[Transition] = []
        episode_return = 0.0
        done = False
        while not done:
            probs = nn.policy_forward(params.actor, obs)
            action = select_action(probs, rng)
            step = env.step(action)
            trajectory.append(Transition(obs, action, step.reward, step.done))
            episode_return += step.reward
            obs = step.observation
            done = step.done
        report = a2c_update(trajectory, params, opt_state, hyper)
        result.updates.append(UpdateRecord(episode, env.steps_used, report))
        _note_episode(result, env, episode, episode_return, threshold)


def _train_clipped(env, params, opt_state, hyper, episodes, rng, result):
    threshold = env.config.fidelity_threshold
    params_old = params.copy()
    buffer: list[Transition] = []
    total_steps = 0
    for episode in range(episodes):
        obs = env.reset()
        episode_return = 0.0
        done = False
        while not done:
            logits, _ = nn.mlp_forward(params_old.actor, obs)
            log_probs = nn.log_softmax(logits)
            action = select_action(np.exp(log_probs), rng)
            step = env.step(action)
            buffer.append(
                Transition(obs, action, step.reward, step.done, float(log_probs[action]))
            )
            total_steps += 1
            episode_return += step.reward
            obs = step.observation
            done = step.done
            if len(buffer) == hyper.update_horizon:
                report = ppo_update(buffer, params, params_old, opt_state, hyper)
                result.updates.append(UpdateRecord(episode, total_steps, report))
        _note_episode(result, env, episode, episode_return, threshold)
