"""Small fixed-architecture network with hand-written gradients.

Both the actor and the critic are the same three-layer shape: an affine
map to 64 units, tanh, affine 64 -> 64, tanh, and an affine head.  The
actor's head is as wide as the action set and feeds a softmax; the critic's
head is a single linear unit.  Forward passes record the activations
needed to run the exact backward pass by hand; there is no general
autodiff here, just this one architecture differentiated explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HIDDEN_WIDTH = 64


@dataclass
class Mlp:
    """Three affine layers; weights[i] has shape (out_i, in_i)."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def __post_init__(self) -> None:
        if len(self.weights) != 3 or len(self.biases) != 3:
            raise ValueError("expected exactly 3 layers")
        for w, b in zip(self.weights, self.biases):
            if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
                raise ValueError(f"inconsistent layer shapes {w.shape} / {b.shape}")
        if self.weights[1].shape[1] != self.weights[0].shape[0]:
            raise ValueError("layer 1 -> 2 width mismatch")
        if self.weights[2].shape[1] != self.weights[1].shape[0]:
            raise ValueError("layer 2 -> 3 width mismatch")

    @property
    def in_dim(self) -> int:
        return self.weights[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights[2].shape[0]

    def arrays(self) -> list[np.ndarray]:
        """Parameter arrays in a fixed order: W0, b0, W1, b1, W2, b2."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def copy(self) -> "Mlp":
        return Mlp([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def load_from(self, other: "Mlp") -> None:
        """Copy another network's values into this one's arrays, in place."""
        for dst, src in zip(self.arrays(), other.arrays()):
            if dst.shape != src.shape:
                raise ValueError(f"shape mismatch {dst.shape} vs {src.shape}")
            dst[...] = src


def init_mlp(
    in_dim: int,
    out_dim: int,
    rng: np.random.Generator,
    hidden: int = HIDDEN_WIDTH,
) -> Mlp:
    """Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer."""
    if in_dim < 1 or out_dim < 1:
        raise ValueError("in_dim and out_dim must be positive")
    dims = [(hidden, in_dim), (hidden, hidden), (out_dim, hidden)]
    weights, biases = [], []
    for out_d, in_d in dims:
        bound = 1.0 / np.sqrt(in_d)
        weights.append(rng.uniform(-bound, bound, size=(out_d, in_d)))
        biases.append(rng.uniform(-bound, bound, size=out_d))
    return Mlp(weights, biases)


@dataclass
class Tape:
    """Activations from one forward pass, enough for the exact backward pass."""

    inputs: np.ndarray        # (B, in_dim)
    hidden: list[np.ndarray]  # post-tanh activations, (B, 64) each
    batched: bool             # whether the caller passed a 2-D input


def _as_batch(net: Mlp, x: np.ndarray) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite network input")
    if arr.ndim == 1:
        arr = arr[None, :]
        batched = False
    elif arr.ndim == 2:
        batched = True
    else:
        raise ValueError(f"input must be 1-D or 2-D, got shape {arr.shape}")
    if arr.shape[1] != net.in_dim:
        raise ValueError(f"expected input width {net.in_dim}, got {arr.shape[1]}")
    return arr, batched


def mlp_forward(net: Mlp, x: np.ndarray) -> tuple[np.ndarray, Tape]:
    """Raw head outputs (logits or values) plus the gradient tape."""
    arr, batched = _as_batch(net, x)
    a1 = np.tanh(arr @ net.weights[0].T + net.biases[0])
    a2 = np.tanh(a1 @ net.weights[1].T + net.biases[1])
    out = a2 @ net.weights[2].T + net.biases[2]
    tape = Tape(inputs=arr, hidden=[a1, a2], batched=batched)
    return (out if batched else out[0]), tape


def mlp_backprop(net: Mlp, tape: Tape, d_out: np.ndarray) -> list[np.ndarray]:
    """Gradients of a scalar loss given d(loss)/d(head output).

    Returns arrays in the same order as Mlp.arrays(): W0, b0, W1, b1, W2, b2.
    """
    dz = np.asarray(d_out, dtype=float)
    if not tape.batched:
        dz = dz[None, :]
    a1, a2 = tape.hidden
    if dz.shape != (tape.inputs.shape[0], net.out_dim):
        raise ValueError(
            f"loss gradient shape {dz.shape} does not match head output "
            f"({tape.inputs.shape[0]}, {net.out_dim})"
        )
    d_w2 = dz.T @ a2
    d_b2 = dz.sum(axis=0)
    da2 = dz @ net.weights[2]
    dz2 = da2 * (1.0 - a2 * a2)
    d_w1 = dz2.T @ a1
    d_b1 = dz2.sum(axis=0)
    da1 = dz2 @ net.weights[1]
    dz1 = da1 * (1.0 - a1 * a1)
    d_w0 = dz1.T @ tape.inputs
    d_b0 = dz1.sum(axis=0)
    return [d_w0, d_b0, d_w1, d_b1, d_w2, d_b2]


# ---------------------------------------------------------------------------
# Heads
# ---------------------------------------------------------------------------


def softmax(logits: np.ndarray, axis: int = -1) -> np.ndarray:
    """Max-subtracted softmax, stable for large logit magnitudes."""
    z = np.asarray(logits, dtype=float)
    shifted = z - z.max(axis=axis, keepdims=True)
    expz = np.exp(shifted)
    return expz / expz.sum(axis=axis, keepdims=True)


def log_softmax(logits: np.ndarray, axis: int = -1) -> np.ndarray:
    """log softmax computed directly (not log of softmax)."""
    z = np.asarray(logits, dtype=float)
    shifted = z - z.max(axis=axis, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))


def policy_forward(net: Mlp, obs: np.ndarray) -> np.ndarray:
    """Action probabilities for one observation (or a batch)."""
    logits, _ = mlp_forward(net, obs)
    return softmax(logits)


def value_forward(net: Mlp, obs: np.ndarray):
    """Scalar state value; a batch input yields a vector of values."""
    if net.out_dim != 1:
        raise ValueError(f"value network must have a single output, has {net.out_dim}")
    out, _ = mlp_forward(net, obs)
    if out.ndim == 2:
        return out[:, 0]
    return float(out[0])


# ---------------------------------------------------------------------------
# Adam
# ---------------------------------------------------------------------------


@dataclass
class AdamState:
    """Per-array first/second moments plus the shared step counter."""

    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


def adam_init(
    params: list[np.ndarray],
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
) -> AdamState:
    return AdamState(
        m=[np.zeros_like(p) for p in params],
        v=[np.zeros_like(p) for p in params],
        t=0,
        beta1=beta1,
        beta2=beta2,
        epsilon=epsilon,
    )


def adam_step(
    params: list[np.ndarray],
    grads: list[np.ndarray],
    state: AdamState,
    learning_rate: float,
) -> tuple[list[np.ndarray], AdamState]:
    """One bias-corrected Adam update, applied to the arrays in place."""
    if learning_rate <= 0.0:
        raise ValueError(f"learning rate must be positive, got {learning_rate}")
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ValueError("params/grads/state length mismatch")
    for p, g in zip(params, grads):
        if p.shape != g.shape:
            raise ValueError(f"gradient shape {g.shape} does not match parameter {p.shape}")
        if not np.all(np.isfinite(g)):
            raise ValueError("non-finite gradient")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    bias1 = 1.0 - b1**state.t
    bias2 = 1.0 - b2**state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * np.square(g)
        m_hat = m / bias1
        v_hat = v / bias2
        p -= learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
    return params, state


# ---------------------------------------------------------------------------
# Checkpoints: text files with a shape header per array, row-major values
# ---------------------------------------------------------------------------

_CHECKPOINT_MAGIC = "# array checkpoint v1"


def save_arrays(path, named: dict[str, np.ndarray]) -> None:
    """Write named float arrays to a text checkpoint."""
    lines = [_CHECKPOINT_MAGIC]
    for name, arr in named.items():
        if any(ch.isspace() for ch in name) or not name:
            raise ValueError(f"invalid array name {name!r}")
        a = np.asarray(arr, dtype=float)
        dims = " ".join(str(d) for d in a.shape)
        lines.append(f"array {name} {a.ndim} {dims}".rstrip())
        lines.append(" ".join(repr(float(x)) for x in a.ravel(order="C")))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_arrays(path) -> dict[str, np.ndarray]:
    """Read a checkpoint written by save_arrays."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != _CHECKPOINT_MAGIC:
        raise ValueError(f"{path}: not an array checkpoint")
    out: dict[str, np.ndarray] = {}
    i = 1
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        header = lines[i].split()
        if header[0] != "array" or len(header) < 3:
            raise ValueError(f"{path}: malformed header {lines[i]!r}")
        name = header[1]
        ndim = int(header[2])
        shape = tuple(int(d) for d in header[3 : 3 + ndim])
        if len(shape) != ndim:
            raise ValueError(f"{path}: truncated shape in {lines[i]!r}")
        values = np.array([float(tok) for tok in lines[i + 1].split()], dtype=float)
        expected = int(np.prod(shape)) if shape else 1
        if values.size != expected:
            raise ValueError(
                f"{path}: array {name!r} expects {expected} values, found {values.size}"
            )
        out[name] = values.reshape(shape)
        i += 2
    return out


def mlp_to_named(net: Mlp, prefix: str) -> dict[str, np.ndarray]:
    names = ["w0", "b0", "w1", "b1", "w2", "b2"]
    return {f"{prefix}.{n}": a for n, a in zip(names, net.arrays())}


def mlp_from_named(named: dict[str, np.ndarray], prefix: str) -> Mlp:
    names = ["w0", "b0", "w1", "b1", "w2", "b2"]
    try:
        arrays = [named[f"{prefix}.{n}"] for n in names]
    except KeyError as exc:
        raise ValueError(f"checkpoint missing array {exc.args[0]!r}") from exc
    return Mlp(weights=[arrays[0], arrays[2], arrays[4]], biases=[arrays[1], arrays[3], arrays[5]])
