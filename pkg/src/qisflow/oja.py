"""Oja's single-neuron learning rule and its averaged continuous-time limit.

Signals are zero-mean Gaussians with covariance ``G diag(c) G^T``. Update
functions accept either one coupling vector of shape ``(m,)`` or a batch of
independent runs of shape ``(runs, m)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .errors import DegenerateUpdate, DimMismatch
from .flow import IntegratorConfig, integrate_sphere
from .sphere import as_spectrum
from .trajectory import Trajectory

VARIANTS = ("normalized", "truncated")


@dataclass(frozen=True)
class CorrelationModel:
    c: np.ndarray
    eta: float
    frame_G: np.ndarray | None = None

    def __post_init__(self):
        c = as_spectrum(self.c)
        if np.any(c < 0):
            raise ValueError("correlation eigenvalues must be non-negative")
        if not self.eta > 0:
            raise ValueError("learning rate must be positive")
        g = np.eye(c.size) if self.frame_G is None else np.asarray(self.frame_G, dtype=float)
        if g.shape != (c.size, c.size):
            raise DimMismatch(f"frame has shape {g.shape}, expected {(c.size, c.size)}")
        if np.linalg.norm(g.T @ g - np.eye(c.size)) > tol.ORTHOGONAL_ATOL:
            raise ValueError("frame_G is not orthogonal")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "frame_G", g)

    @property
    def dim(self) -> int:
        return self.c.size

    @property
    def correlation(self) -> np.ndarray:
        """``E[X X^T] = G diag(c) G^T``."""
        return (self.frame_G * self.c) @ self.frame_G.T

    @property
    def mixing(self) -> np.ndarray:
        return self.frame_G * np.sqrt(self.c)


class SignalStream:
    """Seeded source of Gaussian draws; ``spawn`` derives independent child streams."""

    def __init__(self, seed: int, _seq: np.random.SeedSequence | None = None):
        self.seed = seed
        self._seq = _seq if _seq is not None else np.random.SeedSequence(seed)
        self.rng = np.random.Generator(np.random.PCG64(self._seq))

    def spawn(self, n: int) -> list["SignalStream"]:
        return [SignalStream(self.seed, s) for s in self._seq.spawn(n)]

    def clone(self) -> "SignalStream":
        """Fresh stream replaying this one's sequence from the start."""
        return SignalStream(self.seed, np.random.SeedSequence(self._seq.entropy, spawn_key=self._seq.spawn_key))

    @property
    def key(self) -> list[int]:
        return [int(self.seed), *map(int, self._seq.spawn_key)]


def draw_signal(model: CorrelationModel, stream: SignalStream) -> np.ndarray:
    """One presynaptic signal ``X = G C^(1/2) g``."""
    return model.mixing @ stream.rng.standard_normal(model.dim)


def draw_signals(model: CorrelationModel, stream: SignalStream, n: int) -> np.ndarray:
    """``n`` consecutive draws as rows; identical to calling :func:`draw_signal` ``n`` times."""
    return stream.rng.standard_normal((n, model.dim)) @ model.mixing.T


@dataclass
class CouplingState:
    W: np.ndarray
    step: int = 0

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=float)


def _normalized_update(W, x, eta):
    y = np.sum(W * x, axis=-1, keepdims=True)
    v = W + eta * y * x
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(norm <= tol.DEGENERATE_NORM):
        raise DegenerateUpdate("W + eta*Y*X vanished; cannot normalize")
    return v / norm


def _truncated_update(W, x, eta):
    y = np.sum(W * x, axis=-1, keepdims=True)
    return W + eta * (y * x - y * y * W)


_UPDATES = {"normalized": _normalized_update, "truncated": _truncated_update}


def oja_step_normalized(state: CouplingState, x, eta: float) -> CouplingState:
    """``W <- (W + eta Y X) / |W + eta Y X|`` with ``Y = W^T X``."""
    return CouplingState(_normalized_update(state.W, np.asarray(x, dtype=float), eta), state.step + 1)


def oja_step_truncated(state: CouplingState, x, eta: float) -> CouplingState:
    """First-order expansion of the normalized step in ``eta``; does not keep ``|W| = 1``."""
    return CouplingState(_truncated_update(state.W, np.asarray(x, dtype=float), eta), state.step + 1)


def run_learning_batch(
    model: CorrelationModel,
    w0: CouplingState,
    steps: int,
    streams: list[SignalStream],
    variant: str = "truncated",
    *,
    stride: int = 1,
    chunk: int = 4096,
) -> Trajectory:
    """Run one learning trajectory per stream, all starting from ``w0``.

    ``states`` has shape ``(samples, runs, m)`` and holds the rotated
    coordinates ``w = G^T W``, sampled every ``stride`` steps at times
    ``t = eta * s``. The raw couplings are in ``aux["W"]``.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    update = _UPDATES[variant]
    runs = len(streams)
    W = np.tile(np.asarray(w0.W, dtype=float), (runs, 1))
    if W.shape[1] != model.dim:
        raise DimMismatch(f"coupling vector has dim {W.shape[1]}, model has dim {model.dim}")
    s0 = w0.step

    samples = [W.copy()]
    sample_steps = [s0]
    done = 0
    while done < steps:
        n = min(chunk, steps - done)
        xs = np.stack([draw_signals(model, st, n) for st in streams], axis=1)
        for i in range(n):
            W = update(W, xs[i], model.eta)
            done += 1
            if done % stride == 0 or done == steps:
                samples.append(W.copy())
                sample_steps.append(s0 + done)

    raw = np.array(samples)
    rotated = raw @ model.frame_G
    sample_steps = np.array(sample_steps)
    return Trajectory(
        model.eta * sample_steps,
        rotated,
        {"norm_err": np.max(np.abs(np.linalg.norm(raw, axis=-1) - 1.0), axis=-1)},
        aux={"W": raw, "step": sample_steps},
        meta={
            "variant": variant,
            "eta": model.eta,
            "c": model.c.tolist(),
            "streams": [st.key for st in streams],
        },
    )


def run_learning(
    model: CorrelationModel,
    w0: CouplingState,
    steps: int,
    stream: SignalStream,
    variant: str = "truncated",
    *,
    stride: int = 1,
) -> Trajectory:
    """Single learning run; ``states`` has shape ``(samples, m)``."""
    batch = run_learning_batch(model, w0, steps, [stream], variant, stride=stride)
    return Trajectory(
        batch.times,
        batch.states[:, 0],
        batch.diagnostics,
        aux={"W": batch.aux["W"][:, 0], "step": batch.aux["step"]},
        meta=batch.meta,
    )


@dataclass
class BridgeResult:
    times: np.ndarray
    mean_w: np.ndarray
    reference: np.ndarray
    deviation: float
    meta: dict = field(default_factory=dict)


def compare_with_aleh(
    model: CorrelationModel,
    w0,
    steps: int,
    runs: int,
    seed: int,
    variant: str = "truncated",
    *,
    stride: int = 50,
) -> BridgeResult:
    """Average ``runs`` seeded learning runs and compare with the deterministic flow.

    The reference solves the averaged equation by RK4 with step ``eta * stride``
    from ``G^T w0``, so its samples fall on the same times ``t = eta * s``.
    Returns the sup-norm deviation over samples and components.
    """
    if steps % stride:
        raise ValueError("steps must be a multiple of stride")
    w0 = np.asarray(w0, dtype=float)
    streams = SignalStream(seed).spawn(runs)
    traj = run_learning_batch(model, CouplingState(w0), steps, streams, variant, stride=stride)
    mean_w = traj.states.mean(axis=1)
    dt = model.eta * stride
    ref = integrate_sphere(model.frame_G.T @ w0, model.c, IntegratorConfig("rk4", dt, dt * (steps // stride), sample_stride=1))
    if len(ref) != len(traj):
        raise RuntimeError("reference and learning samples are misaligned")
    deviation = float(np.max(np.abs(mean_w - ref.states)))
    return BridgeResult(traj.times, mean_w, ref.states, deviation, {"seed": seed, "runs": runs, "steps": steps, "eta": model.eta, "variant": variant})
