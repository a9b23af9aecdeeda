from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Trajectory:
    """Sampled solution of a flow or a learning run.

    ``states[i]`` is the state at ``times[i]``; ``diagnostics`` maps a name to
    one scalar per sample; ``aux`` holds any other per-sample arrays;
    ``meta`` records seeds, flags and settings.
    """

    times: np.ndarray
    states: np.ndarray
    diagnostics: dict[str, np.ndarray] = field(default_factory=dict)
    aux: dict[str, np.ndarray] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states)
        if len(self.times) != len(self.states):
            raise ValueError("times and states differ in length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_dict(self) -> dict:
        def enc(a):
            a = np.asarray(a)
            if np.iscomplexobj(a):
                return {"real": a.real.tolist(), "imag": a.imag.tolist()}
            return a.tolist()

        return {
            "times": self.times.tolist(),
            "states": enc(self.states),
            "diagnostics": {k: enc(v) for k, v in self.diagnostics.items()},
            "meta": self.meta,
        }
