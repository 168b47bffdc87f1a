"""Grunwald-Letnikov differintegral on uniformly sampled signals.

Lower terminal fixed at the first sample (zero history before it). Used as
a time-domain reference that shares nothing with the continued-fraction path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, InvalidParams


@dataclass(frozen=True)
class GlSpec:
    r: float
    T: float
    memory_len: int | None = None

    def __post_init__(self):
        if not math.isfinite(self.r) or abs(self.r) > 1:
            raise InvalidParams(f"GL order must satisfy |r| <= 1, got {self.r!r}")
        if not self.T > 0:
            raise InvalidParams(f"sample period must be positive, got {self.T!r}")
        if self.memory_len is not None and self.memory_len < 1:
            raise InvalidParams("memory_len must be >= 1 when bounded")


def gl_weights(r: float, n: int) -> np.ndarray:
    """Signed binomial weights of ``(1 - x)^r``, ``w_0 .. w_n``."""
    w = np.empty(n + 1)
    w[0] = 1.0
    for k in range(1, n + 1):
        w[k] = w[k - 1] * (1.0 - (r + 1.0) / k)
    return w


def gl_apply(signal, spec: GlSpec) -> np.ndarray:
    x = np.asarray(signal, dtype=float)
    if x.size == 0:
        raise DegenerateInput("signal must be non-empty")
    n = len(x)
    L = n if spec.memory_len is None else min(n, spec.memory_len)
    w = gl_weights(spec.r, L - 1)
    return spec.T ** (-spec.r) * np.convolve(x, w)[:n]
