"""Sample-by-sample execution of difference equations with optional ADC/DAC emulation."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .controller import DiffEqCoeffs, FocDigital, to_difference_equation
from .errors import InvalidParams, NonFiniteInput


class FilterState:
    """Direct-form I section ``y[n] = sum b_i x[n-i] - sum_{j>=1} a_j y[n-j]``.

    Histories are ring buffers holding the most recent sample at index 0.
    """

    def __init__(self, coeffs: DiffEqCoeffs):
        self.coeffs = coeffs
        self._b = coeffs.b
        self._a = coeffs.a[1:]
        self.x_hist: deque[float] = deque([0.0] * (len(coeffs.b) - 1), maxlen=len(coeffs.b) - 1)
        self.y_hist: deque[float] = deque([0.0] * (len(coeffs.a) - 1), maxlen=len(coeffs.a) - 1)

    def step(self, x: float) -> float:
        b, a = self._b, self._a
        y = b[0] * x
        for bi, xi in zip(b[1:], self.x_hist):
            y += bi * xi
        for aj, yj in zip(a, self.y_hist):
            y -= aj * yj
        if self.x_hist.maxlen:
            self.x_hist.appendleft(x)
        if self.y_hist.maxlen:
            self.y_hist.appendleft(y)
        return y

    def reset(self) -> None:
        for hist in (self.x_hist, self.y_hist):
            hist.clear()
            hist.extend([0.0] * (hist.maxlen or 0))


def round_half_up(v: float) -> int:
    return math.floor(v + 0.5)


@dataclass(frozen=True)
class QuantizationConfig:
    adc_bits: int = 10
    dac_bits: int = 12
    v_min: float = 0.0
    v_max: float = 5.0
    adc_enabled: bool = True
    dac_enabled: bool = True

    def __post_init__(self):
        if not self.v_max > self.v_min:
            raise InvalidParams(f"v_max ({self.v_max}) must exceed v_min ({self.v_min})")
        for name in ("adc_bits", "dac_bits"):
            bits = getattr(self, name)
            if not 4 <= bits <= 24:
                raise InvalidParams(f"{name} = {bits} outside [4, 24]")

    def lsb(self, bits: int) -> float:
        return (self.v_max - self.v_min) / (2**bits - 1)

    def code(self, v: float, bits: int) -> int:
        v = min(max(v, self.v_min), self.v_max)
        return round_half_up((v - self.v_min) / (self.v_max - self.v_min) * (2**bits - 1))

    def quantize(self, v: float, bits: int) -> float:
        return self.v_min + self.code(v, bits) * self.lsb(bits)


class ControllerRuntime:
    """Mutable execution state for one controller; one instance per simulation."""

    def __init__(self, sections: Sequence[DiffEqCoeffs], proportional: float = 0.0,
                 quant: QuantizationConfig | None = None):
        self.filters = [FilterState(c) for c in sections]
        self.proportional = float(proportional)
        self.quant = quant or QuantizationConfig()
        self.n = 0

    @classmethod
    def from_foc(cls, foc: FocDigital, quant: QuantizationConfig | None = None) -> ControllerRuntime:
        K = 0.0
        sections = []
        for br in foc.branches:
            if br.name == "P":
                K = br.tf.gain * br.tf.num.coeffs[0] / br.tf.den.coeffs[0]
            else:
                sections.append(to_difference_equation(br.tf))
        return cls(sections, K, quant)

    def step(self, e: float) -> float:
        if not math.isfinite(e):
            raise NonFiniteInput(f"non-finite controller input {e!r}")
        u = self.proportional * e
        for f in self.filters:
            u += f.step(e)
        self.n += 1
        return u

    def step_quantized(self, e_volts: float) -> float:
        if not math.isfinite(e_volts):
            raise NonFiniteInput(f"non-finite controller input {e_volts!r}")
        q = self.quant
        v_in = q.quantize(e_volts, q.adc_bits) if q.adc_enabled else e_volts
        u = self.step(v_in)
        return q.quantize(u, q.dac_bits) if q.dac_enabled else u

    def reset(self) -> None:
        for f in self.filters:
            f.reset()
        self.n = 0


def run(rt: ControllerRuntime, signal, quantized: bool = False) -> list[float]:
    stepper = rt.step_quantized if quantized else rt.step
    return [stepper(float(e)) for e in signal]
