"""Test signals, open/closed-loop experiments, error metrics and CSV output."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .controller import FocDigital, to_difference_equation
from .errors import DivergenceDetected, InvalidParams, LengthMismatch, NyquistViolation
from .gl_oracle import GlSpec, gl_apply
from .ratpoly import STAB_EPS, RationalTF, roots
from .runtime import ControllerRuntime, FilterState, QuantizationConfig

SHAPES = ("step", "square", "sine", "custom")
DIVERGENCE_LIMIT = 1e6
DEFAULT_SKIP = 5


@dataclass(frozen=True)
class SignalSpec:
    shape: str = "step"
    amplitude: float = 1.0
    frequency: float = 100.0
    duration: float = 0.1
    T: float = 0.001
    samples: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise InvalidParams(f"unknown signal shape {self.shape!r}")
        if not self.T > 0:
            raise InvalidParams("sample period must be positive")
        if self.shape == "custom":
            if not self.samples:
                raise InvalidParams("custom signal needs samples")
            return
        if self.duration < self.T:
            raise InvalidParams(f"duration {self.duration} shorter than one sample period")
        if self.shape in ("square", "sine") and not self.frequency < 0.5 / self.T:
            raise NyquistViolation(
                f"frequency {self.frequency:g} Hz is not below Nyquist {0.5 / self.T:g} Hz"
            )

    @property
    def n_samples(self) -> int:
        if self.shape == "custom":
            return len(self.samples)
        return int(round(self.duration / self.T))


def generate_signal(spec: SignalSpec) -> np.ndarray:
    if spec.shape == "custom":
        return np.asarray(spec.samples, dtype=float)
    k = np.arange(spec.n_samples)
    if spec.shape == "step":
        return np.full(len(k), float(spec.amplitude))
    cycles = k * spec.T * spec.frequency
    if spec.shape == "sine":
        return spec.amplitude * np.sin(2 * np.pi * cycles)
    # nudge so exact half-period boundaries are not lost to rounding
    frac = np.mod(cycles + 1e-9, 1.0)
    return np.where(frac < 0.5, spec.amplitude, -spec.amplitude)


@dataclass(frozen=True)
class Plant:
    tf: RationalTF

    def __post_init__(self):
        poles = roots(self.tf.den)
        if np.any(np.abs(poles) >= 1 - STAB_EPS):
            raise InvalidParams("plant must be stable")


@dataclass
class SimResult:
    T: float
    columns: dict[str, np.ndarray]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise LengthMismatch(f"columns have differing lengths {sorted(lengths)}")

    def __len__(self):
        return len(self.columns["t"])

    def __getitem__(self, key: str) -> np.ndarray:
        return self.columns[key]

    def with_column(self, name: str, values) -> SimResult:
        cols = dict(self.columns)
        cols[name] = np.asarray(values, dtype=float)
        return SimResult(self.T, cols, dict(self.metadata))

    def to_csv(self, plot_data: bool = False) -> str:
        buf = io.StringIO()
        if plot_data:
            for k, v in self.metadata.items():
                buf.write(f"# {k}: {v}\n")
        w = csv.writer(buf, lineterminator="\n")
        names = list(self.columns)
        w.writerow(names)
        for row in zip(*(self.columns[n] for n in names)):
            w.writerow([format(float(v), ".17g") for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, T: float | None = None) -> SimResult:
        meta = {}
        body = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, val = line[1:].partition(":")
                meta[key.strip()] = val.strip()
            elif line.strip():
                body.append(line)
        rows = list(csv.reader(body))
        names = rows[0]
        data = np.array(rows[1:], dtype=float).reshape(-1, len(names))
        cols = {n: data[:, i] for i, n in enumerate(names)}
        if T is None:
            T = float(meta.get("T", cols["t"][1] - cols["t"][0] if len(data) > 1 else 1.0))
        return cls(T, cols, meta)


def _time(n: int, T: float) -> np.ndarray:
    return np.arange(n) * T


def _provenance(foc: FocDigital) -> dict[str, str]:
    meta = {"T": format(foc.T, ".17g")}
    meta.update({f"param.{k}": v for k, v in foc.params.provenance().items()})
    if foc.params.gf.warning:
        meta["warning"] = foc.params.gf.warning
    return meta


def run_open_loop(foc: FocDigital, signal, quant: QuantizationConfig | None = None) -> SimResult:
    """Feed ``signal`` as the controller's error input."""
    e = np.asarray(signal, dtype=float)
    rt = ControllerRuntime.from_foc(foc, quant)
    stepper = rt.step_quantized if quant is not None else rt.step
    out = np.array([stepper(float(v)) for v in e])
    meta = _provenance(foc)
    meta["mode"] = "open-loop" + (" quantized" if quant is not None else "")
    return SimResult(foc.T, {"t": _time(len(e), foc.T), "ref": e, "err": e.copy(), "out": out}, meta)


def run_closed_loop(foc: FocDigital, plant: Plant, reference) -> SimResult:
    """Unity negative feedback, ``e[n] = r[n] - y[n-1]``."""
    r = np.asarray(reference, dtype=float)
    rt = ControllerRuntime.from_foc(foc)
    p = FilterState(to_difference_equation(plant.tf))
    err = np.zeros(len(r))
    u = np.zeros(len(r))
    y = np.zeros(len(r))
    y_prev = 0.0
    for n, rn in enumerate(r):
        err[n] = rn - y_prev
        u[n] = rt.step(err[n])
        y[n] = y_prev = p.step(u[n])
        if not abs(y_prev) <= DIVERGENCE_LIMIT:
            raise DivergenceDetected(f"|y| exceeded {DIVERGENCE_LIMIT:g} at sample {n}")
    meta = _provenance(foc)
    meta["mode"] = "closed-loop"
    meta["feedback"] = "unity negative feedback with one-sample delay"
    return SimResult(foc.T, {"t": _time(len(r), foc.T), "ref": r, "err": err, "out": u, "y": y}, meta)


def gl_reference(foc: FocDigital, signal) -> np.ndarray:
    """Sampled-time evaluation of the ideal fractional controller by GL sums."""
    e = np.asarray(signal, dtype=float)
    p = foc.params
    out = p.K * e
    if p.Ti != 0:
        out = out + p.Ti * gl_apply(e, GlSpec(-p.lam, foc.T))
    if p.Td != 0:
        out = out + p.Td * gl_apply(e, GlSpec(p.delta, foc.T))
    return out


class Metrics(NamedTuple):
    rms_abs: float
    rms_rel: float
    max_abs: float


def metrics(a, b, skip: int = DEFAULT_SKIP) -> Metrics:
    """Deviation of ``b`` from reference ``a`` over samples ``skip:``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"lengths differ: {len(a)} vs {len(b)}")
    if not 0 <= skip < len(a):
        raise InvalidParams(f"skip = {skip} must lie in [0, {len(a)})")
    d = b[skip:] - a[skip:]
    rms_abs = math.sqrt(np.mean(d**2))
    ref = math.sqrt(np.mean(a[skip:] ** 2))
    rms_rel = rms_abs / ref if ref > 0 else (0.0 if rms_abs == 0 else math.inf)
    return Metrics(rms_abs, rms_rel, float(np.max(np.abs(d))))


def fit_sinusoid(y, frequency: float, T: float, start: int = 0, stop: int | None = None):
    """Least-squares fit ``A sin(w t + phi) + c``; returns ``(A, phi_degrees, c)``."""
    y = np.asarray(y, dtype=float)
    k = np.arange(len(y))[start:stop]
    w = 2 * np.pi * frequency * T
    M = np.column_stack([np.sin(w * k), np.cos(w * k), np.ones(len(k))])
    (s, c, off), *_ = np.linalg.lstsq(M, y[start:stop], rcond=None)
    return math.hypot(s, c), math.degrees(math.atan2(c, s)), off
