"""Continued-fraction discretization of fractional operators D^r, 0 < |r| < 1.

A generating function maps ``s`` to ``gain_base * kernel(z^-1)``. The kernel
raised to ``r`` is expanded in a power series, turned into a C-fraction
``c0 + c1 x / (1 + c2 x / (1 + ...))``, and truncated. The depth-2p
convergent is the [p/p] Pade approximant of the series, so the resulting
IIR section matches the operator's impulse response in its first 2p + 1
samples.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InsufficientDepth, InvalidOrder, InvalidParams, PivotBreakdown
from .ratpoly import Polynomial, RationalTF

PIVOT_TOL = 1e-13
T_RANGE = (0.001, 120.0)


class GfKind(str, enum.Enum):
    EULER = "euler"
    TUSTIN = "tustin"
    AL_ALAOUI = "al-alaoui"

    @classmethod
    def parse(cls, text: str | GfKind) -> GfKind:
        if isinstance(text, GfKind):
            return text
        key = str(text).strip().lower().replace("_", "-")
        aliases = {"alalaoui": "al-alaoui", "aa": "al-alaoui", "backward-euler": "euler"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise InvalidParams(
                f"unknown generating function {text!r}; expected euler, tustin or al-alaoui"
            ) from None


# (gain_base * T, pole coefficient c in (1 - x) / (1 + c x))
_KERNELS = {
    GfKind.EULER: (1.0, 0.0),
    GfKind.TUSTIN: (2.0, 1.0),
    GfKind.AL_ALAOUI: (8.0 / 7.0, 1.0 / 7.0),
}


@dataclass(frozen=True)
class GeneratingFunction:
    kind: GfKind = GfKind.AL_ALAOUI
    T: float = 0.001

    def __post_init__(self):
        object.__setattr__(self, "kind", GfKind.parse(self.kind))
        T = float(self.T)
        if not (math.isfinite(T) and T > 0):
            raise InvalidParams(f"sample period T must be positive and finite, got {self.T!r}")
        object.__setattr__(self, "T", T)

    @property
    def gain_base(self) -> float:
        return _KERNELS[self.kind][0] / self.T

    @property
    def pole_coeff(self) -> float:
        return _KERNELS[self.kind][1]

    @property
    def warning(self) -> str | None:
        lo, hi = T_RANGE
        if lo <= self.T <= hi:
            return None
        return f"sample period T = {self.T:g} s lies outside the designed range [{lo:g}, {hi:g}] s"


@dataclass(frozen=True)
class OperatorSpec:
    gf: GeneratingFunction
    r: float
    p: int = 3
    q: int = 3

    def __post_init__(self):
        check_order(self.r)
        if self.p < 1 or self.q < 1:
            raise InvalidParams(f"degrees must be >= 1, got p={self.p}, q={self.q}")
        if self.p != self.q:
            raise InvalidParams(f"only p == q is supported, got p={self.p}, q={self.q}")


@dataclass(frozen=True)
class CfSequence:
    quotients: tuple[float, ...]

    def __len__(self):
        return len(self.quotients)


def check_order(r: float, allow_zero: bool = False) -> None:
    if not math.isfinite(r) or abs(r) >= 1 or (r == 0 and not allow_zero):
        bound = "|r| < 1" if allow_zero else "0 < |r| < 1"
        raise InvalidOrder(f"fractional order r = {r!r} violates {bound}")


def binomial_series(r: float, c: float, n: int) -> np.ndarray:
    """Coefficients of ``(1 + c x)^r`` through ``x^n``."""
    out = np.empty(n + 1)
    out[0] = 1.0
    for k in range(1, n + 1):
        out[k] = out[k - 1] * (r - k + 1) / k * c
    return out


def kernel_series(gf: GeneratingFunction, r: float, n: int) -> np.ndarray:
    """Maclaurin coefficients of ``kernel(x)^r`` through ``x^n``."""
    check_order(r, allow_zero=True)
    lead = binomial_series(r, -1.0, n)
    c = gf.pole_coeff
    if c == 0.0:
        return lead
    return np.convolve(lead, binomial_series(-r, c, n))[: n + 1]


def _reciprocal(g: list[Fraction]) -> list[Fraction]:
    h = [1 / g[0]]
    for k in range(1, len(g)):
        h.append(-sum(g[i] * h[k - i] for i in range(1, k + 1)) / g[0])
    return h


def cfe_from_series(series, depth: int) -> CfSequence:
    """Partial quotients ``c0..c_depth`` of the C-fraction reproducing ``series``.

    The reciprocal-and-subtract recursion runs in exact rational arithmetic on
    the given float coefficients: a small pivot makes the next quotients large
    and in floating point costs about as many digits as it magnifies.
    A remainder that vanishes identically terminates the fraction; the
    remaining quotients are zero.
    """
    s = np.asarray(series, dtype=float)
    if len(s) == 0 or s[0] == 0.0:
        raise PivotBreakdown("series must start with a nonzero coefficient")
    if depth > len(s) - 1:
        raise InsufficientDepth(f"depth {depth} needs at least {depth + 1} series terms, got {len(s)}")
    quotients = [float(s[0])]
    g = [Fraction(float(v)) for v in s[1:]]
    for k in range(1, depth + 1):
        if max(abs(v) for v in g) < PIVOT_TOL:
            quotients.extend([0.0] * (depth + 1 - k))
            break
        if abs(g[0]) < PIVOT_TOL:
            raise PivotBreakdown(f"pivot {float(g[0]):.3g} at quotient {k} is below {PIVOT_TOL:g}")
        quotients.append(float(g[0]))
        g = [g[0] * v for v in _reciprocal(g)][1:]
    return CfSequence(tuple(quotients))


def convergent(cf: CfSequence, p: int, q: int) -> RationalTF:
    """Fold quotients ``c0..c_{2p}`` bottom-up into a unit-gain RationalTF."""
    if p != q:
        raise InvalidParams(f"only p == q is supported, got p={p}, q={q}")
    if len(cf) < 2 * p + 1:
        raise InsufficientDepth(f"({p},{q}) convergent needs {2 * p + 1} quotients, got {len(cf)}")
    c = cf.quotients
    num = np.zeros(1)
    den = np.ones(1)
    # tail value N/D; each level maps N/D -> c_k x D / (D + N)
    for k in range(2 * p, 0, -1):
        new_num = np.concatenate(([0.0], c[k] * den))
        new_den = np.zeros(max(len(den), len(num)))
        new_den[: len(den)] += den
        new_den[: len(num)] += num
        num, den = new_num, new_den
    total = np.zeros(max(len(den), len(num)))
    total[: len(den)] += c[0] * den
    total[: len(num)] += num
    return RationalTF(Polynomial(tuple(total)).trim(), Polynomial(tuple(den)).trim(), 1.0)


def discretize_operator(spec: OperatorSpec) -> RationalTF:
    """Rational approximation of ``D^r`` with gain ``gain_base**r``."""
    n = spec.p + spec.q + 1
    series = kernel_series(spec.gf, spec.r, n)
    cf = cfe_from_series(series, spec.p + spec.q)
    unit = convergent(cf, spec.p, spec.q)
    return RationalTF(unit.num, unit.den, spec.gf.gain_base ** spec.r)
