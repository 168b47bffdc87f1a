"""Polynomials and rational transfer functions in the delay variable z^-1.

Coefficients are stored in ascending powers of ``x = z^-1``: ``coeffs[k]``
multiplies ``z^-k``. Roots, poles and zeros are always reported in ``z``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateInput, PoleAtEvaluationPoint

TRIM_TOL = 1e-14
STAB_EPS = 1e-9
POLE_TOL = 1e-12


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in np.atleast_1d(np.asarray(self.coeffs, dtype=float)))
        if not c:
            raise DegenerateInput("polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def constant(cls, value: float) -> Polynomial:
        return cls((value,))

    def __len__(self):
        return len(self.coeffs)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def trim(self) -> Polynomial:
        c = list(self.coeffs)
        while len(c) > 1 and abs(c[-1]) < TRIM_TOL:
            c.pop()
        return Polynomial(tuple(c))

    def degree(self) -> int:
        return len(self.trim().coeffs) - 1

    def is_zero(self) -> bool:
        return all(abs(v) < TRIM_TOL for v in self.coeffs)

    def scale(self, factor: float) -> Polynomial:
        return Polynomial(tuple(factor * v for v in self.coeffs))

    def __add__(self, other: Polynomial) -> Polynomial:
        n = max(len(self), len(other))
        out = np.zeros(n)
        out[: len(self)] += self.coeffs
        out[: len(other)] += other.coeffs
        return Polynomial(tuple(out))

    def __mul__(self, other: Polynomial) -> Polynomial:
        return poly_mul(self, other)

    def __call__(self, point: complex) -> complex:
        """Evaluate at ``z = point`` (i.e. substitute ``x = 1/point``)."""
        x = 1.0 / point
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def z_form(self, point: complex) -> complex:
        """``z^n p(z^-1)`` evaluated at ``point``; finite at ``z = 0``."""
        acc = 0j
        for c in self.coeffs:
            acc = acc * point + c
        return acc


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return Polynomial(tuple(np.convolve(a.coeffs, b.coeffs)))


@dataclass(frozen=True)
class RationalTF:
    """``gain * num(z^-1) / den(z^-1)``."""

    num: Polynomial
    den: Polynomial
    gain: float = 1.0

    def __post_init__(self):
        if not isinstance(self.num, Polynomial):
            object.__setattr__(self, "num", Polynomial(self.num))
        if not isinstance(self.den, Polynomial):
            object.__setattr__(self, "den", Polynomial(self.den))
        object.__setattr__(self, "gain", float(self.gain))
        if self.den.coeffs[0] == 0.0:
            raise DegenerateInput("denominator must have a nonzero z^0 coefficient")

    @classmethod
    def constant(cls, value: float) -> RationalTF:
        return cls(Polynomial((1.0,)), Polynomial((1.0,)), value)

    def monic(self) -> RationalTF:
        """Unique normal form: ``den[0] == 1``, first nonzero ``num`` coefficient 1.

        All remaining scale lives in ``gain``.
        """
        num = self.num.trim()
        den = self.den.trim()
        d0 = den.coeffs[0]
        nz = [c for c in num.coeffs if abs(c) >= TRIM_TOL]
        den_m = _divide(den, d0)
        if not nz:
            return RationalTF(Polynomial((0.0,)), den_m, 0.0)
        n0 = nz[0]
        return RationalTF(_divide(num, n0), den_m, self.gain * n0 / d0)

    def effective_num(self) -> np.ndarray:
        """Numerator with the gain folded in."""
        return self.gain * self.num.as_array()

    def __call__(self, point: complex) -> complex:
        return rtf_eval(self, point)


def _divide(p: Polynomial, by: float) -> Polynomial:
    return Polynomial(tuple(1.0 if c == by else c / by for c in p.coeffs))


def rtf_eval(tf: RationalTF, point: complex) -> complex:
    point = complex(point)
    if point == 0:
        # multiply through by z^m so the ratio stays finite
        m = max(len(tf.num), len(tf.den)) - 1
        num = Polynomial(tf.num.coeffs + (0.0,) * (m + 1 - len(tf.num)))
        den = Polynomial(tf.den.coeffs + (0.0,) * (m + 1 - len(tf.den)))
        n_val, d_val = num.z_form(0), den.z_form(0)
    else:
        n_val, d_val = tf.num(point), tf.den(point)
    if abs(d_val) < POLE_TOL:
        raise PoleAtEvaluationPoint(f"denominator vanishes at z = {point}")
    return tf.gain * n_val / d_val


def rtf_maclaurin(tf: RationalTF, n: int) -> np.ndarray:
    """First ``n + 1`` power-series coefficients in ``z^-1`` (long division)."""
    num = tf.num.coeffs
    den = tf.den.coeffs
    d0 = den[0]
    out = np.zeros(n + 1)
    for k in range(n + 1):
        acc = num[k] if k < len(num) else 0.0
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out[k] = acc / d0
    return tf.gain * out


def _residual(c: np.ndarray, r: complex) -> float:
    # evaluate in whichever of z, 1/z lies in the closed unit disc
    if abs(r) <= 1:
        return abs(np.polyval(c, r)) / np.sum(np.abs(c))
    return abs(np.polyval(c[::-1], 1 / r)) / np.sum(np.abs(c))


def root_residual(p: Polynomial, r: complex) -> float:
    """Scale-aware residual ``|p(r)| / ||p||_1`` used by the root-finder contract."""
    return _residual(np.array(p.trim().coeffs), complex(r))


def roots(p: Polynomial) -> np.ndarray:
    """Roots in ``z`` of a polynomial stored in ``z^-1`` form.

    Companion-matrix eigenvalues followed by a Newton polish. Nonzero
    constants have no roots.
    """
    p = p.trim()
    if p.is_zero():
        raise DegenerateInput("zero polynomial has no well-defined roots")
    # ascending in z^-1 is descending in z
    c = np.array(p.coeffs)
    if len(c) == 1:
        return np.zeros(0, dtype=complex)
    found = np.roots(c).astype(complex)
    dc = np.polyder(c)
    for i, r in enumerate(found):
        for _ in range(3):
            if _residual(c, r) < 1e-15:
                break
            d = np.polyval(dc, r)
            if d == 0:
                break
            step = np.polyval(c, r) / d
            cand = r - step
            if _residual(c, cand) >= _residual(c, r):
                break
            r = cand
        found[i] = r
    return found


@dataclass(frozen=True)
class StabilityReport:
    poles: tuple[complex, ...]
    zeros: tuple[complex, ...]
    stable: bool
    minimum_phase: bool
    margin: float = field(default=1.0)

    def summary(self) -> str:
        def fmt(vals):
            return ", ".join(f"{v.real:.6g}{v.imag:+.6g}j" for v in vals) or "none"

        return "\n".join([
            f"poles: {fmt(self.poles)}",
            f"zeros: {fmt(self.zeros)}",
            f"stable: {str(self.stable).lower()}",
            f"minimum_phase: {str(self.minimum_phase).lower()}",
            f"margin: {self.margin:.6g}",
        ])


def stability_report(tf: RationalTF) -> StabilityReport:
    poles = roots(tf.den)
    zeros = roots(tf.num)
    limit = 1.0 - STAB_EPS
    pmax = float(np.max(np.abs(poles))) if len(poles) else 0.0
    return StabilityReport(
        poles=tuple(complex(v) for v in poles),
        zeros=tuple(complex(v) for v in zeros),
        stable=bool(np.all(np.abs(poles) < limit)),
        minimum_phase=bool(np.all(np.abs(zeros) < limit)),
        margin=1.0 - pmax,
    )


def frequency_response(tf: RationalTF, freqs, T: float) -> tuple[np.ndarray, np.ndarray]:
    """Magnitude (dB) and unwrapped phase (degrees) on the unit circle."""
    h = np.array([rtf_eval(tf, np.exp(2j * np.pi * f * T)) for f in np.atleast_1d(freqs)])
    mag_db = 20 * np.log10(np.abs(h))
    phase = np.degrees(np.unwrap(np.angle(h)))
    return mag_db, phase


def as_polynomial(coeffs: Sequence[float] | Polynomial) -> Polynomial:
    return coeffs if isinstance(coeffs, Polynomial) else Polynomial(tuple(coeffs))
