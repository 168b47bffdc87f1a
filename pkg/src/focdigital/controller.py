"""Digital PI^lambda D^delta controller: design, analysis view, and coefficient export.

The controller is realized as parallel branches

    C(z) = K + Ti * I(z) + Td * D(z)

where I and D are continued-fraction approximations of the fractional
integral of order lambda and derivative of order delta.
"""
from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .discretize import GeneratingFunction, OperatorSpec, discretize_operator
from .errors import InvalidParams, UnstableRealization
from .ratpoly import Polynomial, RationalTF, poly_mul, stability_report

FORMATS = ("flat-table", "embedded-header")


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class FocParams:
    K: float = 0.0
    Ti: float = 0.0
    Td: float = 0.0
    lam: float = 0.5
    delta: float = 0.5
    gf: GeneratingFunction = field(default_factory=GeneratingFunction)
    p: int = 3
    q: int = 3

    def validate(self) -> None:
        for name in ("K", "Ti", "Td", "lam", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams(f"{name} must be finite")
        if self.Ti != 0 and not 0 < self.lam < 1:
            raise InvalidParams(f"lambda = {self.lam!r} outside the allowed range 0 < lambda < 1")
        if self.Td != 0 and not 0 < self.delta < 1:
            raise InvalidParams(f"delta = {self.delta!r} outside the allowed range 0 < delta < 1")
        if self.K == 0 and self.Ti == 0 and self.Td == 0:
            raise InvalidParams("at least one of K, Ti, Td must be nonzero")
        if self.p < 1 or self.p != self.q:
            raise InvalidParams(f"degrees must satisfy p == q >= 1, got p={self.p}, q={self.q}")

    def provenance(self) -> dict[str, str]:
        return {
            "K": fmt17(self.K),
            "Ti": fmt17(self.Ti),
            "Td": fmt17(self.Td),
            "lambda": fmt17(self.lam),
            "delta": fmt17(self.delta),
            "gf": self.gf.kind.value,
            "T": fmt17(self.gf.T),
            "p": str(self.p),
            "q": str(self.q),
        }

    @classmethod
    def from_mapping(cls, values: dict[str, str]) -> FocParams:
        """Inverse of :meth:`provenance`; unknown keys raise InvalidParams."""
        known = {"K", "Ti", "Td", "lambda", "delta", "gf", "T", "p", "q"}
        extra = set(values) - known
        if extra:
            raise InvalidParams(f"unknown parameter key(s): {', '.join(sorted(extra))}")
        try:
            gf = GeneratingFunction(values.get("gf", "al-alaoui"), float(values.get("T", 0.001)))
            return cls(
                K=float(values.get("K", 0)),
                Ti=float(values.get("Ti", 0)),
                Td=float(values.get("Td", 0)),
                lam=float(values.get("lambda", 0.5)),
                delta=float(values.get("delta", 0.5)),
                gf=gf,
                p=int(values.get("p", 3)),
                q=int(values.get("q", 3)),
            )
        except ValueError as exc:
            if isinstance(exc, InvalidParams):
                raise
            raise InvalidParams(str(exc)) from None


@dataclass(frozen=True)
class Branch:
    name: str  # "P", "I" or "D"
    tf: RationalTF


@dataclass(frozen=True)
class FocDigital:
    branches: tuple[Branch, ...]
    params: FocParams

    def branch(self, name: str) -> Branch | None:
        return next((b for b in self.branches if b.name == name), None)

    @property
    def T(self) -> float:
        return self.params.gf.T


@dataclass(frozen=True)
class DiffEqCoeffs:
    b: tuple[float, ...]
    a: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        if not self.a or self.a[0] != 1.0:
            raise InvalidParams("difference equation requires a[0] == 1")

    def to_tf(self) -> RationalTF:
        return RationalTF(Polynomial(self.b), Polynomial(self.a), 1.0)


def design_foc(params: FocParams) -> FocDigital:
    params.validate()
    branches = []
    if params.K != 0:
        branches.append(Branch("P", RationalTF.constant(params.K)))
    for name, const, order in (("I", params.Ti, -params.lam), ("D", params.Td, params.delta)):
        if const == 0:
            continue
        op = discretize_operator(OperatorSpec(params.gf, order, params.p, params.q))
        tf = RationalTF(op.num, op.den, const * op.gain)
        if not stability_report(tf).stable:
            raise UnstableRealization(f"{name} branch approximation is not stable")
        branches.append(Branch(name, tf))
    return FocDigital(tuple(branches), params)


def combine_tf(foc: FocDigital) -> RationalTF:
    """Single transfer function over the product of branch denominators."""
    den = Polynomial((1.0,))
    for br in foc.branches:
        den = poly_mul(den, br.tf.den)
    num = Polynomial((0.0,))
    for i, br in enumerate(foc.branches):
        term = Polynomial(tuple(br.tf.effective_num()))
        for j, other in enumerate(foc.branches):
            if j != i:
                term = poly_mul(term, other.tf.den)
        num = num + term
    return RationalTF(num.trim(), den.trim(), 1.0).monic()


def to_difference_equation(tf: RationalTF) -> DiffEqCoeffs:
    d0 = tf.den.coeffs[0]
    a = tf.den.as_array() / d0
    a[0] = 1.0
    b = tf.gain * tf.num.as_array() / d0
    return DiffEqCoeffs(tuple(b), tuple(a))


def branch_coeffs(foc: FocDigital) -> list[tuple[str, DiffEqCoeffs]]:
    return [(br.name, to_difference_equation(br.tf)) for br in foc.branches]


def export_coeffs(foc: FocDigital, format: str = "flat-table") -> str:
    if format == "flat-table":
        return _export_flat(foc)
    if format == "embedded-header":
        return _export_header(foc)
    raise InvalidParams(f"unknown export format {format!r}; expected one of {FORMATS}")


def _export_flat(foc: FocDigital) -> str:
    lines = ["# focdigital fractional-order controller coefficients"]
    warning = foc.params.gf.warning
    if warning:
        lines.append(f"# warning: {warning}")
    lines.append("[params]")
    lines += [f"{k} = {v}" for k, v in foc.params.provenance().items()]
    for name, c in branch_coeffs(foc):
        lines += [
            "",
            f"[branch.{name}]",
            "b = " + ", ".join(fmt17(v) for v in c.b),
            "a = " + ", ".join(fmt17(v) for v in c.a),
        ]
    return "\n".join(lines) + "\n"


def _export_header(foc: FocDigital) -> str:
    prov = foc.params.provenance()
    lines = ["/* focdigital fractional-order controller coefficients"]
    warning = foc.params.gf.warning
    if warning:
        lines.append(f" * warning: {warning}")
    lines += [f" * {k} = {v}" for k, v in prov.items()]
    lines += [
        " */",
        "#ifndef FOC_COEFFS_H",
        "#define FOC_COEFFS_H",
        "",
        f"#define FOC_T {prov['T']}",
        f"#define FOC_P {prov['p']}",
        f"#define FOC_Q {prov['q']}",
        f"#define FOC_NBRANCH {len(foc.branches)}",
    ]
    for name, c in branch_coeffs(foc):
        for key, vals in (("b", c.b), ("a", c.a)):
            body = ", ".join(fmt17(v) for v in vals)
            lines.append(f"static const double foc_{name}_{key}[{len(vals)}] = {{{body}}};")
    lines += ["", "#endif /* FOC_COEFFS_H */"]
    return "\n".join(lines) + "\n"


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.replace("\n", " ").split(",") if tok.strip())


_ARRAY_RE = re.compile(r"foc_(\w+?)_([ab])\[\d+\]\s*=\s*\{([^}]*)\}")
_PROV_RE = re.compile(r"^\s*\*\s*(\w+)\s*=\s*(\S+)\s*$", re.M)


def import_coeffs(text: str) -> tuple[FocParams, list[tuple[str, DiffEqCoeffs]]]:
    """Parse either export format back into parameters and branch coefficients."""
    if text.lstrip().startswith("/*"):
        prov = {k: v for k, v in _PROV_RE.findall(text) if k != "warning"}
        arrays: dict[str, dict[str, tuple[float, ...]]] = {}
        for name, key, body in _ARRAY_RE.findall(text):
            arrays.setdefault(name, {})[key] = _floats(body)
        branches = [(name, DiffEqCoeffs(d["b"], d["a"])) for name, d in arrays.items()]
        return FocParams.from_mapping(prov), branches
    cp = read_keyvalue(text)
    params = FocParams.from_mapping(dict(cp["params"]))
    branches = []
    for section in cp.sections():
        if section.startswith("branch."):
            sec = cp[section]
            branches.append((section[len("branch."):], DiffEqCoeffs(_floats(sec["b"]), _floats(sec["a"]))))
    return params, branches


def read_keyvalue(text: str) -> configparser.ConfigParser:
    """``key = value`` text with optional ``[section]`` headers.

    Keys before the first header land in ``[params]``.
    """
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"),
                                   inline_comment_prefixes=("#",))
    cp.optionxform = str
    stripped = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith(("#", ";"))]
    if not stripped or not stripped[0].lstrip().startswith("["):
        text = "[params]\n" + text
    cp.read_string(text)
    if not cp.has_section("params"):
        cp.add_section("params")
    return cp

