"""Command-line front end: ``focdigital {design,export,simulate,analyze}``.

Exit codes:
    0  success
    1  usage error or unreadable config file
    2  invalid parameters (orders, ranges, unknown config keys)
    3  discretization failure (pivot breakdown, insufficient depth, unstable branch)
    4  Nyquist violation in the requested test signal
    5  any other controller error
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .controller import (FORMATS, FocParams, combine_tf, design_foc, export_coeffs,
                         read_keyvalue)
from .errors import DiscretizationError, FocError, InvalidParams, NyquistViolation
from .ratpoly import frequency_response, stability_report
from .runtime import QuantizationConfig
from .simulate import SignalSpec, generate_signal, gl_reference, metrics, run_open_loop

EXIT_OK, EXIT_USAGE, EXIT_PARAMS, EXIT_DISCRETIZE, EXIT_NYQUIST, EXIT_OTHER = range(6)

PARAM_KEYS = {"K", "Ti", "Td", "lambda", "delta", "gf", "T", "p", "q"}
QUANT_KEYS = {"adc_bits": int, "dac_bits": int, "v_min": float, "v_max": float}
OUTPUT_KEYS = {"out", "format"}


class UsageError(Exception):
    pass


@dataclass
class DesignConfig:
    params: FocParams
    quant: QuantizationConfig = field(default_factory=QuantizationConfig)
    out: str | None = None
    format: str = "flat-table"


def load_config(path: str | None, overrides: dict[str, str]) -> DesignConfig:
    """Merge a key-value config file with command-line overrides.

    Coefficient files written by ``design`` are valid configs: their
    ``[branch.*]`` sections are skipped.
    """
    values: dict[str, str] = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config file {path!r}: {exc.strerror}") from None
        cp = read_keyvalue(text)
        for section in cp.sections():
            if section.startswith("branch."):
                continue
            if section not in ("params", "quantization", "output"):
                raise InvalidParams(f"unknown config section [{section}]")
            values.update(cp[section])
    values.update(overrides)
    unknown = set(values) - PARAM_KEYS - set(QUANT_KEYS) - OUTPUT_KEYS
    if unknown:
        raise InvalidParams(f"unknown config key(s): {', '.join(sorted(unknown))}")
    params = FocParams.from_mapping({k: v for k, v in values.items() if k in PARAM_KEYS})
    try:
        quant = QuantizationConfig(**{k: QUANT_KEYS[k](v) for k, v in values.items() if k in QUANT_KEYS})
    except ValueError as exc:
        raise InvalidParams(str(exc)) from None
    fmt = values.get("format", "flat-table")
    if fmt not in FORMATS:
        raise InvalidParams(f"unknown export format {fmt!r}")
    return DesignConfig(params, quant, values.get("out"), fmt)


def _overrides(args) -> dict[str, str]:
    out = {}
    for flag, key in (("T", "T"), ("gf", "gf"), ("K", "K"), ("Ti", "Ti"), ("Td", "Td"),
                      ("lam", "lambda"), ("delta", "delta"), ("out", "out"),
                      ("format", "format")):
        val = getattr(args, flag, None)
        if val is not None:
            out[key] = str(val)
    if args.pq is not None:
        out["p"] = out["q"] = str(args.pq)
    return out


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_design(cfg: DesignConfig, args) -> int:
    foc = design_foc(cfg.params)
    _emit(export_coeffs(foc, cfg.format), cfg.out)
    lines = []
    for br in foc.branches:
        lines.append(f"[branch {br.name}]")
        lines.append(stability_report(br.tf).summary())
    if foc.params.gf.warning:
        lines.append(f"warning: {foc.params.gf.warning}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text if cfg.out else "".join(f"# {ln}\n" for ln in text.splitlines()))
    return EXIT_OK


def cmd_export(cfg: DesignConfig, args) -> int:
    _emit(export_coeffs(design_foc(cfg.params), cfg.format), cfg.out)
    return EXIT_OK


def cmd_simulate(cfg: DesignConfig, args) -> int:
    foc = design_foc(cfg.params)
    T = cfg.params.gf.T
    if args.signal == "file":
        if not args.input:
            raise UsageError("--signal file requires --input PATH")
        samples = np.loadtxt(args.input, delimiter=",", ndmin=2)[:, 0]
        spec = SignalSpec("custom", T=T, samples=tuple(samples))
    else:
        spec = SignalSpec(args.signal, args.amp, args.freq, args.duration, T)
    signal = generate_signal(spec)
    res = run_open_loop(foc, signal, cfg.quant if args.quantized else None)
    summary = None
    if args.oracle == "gl":
        ref = gl_reference(foc, signal)
        res = res.with_column("gl", ref)
        skip = min(args.skip, len(signal) - 1)
        m = metrics(ref, res["out"], skip)
        summary = (f"metrics vs gl (skip={skip}): rms_abs={m.rms_abs:.6g} "
                   f"rms_rel={m.rms_rel:.6g} max_abs={m.max_abs:.6g}\n")
    _emit(res.to_csv(plot_data=args.plot_data), cfg.out)
    if summary:
        if cfg.out:
            report = args.report or f"{cfg.out}.report"
            Path(report).write_text(summary)
        else:
            sys.stdout.write("# " + summary)
    return EXIT_OK


def cmd_analyze(cfg: DesignConfig, args) -> int:
    foc = design_foc(cfg.params)
    T = cfg.params.gf.T
    nyq = 0.5 / T
    if args.points < 1:
        raise UsageError("--points must be >= 1")
    if args.points == 1:
        freqs = np.array([nyq])
    else:
        fmin = args.fmin if args.fmin is not None else nyq / 1000
        freqs = np.logspace(np.log10(fmin), np.log10(nyq), args.points)
    tf = combine_tf(foc)
    rep = stability_report(tf)
    mag, phase = frequency_response(tf, freqs, T)
    lines = [rep.summary()]
    verdict = "stable" if rep.stable else "unstable"
    verdict += " & minimum phase" if rep.minimum_phase else " & non-minimum phase"
    lines.append(f"verdict: {verdict}")
    if foc.params.gf.warning:
        lines.append(f"warning: {foc.params.gf.warning}")
    lines.append("freq_hz,mag_db,phase_deg")
    lines += [f"{f:.6g},{m:.6g},{p:.6g}" for f, m, p in zip(freqs, mag, phase)]
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


COMMANDS = {"design": cmd_design, "export": cmd_export, "simulate": cmd_simulate,
            "analyze": cmd_analyze}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", metavar="PATH")
    shared.add_argument("--T", type=float, metavar="SECONDS")
    shared.add_argument("--gf", choices=["euler", "tustin", "al-alaoui"])
    shared.add_argument("--pq", type=int, metavar="N")
    shared.add_argument("--K", type=float)
    shared.add_argument("--Ti", type=float)
    shared.add_argument("--Td", type=float)
    shared.add_argument("--lambda", dest="lam", type=float)
    shared.add_argument("--delta", type=float)
    shared.add_argument("--out", metavar="PATH")

    parser = _Parser(prog="focdigital", description="Digital fractional-order PI^lambda D^delta controllers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("design", "export"):
        p = sub.add_parser(name, parents=[shared])
        p.add_argument("--format", choices=list(FORMATS))
    p = sub.add_parser("simulate", parents=[shared])
    p.add_argument("--signal", choices=["step", "square", "sine", "file"], default="step")
    p.add_argument("--input", metavar="PATH", help="samples for --signal file (first CSV column)")
    p.add_argument("--freq", type=float, default=100.0, metavar="HZ")
    p.add_argument("--amp", type=float, default=1.0, metavar="VOLTS")
    p.add_argument("--duration", type=float, default=0.1, metavar="S")
    p.add_argument("--quantized", action="store_true")
    p.add_argument("--oracle", choices=["gl"])
    p.add_argument("--skip", type=int, default=5)
    p.add_argument("--report", metavar="PATH")
    p.add_argument("--plot-data", action="store_true", help="prefix CSV with a provenance header")
    p = sub.add_parser("analyze", parents=[shared])
    p.add_argument("--points", type=int, default=60)
    p.add_argument("--fmin", type=float, metavar="HZ")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"focdigital: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NyquistViolation as exc:
        print(f"focdigital: Nyquist violation: {exc}", file=sys.stderr)
        return EXIT_NYQUIST
    except InvalidParams as exc:
        print(f"focdigital: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except DiscretizationError as exc:
        print(f"focdigital: discretization failed: {exc}", file=sys.stderr)
        return EXIT_DISCRETIZE
    except FocError as exc:
        print(f"focdigital: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
