"""Digital fractional-order PI^lambda D^delta controllers by continued-fraction discretization."""
from .controller import (DiffEqCoeffs, FocDigital, FocParams, combine_tf, design_foc,
                         export_coeffs, import_coeffs, to_difference_equation)
from .discretize import (CfSequence, GeneratingFunction, GfKind, OperatorSpec, cfe_from_series,
                         convergent, discretize_operator, kernel_series)
from .gl_oracle import GlSpec, gl_apply, gl_weights
from .ratpoly import (Polynomial, RationalTF, StabilityReport, poly_mul, roots, rtf_eval,
                      rtf_maclaurin, stability_report)
from .runtime import ControllerRuntime, FilterState, QuantizationConfig
from .simulate import (Plant, SignalSpec, SimResult, generate_signal, metrics, run_closed_loop,
                       run_open_loop)

__version__ = "0.1.0"
