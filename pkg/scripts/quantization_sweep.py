"""RMS output deviation caused by ADC resolution on the 100 Hz sine experiment."""
import argparse
import math

import numpy as np

from focdigital import FocParams, GeneratingFunction, design_foc
from focdigital.runtime import QuantizationConfig
from focdigital.simulate import SignalSpec, generate_signal, run_open_loop


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bits", type=int, nargs="+", default=[8, 10, 12, 16])
    ap.add_argument("--v-min", type=float, default=-2.5)
    ap.add_argument("--v-max", type=float, default=2.5)
    args = ap.parse_args(argv)
    foc = design_foc(FocParams(Ti=1.4374, lam=0.5, gf=GeneratingFunction("al-alaoui", 0.001)))
    x = generate_signal(SignalSpec("sine", 1.0, 100.0, 1.001, 0.001))
    ideal = run_open_loop(foc, x)["out"]
    print("adc_bits,rms_dev")
    for b in args.bits:
        q = QuantizationConfig(adc_bits=b, v_min=args.v_min, v_max=args.v_max)
        y = run_open_loop(foc, x, q)["out"]
        print(f"{b},{math.sqrt(np.mean((y - ideal) ** 2)):.4e}")


if __name__ == "__main__":
    main()
