"""Step and 100 Hz sine responses of the half-order integrator, written as CSV with GL references."""
import argparse
import math
from pathlib import Path

import numpy as np

from focdigital import FocParams, GeneratingFunction, design_foc
from focdigital.simulate import (SignalSpec, fit_sinusoid, generate_signal, gl_reference, metrics,
                                 run_open_loop)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--pq", type=int, default=3)
    args = ap.parse_args(argv)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    T = 0.001
    foc = design_foc(FocParams(Ti=1.4374, lam=0.5, gf=GeneratingFunction("al-alaoui", T), p=args.pq, q=args.pq))

    step = np.ones(1000)
    res = run_open_loop(foc, step)
    res = res.with_column("gl", gl_reference(foc, step))
    res = res.with_column("sqrt_t", 1.4374 / math.gamma(1.5) * np.sqrt(res["t"]))
    (out / "step.csv").write_text(res.to_csv(plot_data=True))
    rel = np.abs(res["out"][5:51] - res["sqrt_t"][5:51]) / res["sqrt_t"][5:51]
    print(f"step: max rel err vs sqrt(t) on n=5..50 {rel.max():.3%}, "
          f"GL rms_rel {metrics(res['gl'][:51], res['out'][:51], 5).rms_rel:.3%}, "
          f"value at n=999 {res['out'][-1]:.5f}")

    sine = generate_signal(SignalSpec("sine", 1.0, 100.0, 1.001, T))
    res = run_open_loop(foc, sine).with_column("gl", gl_reference(foc, sine))
    (out / "sine.csv").write_text(res.to_csv(plot_data=True))
    amp, phase, _ = fit_sinusoid(res["out"], 100.0, T, 200, 1001)
    print(f"sine: amplitude {amp:.5f} V, phase {phase:.2f} deg, "
          f"GL rms_rel {metrics(res['gl'], res['out'], 100).rms_rel:.3%}")


if __name__ == "__main__":
    main()
