"""Design the 1.4374/s^0.5 controller at T = 1 ms and compare with the published [3/3] filter."""
import argparse

from focdigital import FocParams, GeneratingFunction, design_foc, stability_report
from focdigital.controller import export_coeffs
from focdigital.ratpoly import Polynomial, RationalTF

REFERENCE = RationalTF(Polynomial((49, -49, 7, 1)), Polynomial((1657, -2603, 1048, -63)), 1.4374)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=0.001)
    ap.add_argument("--pq", type=int, default=3)
    args = ap.parse_args(argv)
    foc = design_foc(FocParams(Ti=1.4374, lam=0.5, gf=GeneratingFunction("al-alaoui", args.T),
                               p=args.pq, q=args.pq))
    tf = foc.branch("I").tf
    got, ref = tf.monic(), REFERENCE.monic()
    print("designed  num", got.num.coeffs, "den", got.den.coeffs, "gain", got.gain)
    if args.pq == 3:
        print("published num", ref.num.coeffs, "den", ref.den.coeffs, "gain", ref.gain)
    print(stability_report(tf).summary())
    print(export_coeffs(foc))


if __name__ == "__main__":
    main()
