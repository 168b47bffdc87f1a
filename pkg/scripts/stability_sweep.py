"""Pole/zero margins of Al-Alaoui [p/p] operators over a grid of orders, depths and periods."""
import argparse
import itertools

from focdigital.discretize import GeneratingFunction, OperatorSpec, discretize_operator
from focdigital.ratpoly import stability_report


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gf", default="al-alaoui")
    args = ap.parse_args(argv)
    orders = [0.1, 0.3, 0.5, 0.7, 0.9, -0.1, -0.3, -0.5, -0.7, -0.9]
    print("r,p,T,stable,minimum_phase,margin")
    worst = 1.0
    for r, p, T in itertools.product(orders, range(1, 6), (0.001, 0.01, 1.0)):
        rep = stability_report(discretize_operator(OperatorSpec(GeneratingFunction(args.gf, T), r, p, p)))
        worst = min(worst, rep.margin)
        print(f"{r},{p},{T},{rep.stable},{rep.minimum_phase},{rep.margin:.6f}")
    print(f"# smallest margin {worst:.6f}")


if __name__ == "__main__":
    main()
