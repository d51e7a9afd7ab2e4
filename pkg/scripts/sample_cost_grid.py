"""Sample the cost function on a rational grid and check it against the
brute-force oracles while doing so.

    python scripts/sample_cost_grid.py --step 1/7 --out cost_grid.csv
"""
import argparse
import csv
from fractions import Fraction

from skbasis.cost import cost
from skbasis.oracles import BracketOracle, legendre_oracle, phi0_oracle
from skbasis.sections import format_rational


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-range", type=Fraction, nargs=2, default=(Fraction(-6), Fraction(6)))
    ap.add_argument("--tv-range", type=Fraction, nargs=2, default=(Fraction(-18), Fraction(18)))
    ap.add_argument("--step", type=Fraction, default=Fraction(1, 7))
    ap.add_argument("--out", default="cost_grid.csv")
    args = ap.parse_args()

    (t0, t1), (v0, v1), h = args.t_range, args.tv_range, args.step
    ts = [t0 + i * h for i in range(int((t1 - t0) / h) + 1)]
    tvs = [v0 + i * h for i in range(int((v1 - v0) / h) + 1)]
    bound = max(abs(t0), abs(t1))
    mismatches = 0
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "tv", "cost"])
        for tv in tvs:
            bracket, star = BracketOracle(tv, t_bound=bound), legendre_oracle(tv)
            for t in ts:
                c = cost(t, tv).value
                mismatches += c != -bracket(t) + phi0_oracle(t) + star
                w.writerow([format_rational(t), format_rational(tv), format_rational(c)])
    print(f"{len(ts) * len(tvs)} points written to {args.out}; oracle mismatches: {mismatches}")
    raise SystemExit(1 if mismatches else 0)


if __name__ == "__main__":
    main()
