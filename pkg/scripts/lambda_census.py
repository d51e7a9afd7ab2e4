"""Census of bad-term sets: sizes, correction cases, and where the
correction rule stops producing polynomials.

    python scripts/lambda_census.py --max-a 40
"""
import argparse
from collections import Counter

from skbasis.builder import correction_case, lambda_cardinality, lambda_set


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-a", type=int, default=40)
    args = ap.parse_args()

    cases = Counter()
    sizes = Counter()
    first_case = {}
    first_negative_gap = None
    first_bad_exponent = None
    for a in range(2, args.max_a + 1):
        for b in range(1, a):
            entries = lambda_set(a, b)
            assert len(entries) == lambda_cardinality(a, b)
            sizes[len(entries)] += 1
            for e in entries:
                c = correction_case(a, b, e)
                cases[c] += 1
                key = (a + b, a, b)
                if c not in first_case or key < first_case[c][0]:
                    first_case[c] = (key, e)
                if e.d < 0 and (first_negative_gap is None or key < first_negative_gap[0]):
                    first_negative_gap = (key, e)
                if c == 3 and 2 * b + 3 * e.d < 0 and (first_bad_exponent is None or key < first_bad_exponent[0]):
                    first_bad_exponent = (key, e)

    print(f"pairs 1 <= b < a <= {args.max_a}")
    print("set sizes:", dict(sorted(sizes.items())))
    print("entries per correction case:", dict(sorted(cases.items())))
    for c, ((deg, a, b), e) in sorted(first_case.items()):
        print(f"case {c} first at degree {deg}: (a, b) = ({a}, {b}), entry (m, s) = ({e.m}, {e.s})")
    if first_negative_gap:
        (deg, a, b), e = first_negative_gap
        print(f"negative gap s - m first at degree {deg}: ({a}, {b}), entry ({e.m}, {e.s})")
    if first_bad_exponent:
        (deg, a, b), e = first_bad_exponent
        print(f"negative x0 exponent first at degree {deg}: ({a}, {b}), entry ({e.m}, {e.s})")


if __name__ == "__main__":
    main()
