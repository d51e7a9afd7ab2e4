"""Build and verify the bases of degree 1..N and print a timing table.

    python scripts/verify_degrees.py --max-degree 8 --out-dir results/
"""
import argparse
import time
from pathlib import Path

from skbasis.builder import BasisBuilder
from skbasis.verifier import verify_theorem


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-degree", type=int, default=8)
    ap.add_argument("--margin", type=int, default=0)
    ap.add_argument("--out-dir", type=Path, default=None, help="write basis and certificate JSON here")
    args = ap.parse_args()

    builder = BasisBuilder()
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
    print(f"{'d':>3} {'sections':>8} {'monomials':>9} {'ok':>5} {'seconds':>8}")
    all_ok = True
    for d in range(1, args.max_degree + 1):
        start = time.perf_counter()
        basis = builder.basis(d)
        cert = verify_theorem(basis, margin=args.margin)
        elapsed = time.perf_counter() - start
        size = sum(len(s.terms) for s in basis.entries.values())
        print(f"{d:>3} {3 * d:>8} {size:>9} {str(cert.ok):>5} {elapsed:>8.3f}")
        all_ok &= cert.ok
        if args.out_dir:
            (args.out_dir / f"basis_d{d}.json").write_text(basis.dumps())
            (args.out_dir / f"certificate_d{d}.json").write_text(cert.dumps())
    raise SystemExit(0 if all_ok else 1)


if __name__ == "__main__":
    main()
