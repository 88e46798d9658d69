"""Monte Carlo sweep of the determinant lower bound, then certificates at the largest threshold.

    python scripts/transversality_sweep.py --samples 100000 --top 4
"""

import argparse

from isoproj.transversality import max_ct, transversality_certificate, transversality_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--top", type=int, default=4, help="largest n")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--certify", type=int, default=10_000, help="certificate samples (0 to skip)")
    args = ap.parse_args()

    print("n m samples violations intermediate_violations min_slack")
    for n in range(1, args.top + 1):
        for m in range(1, n + 1):
            r = transversality_sweep(n, m, args.samples, seed=args.seed)
            print(f"{n} {m} {r.samples} {r.violations} {r.intermediate_violations} {r.min_slack:.3e}")

    if args.certify:
        print("\nn m C_T epsilon L1 L2 tested violations min_margin")
        for n, m in [(1, 1), (2, 1), (2, 2), (3, 2)]:
            rep = transversality_certificate(n, m, max_ct(m), samples=args.certify, seed=args.seed)
            print(f"{n} {m} {rep.C_T:.4g} {rep.epsilon:.4g} {rep.L1:.3g} {rep.L2:.3g} "
                  f"{rep.tested} {rep.violations} {rep.min_margin:.3f}")


if __name__ == "__main__":
    main()
