"""Table of L(N,p), alpha(N,p) and Psi(N,p) for odd primes p up to a bound."""

import argparse

from lagrange4.arith import primes_up_to
from lagrange4.localdata import local_density


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=1_000_003)
    ap.add_argument("--p-max", type=int, default=60)
    args = ap.parse_args()
    print(f"{'p':>6} {'L':>10} {'(L-p^2)/p^1.5':>14} {'alpha':>8} {'Psi':>12} {'p Psi':>8}")
    for p in primes_up_to(args.p_max)[1:]:
        r = local_density(args.N, p)
        print(f"{p:>6} {r.L:>10} {(r.L - p * p) / p**1.5:>14.4f} {str(r.alpha):>8} {r.psi:>12.6g} {p * r.psi:>8.4f}")


if __name__ == "__main__":
    main()
