"""Rosser lower bound against the exact sifted count Gamma for one N."""

import argparse

from lagrange4.lagrange import enumerate_solutions, sieve_assembly


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=1_000_003)
    ap.add_argument("--p0", type=float, default=7)
    ap.add_argument("--z", type=float, nargs="+", default=[None, 30, 50, 100])
    ap.add_argument("--D", type=float, nargs="+", default=[1e3, 1e4, 1e6])
    args = ap.parse_args()
    rs = enumerate_solutions(args.N)
    print(f"N = {args.N}, {len(rs)} solutions in the box")
    print(f"{'z':>8} {'D':>8} {'#theta':>7} {'Gamma':>12} {'lower':>12} {'holds':>6} {'survivors':>10} {'Gamma1':>12}")
    for z in args.z:
        for D in ([None] if z is None else args.D):
            r = sieve_assembly(rs, eta=0.05, delta=0.08, p0=args.p0, z=z, D=D)
            print(f"{r.z:>8.3g} {r.D:>8.3g} {r.n_theta:>7} {r.gamma:>12.4f} {r.lower_bound:>12.4f} "
                  f"{str(r.holds):>6} {r.survivors:>10} {r.gamma1:>12.4f}")


if __name__ == "__main__":
    main()
