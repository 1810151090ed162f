"""Relative error |F(N,d) - M| / M for random odd N at one or more scales.

Shows the error shrinking with N, which is what the asymptotic main term predicts.
"""

import argparse
import warnings

import numpy as np

from lagrange4.lagrange import enumerate_solutions, remainder


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=float, nargs="+", default=[1e6, 1e7])
    ap.add_argument("--count", type=int, default=6)
    ap.add_argument("--d", type=int, nargs="+", default=[1, 3, 5, 7])
    ap.add_argument("--seed", type=int, default=123)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    warnings.simplefilter("ignore")
    print(f"{'N range':>22} " + " ".join(f"{'d=' + str(d):>14}" for d in args.d))
    for lo in args.lo:
        Ns = rng.integers(int(lo) // 2, int(lo), size=args.count) * 2 + 1
        errs = {d: [] for d in args.d}
        for N in Ns:
            rs = enumerate_solutions(int(N))
            for d in args.d:
                r = remainder(rs, d)
                if r.L:
                    errs[d].append(abs(r.relative_error))
        cells = [f"{np.median(e):8.4f} (n={len(e)})" if e else f"{'-':>14}" for e in errs.values()]
        print(f"[{lo:.0e}, {2 * lo:.0e}] median " + " ".join(cells))


if __name__ == "__main__":
    main()
