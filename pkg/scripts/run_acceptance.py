"""Run acceptance criteria outside pytest: ``python scripts/run_acceptance.py [k ...]``."""

import argparse
import sys

from lagrange4.verify import CRITERIA, run_criterion


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("criteria", nargs="*", type=int, default=sorted(CRITERIA))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    all_ok = True
    for k in args.criteria:
        title, _, limit = CRITERIA[k]
        checks, elapsed = run_criterion(k, args.seed)
        ok = all(c.passed for c in checks) and elapsed < limit
        all_ok &= ok
        print(f"[{'PASS' if ok else 'FAIL'}] {k} {title} ({elapsed:.1f}s / {limit}s)", flush=True)
        for c in checks:
            print(f"    {'ok  ' if c.passed else 'FAIL'} {c.name}: {c.measured} (bound {c.bound})")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
