"""Measure how a bounded Hurwitz orbit search grows with its state budget.

For factorizations with infinite orbits the word lengths grow quickly, so
time per state rises with the budget. Useful for picking --max values.
"""

import argparse
import time

from monodromy.factorization import hurwitz_orbit, parse


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("file", help="factorization file")
    ap.add_argument("--budgets", type=int, nargs="+", default=[10, 50, 100, 200, 500])
    args = ap.parse_args()
    with open(args.file, encoding="utf-8") as fh:
        f = parse(fh.read())
    for budget in args.budgets:
        start = time.perf_counter()
        orbit = hurwitz_orbit(f, budget)
        longest = max(len(t) for s in orbit.states.values() for t in s.factors)
        elapsed = time.perf_counter() - start
        print(f"max {budget:>6}  states {len(orbit):>6}  complete {orbit.complete!s:<5}  longest factor {longest:>5}  {elapsed:.2f} s")


if __name__ == "__main__":
    main()
