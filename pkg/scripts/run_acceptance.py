"""Run the acceptance criteria and print one line per criterion.

    python3 scripts/run_acceptance.py            # all criteria
    python3 scripts/run_acceptance.py 5 7        # a subset
"""

import argparse
import sys
import time

from collat.acceptance import CRITERIA


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("criteria", nargs="*", type=int, choices=sorted(CRITERIA))
    args = p.parse_args()
    start = time.perf_counter()
    ok = True
    for k in args.criteria or sorted(CRITERIA):
        r = CRITERIA[k]()
        print(r.line(), flush=True)
        ok &= r.ok
    print(f"total {time.perf_counter() - start:.1f}s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
