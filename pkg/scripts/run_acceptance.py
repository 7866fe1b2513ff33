"""Run the twelve acceptance checks and print one line each.

    python scripts/run_acceptance.py [numbers...]
"""

import sys

from efftop.checks import CHECKS, run_check


def main(argv: list[str]) -> int:
    numbers = [int(a) for a in argv] or [c[0] for c in CHECKS]
    results = [run_check(n) for n in numbers]
    for r in results:
        print(r.line(), flush=True)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed: {failed}" if failed else ""))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
