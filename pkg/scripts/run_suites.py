"""Run every suite over a grid of dimensions and seeds and print a summary table.

    python3 scripts/run_suites.py --dims 2 3 4 --seeds 0 1 2
"""
from __future__ import annotations

import argparse
import time

from tlcat.suites import QUBIT_ONLY, SUITES, SuiteConfig, run_suite


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--tol", type=float, default=1e-10)
    args = ap.parse_args()
    failures = 0
    print(f"{'suite':<14}{'d':>3}{'seed':>6}{'checks':>8}{'worst dev':>12}{'secs':>7}  status")
    for d in args.dims:
        for suite in SUITES:
            if d != 2 and suite in QUBIT_ONLY:
                continue
            for seed in args.seeds:
                t0 = time.perf_counter()
                recs = run_suite(SuiteConfig(suite, d=d, tol=args.tol, seed=seed))
                worst = max(r.max_deviation for r in recs)
                bad = [r.check_id for r in recs if not r.ok]
                failures += len(bad)
                status = "ok" if not bad else "FAIL " + ",".join(bad)
                print(f"{suite:<14}{d:>3}{seed:>6}{len(recs):>8}{worst:>12.2e}{time.perf_counter() - t0:>7.2f}  {status}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
