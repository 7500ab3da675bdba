"""Bounded zero search on random integer recurrences, through the stochastic encoding and directly."""

import argparse
import random
import time

from pometh.checker import witness_search
from pometh.reductions import lrs_terms, skolem_instance
from pometh.samples import random_lrs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--bound", type=int, default=15)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    start, mismatches = time.perf_counter(), 0
    for _ in range(args.count):
        s = random_lrs(rng)
        m, atom = skolem_instance(s)
        v = witness_search(m, atom, args.bound, jobs=args.jobs)
        # the encoding cannot see u_0 (time 0 is the initial distribution)
        zeros = [n for n, u in enumerate(lrs_terms(s, args.bound)) if u == 0 and n >= 1]
        expected = f"WITNESS t={zeros[0]}" if zeros else f"NOWITNESS bound={args.bound}"
        ok = str(v) == expected
        mismatches += not ok
        print(f"a={list(map(str, s.coeffs))} u0={list(map(str, s.init))}: {v}{'' if ok else f'  (expected {expected})'}")
    print(f"{mismatches} mismatches in {time.perf_counter() - start:.2f}s")
    raise SystemExit(1 if mismatches else 0)


if __name__ == "__main__":
    main()
