"""Compare the PO-DTMC encoding of random PFAs with direct word enumeration."""

import argparse
import itertools
import random
import time

from pometh.checker import check
from pometh.linalg import vec_mat
from pometh.reductions import pfa_to_podtmc
from pometh.samples import random_pfa


def exists_word(a, horizon: int) -> bool:
    for k in range(horizon + 1):
        for w in itertools.product(a.alphabet, repeat=k):
            v = a.init
            for x in w:
                v = vec_mat(v, a.letters[x])
            if sum(v[q] for q in a.finals) > a.cutpoint:
                return True
    return False


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--max-horizon", type=int, default=4)
    ap.add_argument("--max-states", type=int, default=3)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    start, agree, total = time.perf_counter(), 0, 0
    for _ in range(args.count):
        a = random_pfa(rng, max_states=args.max_states)
        for h in range(args.max_horizon + 1):
            m, phi = pfa_to_podtmc(a, h)
            agree += (check(m, "spr", phi).kind == "HOLDS") == exists_word(a, h)
            total += 1
    print(f"{agree}/{total} agree ({time.perf_counter() - start:.2f}s)")
    raise SystemExit(0 if agree == total else 1)


if __name__ == "__main__":
    main()
