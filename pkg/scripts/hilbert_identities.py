"""Check the chain identities f A^n g = 2^-n (n - 2), f A^n g' = 2^-n, f A^n g'' = n 2^-n."""

import argparse
import time
from fractions import Fraction

from pometh.linalg import bilinear, mat_mul, mat_pow
from pometh.reductions import HILBERT_A, HILBERT_F, HILBERT_G, HILBERT_G1, HILBERT_G2, perron_power


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=64)
    args = ap.parse_args()
    start = time.perf_counter()
    an, bad = mat_pow(HILBERT_A, 0), 0
    for n in range(args.max_n + 1):
        got = tuple(bilinear(HILBERT_F, an, g) for g in (HILBERT_G, HILBERT_G1, HILBERT_G2))
        want = tuple(Fraction(1, 2**n) * k for k in (n - 2, 1, n))
        perron = n == 0 or perron_power(n) == an
        ok = got == want and perron
        bad += not ok
        if n <= 8 or not ok:
            print(f"n={n:3d} fA^ng={got[0]} fA^ng'={got[1]} fA^ng''={got[2]} perron={'ok' if perron else 'MISMATCH'}")
        an = mat_mul(an, HILBERT_A)
    print(f"checked n=0..{args.max_n}: {bad} mismatches in {time.perf_counter() - start:.3f}s")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
