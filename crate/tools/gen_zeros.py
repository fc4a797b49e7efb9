#!/usr/bin/env python3
"""Write the first N nontrivial zeta-zero ordinates, one per line.

Uses python-flint (Arb) which isolates zeros rigorously. Usage:

    pip install python-flint
    python3 tools/gen_zeros.py 100000 > data/zeros_100k.txt
"""
import sys

import flint


def main():
    total = int(sys.argv[1]) if len(sys.argv) > 1 else 100000
    batch = 1000
    flint.ctx.prec = 80
    out = sys.stdout
    out.write(f"# first {total} ordinates of nontrivial zeros of zeta(s), generated by Arb\n")
    n = 1
    while n <= total:
        num = min(batch, total - n + 1)
        for z in flint.acb.zeta_zeros(n, num):
            out.write(z.imag.mid().str(15, radius=False) + "\n")
        out.flush()
        n += num


if __name__ == "__main__":
    main()
