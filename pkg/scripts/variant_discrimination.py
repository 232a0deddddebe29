"""Decide the Leibniz rule of theta-derivations by running the HNN relation under both.

Usage: python scripts/variant_discrimination.py [--seed N] [--max-dim D] [--maxlen R] [-o report.json]
"""
import argparse
import sys

from homhnn.cli import canonical_json
from homhnn.hnn import discriminate_variants


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--maxlen", type=int, default=2)
    p.add_argument("-o", "--out")
    args = p.parse_args()
    text = canonical_json(discriminate_variants(args.seed, args.max_dim, args.maxlen))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
