#!/usr/bin/env python3
"""Regenerates tests/data/pearson_reference.csv with scipy.stats.pearsonr.

The input series come from a splitmix64 stream that the C++ tests replay, so
only the expected (rho, p) pairs are stored.
"""
import sys
from pathlib import Path

from scipy import stats

MASK = (1 << 64) - 1
SEED = 0x5EED_2024


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self):
        return (self.next() >> 11) * 2.0**-53


def series(rng):
    n = 3 + rng.next() % 48
    slope = 4.0 * rng.uniform() - 2.0
    noise = 0.1 + 2.0 * rng.uniform()
    xs, ys = [], []
    for _ in range(n):
        x = 10.0 * rng.uniform()
        xs.append(x)
        ys.append(slope * x + noise * (2.0 * rng.uniform() - 1.0))
    return xs, ys


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "tests" / "data" / "pearson_reference.csv")
    rng = SplitMix64(SEED)
    lines = ["index,n,rho,p"]
    for i in range(1000):
        xs, ys = series(rng)
        res = stats.pearsonr(xs, ys)
        lines.append(f"{i},{len(xs)},{float(res[0])!r},{float(res[1])!r}")
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
