"""Compare `hyperdist eval` against mpmath on a few series.

Usage: python3 scripts/mpmath_crosscheck.py [path/to/hyperdist]
"""

import json
import subprocess
import sys
from fractions import Fraction

import mpmath

mpmath.mp.dps = 45

CASES = [
    ("6F5", ["1", "1", "1", "5/4", "3/2", "7/4"], ["9/8", "11/8", "13/8", "15/8", "2"], "1"),
    ("5F4", ["1/2", "1/2", "1/2", "1", "1"], ["3/4", "5/4", "3/2", "3/2"], "1/64"),
    ("4F3", ["1/6", "1/3", "2/3", "5/6"], ["1/4", "1/2", "3/4"], "729/1024"),
    ("4F3", ["1/3", "7/6", "1/4", "1/5"], ["1/6", "13/12", "17/15"], "-1"),
    ("3F2", ["1/2", "1/3", "5/6"], ["3/2", "7/4"], "1"),
    ("2F1", ["1/4", "3/4"], ["2/3"], "-1/2"),
    ("0F3", [], ["1/4", "1/2", "3/4"], "1/256"),
]


def frac(s):
    return mpmath.mpf(Fraction(s).numerator) / Fraction(s).denominator


def reference(up, lo, z):
    if abs(z) != 1:
        return mpmath.hyper(up, lo, z)
    # mpmath's own unit-argument path recurses once per term; sum the
    # terms directly with Levin-type extrapolation instead
    def term(k):
        k = int(k)
        num = mpmath.fprod(mpmath.rf(a, k) for a in up)
        den = mpmath.fprod(mpmath.rf(b, k) for b in lo) * mpmath.factorial(k)
        return num / den * z**k

    with mpmath.workdps(80):
        return +mpmath.nsum(term, [0, mpmath.inf], method="levin")


def main():
    exe = sys.argv[1] if len(sys.argv) > 1 else "target/release/hyperdist"
    worst = 0
    for name, up, lo, z in CASES:
        text = f"{name}({', '.join(up)}; {', '.join(lo)}; {z})"
        out = subprocess.run([exe, "eval", text, "--json", "--prec", "40"], capture_output=True, text=True, check=True)
        ours = mpmath.mpmathify(json.loads(out.stdout)["value"].replace(" ", "").replace("i", "j"))
        ref = reference([frac(a) for a in up], [frac(b) for b in lo], frac(z))
        diff = abs(ours - ref)
        worst = max(worst, diff)
        print(f"{text:70} diff {mpmath.nstr(diff, 3)}")
    print(f"worst {mpmath.nstr(worst, 3)}")
    sys.exit(0 if worst < mpmath.mpf(10) ** -30 else 1)


if __name__ == "__main__":
    main()
