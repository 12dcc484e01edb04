"""Tip half-angles that make an n-point star burn neutrally.

A star port burns neutrally when the perimeter gained on the convex
stretches (2*pi per unit depth, shared across 2n half-sectors) exactly
cancels the loss at the 2n flank cusps.  The root of that balance gives
one half-angle per tip count; the classic five values are printed next
to the residual at the root as a sanity column.

Run:  python3 demos/neutral_star_table.py
"""

import math

from burnback import neutral_tip_angle
from burnback.star import neutral_residual


def main() -> None:
    print("tips   theta/2 [deg]   residual at root")
    for n in range(4, 13):
        half = neutral_tip_angle(n)
        res = neutral_residual(n, 2.0 * half)
        print(f"{n:>4}   {math.degrees(half):13.6f}   {res:.2e}")
    print()
    print("A 3-tip star has no neutral angle: the formal root would need")
    print("a tip wider than the sector itself, so the request is rejected.")


if __name__ == "__main__":
    main()
