"""Reference table of extremal rays for the first Hilbert schemes.

Each entry lists the published extremal rays of the effective cone of the
Hilbert scheme of n points, as labels over the (H1, H2, B) basis.  The
`table --check` command and the regression suite compare computed cones
against this data; mismatches are reported, never auto-corrected.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

RAY_TABLE: Dict[int, List[str]] = {
    2: ["B", "X_{1,0}", "X_{0,1}"],
    3: ["B", "X_{2,0}", "X_{0,2}"],
    4: ["B", "X_{3,0}", "X_{1,1}", "X_{0,3}"],
    5: ["B", "X_{4,0}", "X_{4/3,4/3}", "X_{0,4}"],
    6: ["B", "X_{5,0}", "X_{2,1}", "X_{1,2}", "X_{0,5}"],
    7: ["B", "X_{6,0}", "X_{12/5,6/5}", "X_{2,3/2}", "X_{3/2,2}",
        "X_{6/5,12/5}", "X_{0,6}"],
    8: ["B", "X_{7,0}", "X_{3,1}", "X_{1,3}", "X_{0,7}"],
    9: ["B", "X_{8,0}", "X_{24/7,8/7}", "X_{2,2}", "X_{8/7,24/7}", "X_{0,8}"],
    10: ["B", "X_{9,0}", "X_{4,1}", "X_{5/2,2}", "X_{2,5/2}", "X_{1,4}",
         "X_{0,9}"],
    11: ["B", "X_{10,0}", "X_{40/9,10/9}", "X_{4,4/3}", "X_{12/5,12/5}",
         "X_{4/3,4}", "X_{10/9,40/9}", "X_{0,10}"],
    12: ["B", "X_{11,0}", "X_{5,1}", "X_{3,2}", "X_{2,3}", "X_{1,5}",
         "X_{0,11}"],
    13: ["B", "X_{12,0}", "X_{60/11,12/11}", "X_{9/2,3/2}", "X_{7/2,2}",
         "X_{8/3,8/3}", "X_{2,7/2}", "X_{3/2,9/2}", "X_{12/11,60/11}",
         "X_{0,12}"],
    14: ["B", "X_{13,0}", "X_{6,1}", "X_{10/3,7/3}", "X_{7/3,10/3}",
         "X_{1,6}", "X_{0,13}"],
    15: ["B", "X_{14,0}", "X_{84/13,14/13}", "X_{4,2}", "X_{2,4}",
         "X_{14/13,84/13}", "X_{0,14}"],
    16: ["B", "X_{15,0}", "X_{7,1}", "X_{9/2,2}", "X_{3,3}", "X_{2,9/2}",
         "X_{1,7}", "X_{0,15}"],
}


def ray_vector(label: str) -> Tuple[int, int, int]:
    """Primitive (a, b, c) vector of a table label."""
    if label == "B":
        return (0, 0, -1)
    if not (label.startswith("X_{") and label.endswith("}")):
        raise ValueError(f"unrecognized ray label {label!r}")
    i_str, j_str = label[3:-1].split(",")
    i, j = Fraction(i_str), Fraction(j_str)
    from math import lcm
    den = lcm(i.denominator, j.denominator)
    from math import gcd
    a, b, c = int(i * den), int(j * den), den
    g = gcd(gcd(abs(a), abs(b)), c)
    return (a // g, b // g, c // g)


def ray_set(n: int) -> frozenset:
    return frozenset(ray_vector(lbl) for lbl in RAY_TABLE[n])
