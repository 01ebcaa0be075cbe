"""Desk-scale checks of the infinite families of extremal rays/edges."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple

from .cone import ConeResult, effective_cone_hilbert, primitive
from .config import Config


def _vec(i: Fraction, j: Fraction) -> Tuple[int, int, int]:
    return primitive((i, j, Fraction(1)))


def _has_ray(result: ConeResult, vec) -> bool:
    return any(r.vec == vec for r in result.rays)


def _adjacent(result: ConeResult, v1, v2) -> bool:
    idx = {r.vec: k for k, r in enumerate(result.rays)}
    if v1 not in idx or v2 not in idx:
        return False
    pair = {idx[v1], idx[v2]}
    return any(pair <= set(f.rays) for f in result.facets)


def symmetric_value(result: ConeResult) -> Optional[Fraction]:
    """The a with X_{a,a} on the cone boundary: the binding diagonal facet."""
    best = None
    for f in result.facets:
        p, q, s = f.normal
        if p + q > 0:
            val = Fraction(-s, p + q)
            if best is None or val > best:
                best = val
    return best


def run_family(family: str, k: int, config: Optional[Config] = None) -> Tuple[bool, str]:
    """Assert one family instance; returns (ok, detail)."""
    config = config or Config()
    if family == "even-edge":
        n = 2 * k
        res = effective_cone_hilbert(n, config)
        v1, v2 = _vec(Fraction(2 * k - 1), Fraction(0)), _vec(Fraction(k - 1), Fraction(1))
        ok = _has_ray(res, v1) and _has_ray(res, v2) and _adjacent(res, v1, v2)
        return ok, f"n={n} rays {v1},{v2} adjacent={ok}"
    if family == "odd-edge":
        n = 2 * k + 1
        res = effective_cone_hilbert(n, config)
        v1 = _vec(Fraction(2 * k), Fraction(0))
        v2 = _vec(Fraction(2 * k * (k - 1), 2 * k - 1), Fraction(2 * k, 2 * k - 1))
        ok = _has_ray(res, v1) and _has_ray(res, v2) and _adjacent(res, v1, v2)
        return ok, f"n={n} rays {v1},{v2} adjacent={ok}"
    if family == "all-n-edge":
        n = k
        res = effective_cone_hilbert(n, config)
        v1, v2 = (0, 0, -1), _vec(Fraction(n - 1), Fraction(0))
        ok = _has_ray(res, v1) and _has_ray(res, v2) and _adjacent(res, v1, v2)
        return ok, f"n={n} B and {v2} adjacent={ok}"
    if family == "3k+1-ray":
        n = 3 * k + 1
        res = effective_cone_hilbert(n, config)
        v = _vec(Fraction(2 * k - 1, 2), Fraction(2))
        ok = _has_ray(res, v)
        return ok, f"n={n} ray {v} present={ok}"
    if family == "symmetric-values":
        expected = {
            k * k - 2: Fraction(k - 1) - Fraction(1, 2 * k - 2),
            k * k - 1: Fraction(k - 1),
            k * k: Fraction(k - 1),
            k * k + 1: Fraction(k - 1) + Fraction(1, k + 1),
            k * k + k: Fraction(2 * k - 1, 2),
        }
        details = []
        ok = True
        for n, want in sorted(expected.items()):
            if n < 2:
                continue
            res = effective_cone_hilbert(n, config)
            got = symmetric_value(res)
            good = got == want
            ok = ok and good
            details.append(f"n={n}:{got}{'==' if good else '!='}{want}")
        return ok, " ".join(details)
    raise ValueError(f"unknown family {family!r}")
