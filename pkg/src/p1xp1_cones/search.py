r"""Controlling exceptional bundles, controlling pairs, extremal pairs.

The candidates for the Brill-Noether divisors of M(xi) live on the curve
Q_xi = 1/2 in the slope plane.  A controlling exceptional bundle is a
delta-surface attainer at some point of that curve.  For an exceptional
pair (alpha, beta) of controlling bundles the corresponding orthogonal
point is the triple intersection of Q_xi with the two corresponding
surfaces (the pairwise differences of these saddles are linear, so the
point is an exact solve of a 2x2 rational system), or alpha's (beta's)
own slope when the relevant Euler characteristic vanishes.  Pairs whose
point is stable are controlling pairs; extremal pairs additionally pass
the interpolation-dominance filter, the within-a-unit condition, and the
resolution-side conditions checked in :mod:`p1xp1_cones.resolver`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .chern import ChernCharacter, K_CHAR, Slope, frac, hilbert_P, rel_chi, sym_pairing
from .config import Config
from .exceptional import Database, ExceptionalBundle, get_database
from .resolver import NoResolutionError, Resolution, find_resolution
from .stability import DeltaValue, delta_surface, q_eval


class DegeneratePairError(ValueError):
    """The three surfaces meet in a line instead of a point."""


@dataclass(frozen=True)
class OrthogonalPoint:
    mu: Slope
    delta: Fraction
    kind: str  # "triple", "alpha-point", "beta-point"


@dataclass(frozen=True)
class ControllingBundle:
    bundle: ExceptionalBundle
    witness: Slope  # a curve point where the bundle attains delta


@dataclass(frozen=True)
class ControllingPair:
    alpha: ExceptionalBundle
    beta: ExceptionalBundle
    point: OrthogonalPoint


@dataclass(frozen=True)
class ExtremalPair:
    alpha: ExceptionalBundle
    beta: ExceptionalBundle
    point: OrthogonalPoint
    character: ChernCharacter
    resolution: Resolution
    assumed: Tuple[int, ...] = (5, 6)

    def members(self) -> Tuple[ExceptionalBundle, ExceptionalBundle]:
        return (self.alpha, self.beta)


def corresponding_base(gamma: ExceptionalBundle,
                       xi: ChernCharacter) -> Optional[ChernCharacter]:
    """Base character of the corresponding surface Q_{gamma,xi}, or None.

    The sign of chi(E_gamma^*, U) picks E_gamma^* or E_gamma^*(K); a zero
    sign leaves the surface undefined (the point degenerates to gamma).
    """
    s = rel_chi(gamma.dual_ch(), xi)
    if s > 0:
        return gamma.dual_ch()
    if s < 0:
        return gamma.dual_ch().twist(K_CHAR)
    return None


def orthogonal_point(xi: ChernCharacter, alpha: ExceptionalBundle,
                     beta: ExceptionalBundle) -> OrthogonalPoint:
    """The corresponding orthogonal point of a controlling pair."""
    sa = rel_chi(alpha.dual_ch(), xi)
    sb = rel_chi(beta.dual_ch(), xi)
    if sa == 0:
        return OrthogonalPoint(alpha.slope, alpha.discriminant(), "alpha-point")
    if sb == 0:
        return OrthogonalPoint(beta.slope, beta.discriminant(), "beta-point")
    base_a = alpha.dual_ch() if sa > 0 else alpha.dual_ch().twist(K_CHAR)
    base_b = beta.dual_ch() if sb > 0 else beta.dual_ch().twist(K_CHAR)
    # Q_c(mu) = (mu1 + c1 + 1)(mu2 + c2 + 1) - Delta_c; differences of two
    # such surfaces are linear in mu, one equation per companion surface.
    rows = []
    sxi = xi.slope()
    for base in (base_a, base_b):
        sb_ = base.slope()
        # coefficients of mu1, mu2 and the constant in Q_xi - Q_base = 0
        a1 = (sxi.mu2 + 1) - (sb_.mu2 + 1)
        a2 = (sxi.mu1 + 1) - (sb_.mu1 + 1)
        const = ((sxi.mu1 + 1) * (sxi.mu2 + 1) - xi.discriminant()
                 - (sb_.mu1 + 1) * (sb_.mu2 + 1) + base.discriminant())
        rows.append((a1, a2, -const))
    det = rows[0][0] * rows[1][1] - rows[1][0] * rows[0][1]
    if det == 0:
        raise DegeneratePairError(
            f"surfaces of ({alpha},{beta}) intersect in parallel lines")
    mu1 = (rows[0][2] * rows[1][1] - rows[1][2] * rows[0][1]) / det
    mu2 = (rows[0][0] * rows[1][2] - rows[1][0] * rows[0][2]) / det
    mu = Slope(mu1, mu2)
    return OrthogonalPoint(mu, q_eval(xi, mu), "triple")


def orthogonal_character(point: OrthogonalPoint) -> ChernCharacter:
    """Minimal positive-rank character sitting at the orthogonal point."""
    import math
    mu, delta = point.mu, point.delta
    r0 = math.lcm(mu.mu1.denominator, mu.mu2.denominator)
    chi_unit = hilbert_P(mu.mu1, mu.mu2) - delta
    k = (r0 * chi_unit).denominator
    r = k * r0
    return ChernCharacter.from_slope_discriminant(r, mu, delta)


# ---------------------------------------------------------------------------
# controlling-bundle scan


def _curve_mu2(xi: ChernCharacter, mu1: Fraction) -> Optional[Fraction]:
    """Solve Q_xi(mu1, mu2) = 1/2 for mu2 on the positive branch."""
    s = xi.slope()
    lhs = mu1 + s.mu1 + 1
    if lhs <= 0:
        return None
    return (xi.discriminant() + Fraction(1, 2)) / lhs - s.mu2 - 1


def _scan_range(xi: ChernCharacter) -> Tuple[Fraction, Fraction]:
    s = xi.slope()
    hi = s.mu1 + 2 * xi.discriminant() + 2
    lo = -1 - s.mu1
    return lo, hi


def controlling_exceptionals(xi: ChernCharacter, db: Database,
                             config: Optional[Config] = None) -> List[ControllingBundle]:
    """Delta-attainers along the curve Q_xi = 1/2.

    The curve is sampled on a rational grid in each slope coordinate (both
    parametrizations, so steep stretches are covered) and the attainer
    changes are refined by bisection; every distinct attainer is returned
    with one witness point.
    """
    config = config or Config()
    step = frac(config.scan_step)
    found: Dict[Tuple[int, int, int], ControllingBundle] = {}
    x0, x1, y0, y1 = db.params.window
    box = (x0 + 4, x1 - 4, y0 + 4, y1 - 4)

    def usable(mu: Slope) -> bool:
        return box[0] <= mu.mu1 <= box[1] and box[2] <= mu.mu2 <= box[3]

    def visit(mu: Slope) -> Optional[ExceptionalBundle]:
        dv = delta_surface(mu, db)
        if dv.attainer is not None:
            if dv.attainer.key not in found:
                found[dv.attainer.key] = ControllingBundle(dv.attainer, mu)
            return dv.attainer
        return None

    def refine(m1a: Fraction, m1b: Fraction, ea, eb, depth: int, param) -> None:
        if depth <= 0 or ea is None or eb is None or ea.key == eb.key:
            return
        mid = (m1a + m1b) / 2
        mu = param(mid)
        if mu is None or not usable(mu):
            return
        em = visit(mu)
        refine(m1a, mid, ea, em, depth - 1, param)
        refine(mid, m1b, em, eb, depth - 1, param)

    def sweep(param, lo: Fraction, hi: Fraction) -> None:
        prev_t: Optional[Fraction] = None
        prev_e = None
        t = lo + step
        while t <= hi:
            mu = param(t)
            if mu is not None and usable(mu):
                e = visit(mu)
                if prev_t is not None and e is not None and prev_e is not None \
                        and e.key != prev_e.key:
                    refine(prev_t, t, prev_e, e, config.refine_depth, param)
                prev_t, prev_e = t, e
            t += step

    def by_mu1(t: Fraction) -> Optional[Slope]:
        m2 = _curve_mu2(xi, t)
        return None if m2 is None else Slope(t, m2)

    def by_mu2(t: Fraction) -> Optional[Slope]:
        m2 = _curve_mu2(xi.mirror(), t)
        return None if m2 is None else Slope(m2, t)

    sweep(by_mu1, *_scan_range(xi))
    sweep(by_mu2, *_scan_range(xi.mirror()))
    out = sorted(found.values(), key=lambda c: c.bundle.slope.gamma_key())
    return out


def _is_exceptional_pair(first: ExceptionalBundle, second: ExceptionalBundle) -> bool:
    return rel_chi(second.ch, first.ch) == 0


def _point_is_stable(point: OrthogonalPoint, db: Database) -> bool:
    if point.delta < delta_surface(point.mu, db).value:
        return False
    # integrality at the minimal admissible rank always has a solution
    return True


def controlling_pairs(xi: ChernCharacter, db: Database,
                      config: Optional[Config] = None,
                      controlling: Optional[List[ControllingBundle]] = None
                      ) -> List[ControllingPair]:
    """Oriented exceptional pairs of controlling bundles with stable point."""
    config = config or Config()
    if controlling is None:
        controlling = controlling_exceptionals(xi, db, config)
    bundles = [c.bundle for c in controlling]
    out: List[ControllingPair] = []
    seen = set()
    for A in bundles:
        for B in bundles:
            if A.key == B.key or not _is_exceptional_pair(A, B):
                continue
            key = (A.key, B.key)
            if key in seen:
                continue
            seen.add(key)
            try:
                pt = orthogonal_point(xi, A, B)
            except DegeneratePairError:
                continue
            if _point_is_stable(pt, db):
                out.append(ControllingPair(A, B, pt))
    out.sort(key=lambda p: (p.alpha.slope.gamma_key(), p.beta.slope.gamma_key()))
    return out


def _dominance_ok(point: OrthogonalPoint, xi: ChernCharacter,
                  controlling: Sequence[ControllingBundle]) -> bool:
    """Interpolation filter: the point is not below any corresponding
    surface whose branch window reaches it."""
    mu, delta = point.mu, point.delta
    mk = mu.gamma_key()
    for c in controlling:
        g = c.bundle
        s = rel_chi(g.dual_ch(), xi)
        gs = g.slope
        if s > 0:
            if not (gs.mu11 - 4 < mu.mu11 and mk < gs.gamma_key()):
                continue
            val = q_eval(g.dual_ch(), mu)
        elif s < 0:
            if not (mu.mu11 < gs.mu11 + 4 and gs.gamma_key() < mk):
                continue
            val = q_eval(g.dual_ch().twist(K_CHAR), mu)
        else:
            continue
        if delta < val:
            return False
    return True


def extremal_pairs(xi: ChernCharacter, db: Database,
                   config: Optional[Config] = None) -> List[ExtremalPair]:
    """Controlling pairs that pass every numeric extremality condition.

    Conditions (5) and (6) of the extremal-pair definitions are homological
    and are recorded as assumptions on each returned pair rather than
    checked.  A beta-point pair is dropped when its orthogonal point is
    already produced by a triple or alpha-point pair (it certifies nothing
    new and the published pair lists exclude such duplicates).
    """
    config = config or Config()
    controlling = controlling_exceptionals(xi, db, config)
    pairs = controlling_pairs(xi, db, config, controlling)
    passing: List[ExtremalPair] = []
    for cp in pairs:
        A, B, pt = cp.alpha, cp.beta, cp.point
        if abs(A.slope.mu1 - B.slope.mu1) > 1 or abs(A.slope.mu2 - B.slope.mu2) > 1:
            continue
        if not _dominance_ok(pt, xi, controlling):
            continue
        try:
            res = find_resolution(xi, A, B, db, config)
        except NoResolutionError:
            continue
        passing.append(ExtremalPair(A, B, pt, orthogonal_character(pt), res))
    strong_points = {(p.point.mu, p.point.delta)
                     for p in passing if p.point.kind != "beta-point"}
    out = [p for p in passing
           if p.point.kind != "beta-point"
           or (p.point.mu, p.point.delta) not in strong_points]
    out.sort(key=lambda p: (p.alpha.slope.gamma_key(), p.beta.slope.gamma_key()))
    return out


def hilbert_character(n: int) -> ChernCharacter:
    """Character of the ideal sheaf of n points."""
    return ChernCharacter(1, 0, 0, -n)


def database_for(xi: ChernCharacter, config: Optional[Config] = None) -> Database:
    """Database whose window covers the whole pipeline for xi."""
    config = config or Config()
    s = xi.slope()
    lo1, hi1 = _scan_range(xi)
    lo2, hi2 = _scan_range(xi.mirror())
    x0 = min(s.mu1, lo1) - config.pad - 4
    x1 = max(s.mu1, hi1) + config.pad + 4
    y0 = min(s.mu2, lo2) - config.pad - 4
    y1 = max(s.mu2, hi2) + config.pad + 4
    return get_database(config.rank_bound, (x0, x1, y0, y1),
                        config.slope_reach, config.element_cap, config.cache_dir)
