r"""Neron-Severi vectors, cone rays, facets, and the Hilbert-scheme pipeline.

Divisor classes on the Hilbert scheme are written D = a H1 + b H2 - (c/2) B,
stored as exact triples (a, b, c).  The named rays are

    X_{i,j} = i H1 + j H2 - B/2   -> (i, j, 1)
    Y_{a,b} = a H1 + b H2         -> (a, b, 0)
    B                             -> (0, 0, -2)

A ray keeps its primitive integer direction (denominators cleared, gcd 1,
orientation preserved).  The cone machinery is exact and tiny: facets are
the pairwise cross products that are nonnegative on every ray, extremal
rays are the ones lying on two facets, and every facet normal is oriented
to be positive on the sum of the rays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .chern import ChernCharacter, Slope, frac, sym_pairing
from .config import Config
from .exceptional import ExceptionalBundle
from .search import (ExtremalPair, controlling_exceptionals, database_for,
                     extremal_pairs, hilbert_character)


class NonSalientConeError(ValueError):
    """The ray set contains a ray and its negation."""


def primitive(vec: Sequence[Fraction]) -> Tuple[int, ...]:
    """Primitive integer vector along the same ray (direction preserved)."""
    fr = [frac(v) for v in vec]
    if all(v == 0 for v in fr):
        raise ValueError("zero vector has no direction")
    den = 1
    for v in fr:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in fr]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(v // g for v in ints)


@dataclass(frozen=True)
class ConeRay:
    vec: Tuple[int, int, int]
    label: str
    provenance: Tuple[str, ...] = ()

    @classmethod
    def from_rational(cls, a, b, c, provenance=()) -> "ConeRay":
        v = primitive((frac(a), frac(b), frac(c)))
        return cls(v, ray_label(v), tuple(provenance))


def ray_label(vec: Tuple[int, int, int]) -> str:
    a, b, c = vec
    if c == 0:
        return f"Y_{{{a},{b}}}" if (a, b) != (0, 0) else "0"
    if c < 0:
        if a == 0 and b == 0:
            return "B"
        return f"({a},{b},{c})"
    i, j = Fraction(a, c), Fraction(b, c)
    return f"X_{{{i},{j}}}"


B_RAY = ConeRay((0, 0, -1), "B", ("secondary locus of nonreduced schemes",))


def ray_of_character(xi_plus: ChernCharacter, xi: ChernCharacter,
                     provenance=()) -> Tuple[ConeRay, Optional[str]]:
    """NS ray of an orthogonal character.

    For Hilbert-scheme xi (rank 1, slope zero) the isomorphism sends the
    character to X_{mu1, mu2}.  Anything else is emitted as the raw
    character coordinates with a warning.
    """
    if xi.rank == 1 and xi.c1a == 0 and xi.c1b == 0:
        mu = xi_plus.slope()
        return ConeRay.from_rational(mu.mu1, mu.mu2, 1, provenance), None
    warn = ("non-Hilbert character: emitting raw orthogonal-character "
            "coordinates, not an (H1, H2, B) class")
    vec = (xi_plus.rank, xi_plus.c1a, xi_plus.c1b)
    return ConeRay(primitive([frac(v) for v in vec]), f"ch{xi_plus}", tuple(provenance)), warn


@dataclass(frozen=True)
class Facet:
    normal: Tuple[int, int, int]
    rays: Tuple[int, ...]  # indices of rays lying on the facet

    def inequality(self) -> str:
        a, b, c = self.normal
        return f"{a}a + {b}b + {c}c >= 0"


def _cross(u: Sequence[int], v: Sequence[int]) -> Tuple[int, int, int]:
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def assemble_cone(rays: Sequence[ConeRay]) -> Tuple[List[ConeRay], List[Facet], List[str]]:
    """Extremal rays and facets of the cone spanned by the given rays.

    Exact arithmetic throughout: a facet is a pairwise cross product that
    is nonnegative on all rays (oriented positive on the ray sum), and a
    ray is extremal when it lies on at least two facets.  Returns a
    warning instead of guessing when a ray fails the two-facet test.
    """
    uniq: Dict[Tuple[int, int, int], ConeRay] = {}
    for r in rays:
        if r.vec in uniq:
            old = uniq[r.vec]
            uniq[r.vec] = ConeRay(r.vec, old.label, old.provenance + r.provenance)
        else:
            uniq[r.vec] = r
    vecs = list(uniq)
    for v in vecs:
        if tuple(-x for x in v) in uniq:
            raise NonSalientConeError(f"ray set contains +-{v}")
    rl = [uniq[v] for v in vecs]
    warnings: List[str] = []
    if len(vecs) < 3 or _span_rank(vecs) < 3:
        warnings.append("ray set does not span a full-dimensional cone")
        return list(rl), [], warnings
    total = tuple(sum(v[i] for v in vecs) for i in range(3))
    facets: List[Facet] = []
    seen_normals = set()
    n_rays = len(vecs)
    for i in range(n_rays):
        for j in range(i + 1, n_rays):
            nrm = _cross(vecs[i], vecs[j])
            if nrm == (0, 0, 0):
                continue
            nrm = primitive([Fraction(x) for x in nrm])
            for cand in (nrm, tuple(-x for x in nrm)):
                if cand in seen_normals:
                    continue
                if all(_dot(cand, v) >= 0 for v in vecs) and _dot(cand, total) > 0:
                    seen_normals.add(cand)
                    on = tuple(k for k, v in enumerate(vecs) if _dot(cand, v) == 0)
                    facets.append(Facet(cand, on))
    facet_count = [0] * n_rays
    for f in facets:
        for k in f.rays:
            facet_count[k] += 1
    extremal, index_map = [], {}
    for k, r in enumerate(rl):
        if facet_count[k] >= 2:
            index_map[k] = len(extremal)
            extremal.append(r)
    ext_vecs = [r.vec for r in extremal]
    for k, r in enumerate(rl):
        if k not in index_map and not _in_cone(vecs[k], ext_vecs):
            warnings.append(f"ray {r.label} is not covered by the facet "
                            "structure; cone may be incomplete")
    remapped = []
    for f in facets:
        kept = tuple(index_map[k] for k in f.rays if k in index_map)
        remapped.append(Facet(f.normal, kept))
    order = _cyclic_order(extremal, remapped)
    extremal = [extremal[i] for i in order]
    inv = {old: new for new, old in enumerate(order)}
    remapped = [Facet(f.normal, tuple(sorted(inv[k] for k in f.rays))) for f in remapped]
    remapped.sort(key=lambda f: f.rays)
    return extremal, remapped, warnings


def _span_rank(vecs: Sequence[Tuple[int, int, int]]) -> int:
    rank = 0
    basis: List[List[Fraction]] = []
    for v in vecs:
        w = [frac(x) for x in v]
        for b in basis:
            piv = next(i for i in range(3) if b[i] != 0)
            coeff = w[piv] / b[piv]
            w = [w[i] - coeff * b[i] for i in range(3)]
        if any(x != 0 for x in w):
            basis.append(w)
            rank += 1
    return rank


def _in_cone(v: Tuple[int, int, int], gens: Sequence[Tuple[int, int, int]]) -> bool:
    """Exact membership of v in the cone over gens (Caratheodory in 3D)."""
    from itertools import combinations
    for k in (1, 2, 3):
        for combo in combinations(gens, k):
            if _nonneg_solve(v, combo):
                return True
    return False


def _nonneg_solve(v, gens) -> bool:
    n = len(gens)
    rows = [[frac(g[i]) for g in gens] + [frac(v[i])] for i in range(3)]
    pivots, r = [], 0
    for c in range(n):
        piv = next((i for i in range(r, 3) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(3):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [rows[i][j] - f * rows[r][j] for j in range(n + 1)]
        pivots.append(c)
        r += 1
        if r == 3:
            break
    for i in range(r, 3):
        if rows[i][n] != 0:
            return False
    if len(pivots) < n:
        return False  # free variables; smaller subsets cover those cases
    coeffs = [rows[i][n] for i in range(len(pivots))]
    return all(c >= 0 for c in coeffs)


def _cyclic_order(rays: Sequence[ConeRay], facets: Sequence[Facet]) -> List[int]:
    """Order ray indices along the facet adjacency cycle when possible."""
    if not rays:
        return []
    adj: Dict[int, List[int]] = {i: [] for i in range(len(rays))}
    for f in facets:
        if len(f.rays) == 2:
            a, b = f.rays
            adj[a].append(b)
            adj[b].append(a)
    if any(len(v) != 2 for v in adj.values()):
        return list(range(len(rays)))
    start = min(range(len(rays)), key=lambda i: rays[i].vec)
    order = [start]
    prev = None
    while len(order) < len(rays):
        nxts = [k for k in adj[order[-1]] if k != prev]
        prev = order[-1]
        order.append(nxts[0])
    return order


def ns_basis(xi: ChernCharacter) -> Tuple[ChernCharacter, ChernCharacter, ChernCharacter]:
    """The characters zeta_0, zeta_a, zeta_b spanning xi-perp over NS.

    zeta_0 = (r, (0,0), -chi(xi)); the rank-zero classes complete the basis
    and each lies in xi-perp for the symmetric pairing.
    """
    if xi.rank <= 0:
        raise ValueError("basis defined for positive-rank characters")
    r = xi.rank
    zeta0 = ChernCharacter(r, 0, 0, -xi.euler())
    zeta_a = ChernCharacter(0, r, 0, -r - xi.c1b)
    zeta_b = ChernCharacter(0, 0, r, -r - xi.c1a)
    return zeta0, zeta_a, zeta_b


# ---------------------------------------------------------------------------
# the full pipeline


@dataclass
class ConeResult:
    xi: ChernCharacter
    n: Optional[int]
    pairs: List[ExtremalPair]
    rays: List[ConeRay]
    facets: List[Facet]
    warnings: List[str] = field(default_factory=list)
    raw_mode: bool = False


def effective_cone_hilbert(n: int, config: Optional[Config] = None) -> ConeResult:
    """Extremal rays and facets of the effective cone of Hilb^n(P1xP1)."""
    config = config or Config()
    if n < 2:
        xi = hilbert_character(max(n, 0))
        return ConeResult(xi, n, [], [], [],
                          warnings=[f"n={n} is degenerate (the Hilbert scheme "
                                    "is a point or the surface itself)"])
    xi = hilbert_character(n)
    db = database_for(xi, config)
    pairs = extremal_pairs(xi, db, config)
    rays: List[ConeRay] = [B_RAY]
    warnings: List[str] = []
    for p in pairs:
        ray, warn = ray_of_character(p.character, xi,
                                     provenance=(f"pair ({p.alpha},{p.beta})",))
        rays.append(ray)
        if warn:
            warnings.append(warn)
        # mirror closure: the cone is symmetric for symmetric xi
        m = p.character.mirror()
        mray, _ = ray_of_character(m, xi, provenance=(
            f"mirror of pair ({p.alpha},{p.beta})",))
        rays.append(mray)
    extremal, facets, cone_warnings = assemble_cone(rays)
    warnings.extend(cone_warnings)
    return ConeResult(xi, n, pairs, extremal, facets, warnings)


def effective_cone_character(xi: ChernCharacter,
                             config: Optional[Config] = None) -> ConeResult:
    """Pipeline for a general positive-rank character.

    Hilbert characters get the full (H1, H2, B) treatment; anything else
    reports raw orthogonal characters as ray coordinates with a warning.
    """
    config = config or Config()
    if xi.rank == 1 and xi.c1a == 0 and xi.c1b == 0:
        return effective_cone_hilbert(int(-xi.ch2), config)
    db = database_for(xi, config)
    pairs = extremal_pairs(xi, db, config)
    rays = []
    warnings = []
    for p in pairs:
        ray, warn = ray_of_character(p.character, xi,
                                     provenance=(f"pair ({p.alpha},{p.beta})",))
        rays.append(ray)
        if warn and warn not in warnings:
            warnings.append(warn)
    return ConeResult(xi, None, pairs, rays, [], warnings, raw_mode=True)
