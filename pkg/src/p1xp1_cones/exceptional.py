r"""Exceptional bundles on P1 x P1: generation, mutation, coils, completion.

Everything happens at the level of Chern characters.  An exceptional slope
(mu1, mu2) determines its bundle: the rank is the denominator of
mu1 + mu2, the discriminant is (r^2 - 1) / (2 r^2), and ch2 follows.  The
mutation of an exceptional pair (E0, E1) only needs chi(E0, E1) and ranks:
the mutated character is +-(chi * ch(pivot) - ch(moved)), sign fixed by
rank positivity, except that chi <= 0 always takes the extension branch.

The database is the mutation closure of the line bundles in a padded
slope window, capped by rank.  It is deterministic, and persists to a
small self-describing text file so repeated runs skip regeneration.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .chern import ChernCharacter, Slope, frac, rel_chi

IntKey = Tuple[int, int, int, int]


class InvalidExceptionalError(ValueError):
    """Data does not satisfy the exceptional-bundle invariants."""


class MalformedPairError(ValueError):
    """Mutation of a pair whose ranks admit no positive-rank outcome."""


class ResourceBoundError(RuntimeError):
    """Database closure exceeded the configured element cap."""


class CompletionNotFoundError(LookupError):
    """No completion pair exists within the database bounds."""


@dataclass(frozen=True, order=True)
class ExceptionalBundle:
    """An exceptional bundle, stored by its integral Chern character."""

    rank: int
    c1a: int
    c1b: int
    ch2: int

    @property
    def ch(self) -> ChernCharacter:
        return ChernCharacter(self.rank, self.c1a, self.c1b, self.ch2)

    @property
    def slope(self) -> Slope:
        return Slope(Fraction(self.c1a, self.rank), Fraction(self.c1b, self.rank))

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.rank, self.c1a, self.c1b)

    def discriminant(self) -> Fraction:
        return Fraction(self.rank * self.rank - 1, 2 * self.rank * self.rank)

    def dual_ch(self) -> ChernCharacter:
        return self.ch.dual()

    def label(self) -> str:
        if self.rank == 1:
            return f"O({self.c1a},{self.c1b})"
        return f"E_{{{Fraction(self.c1a, self.rank)},{Fraction(self.c1b, self.rank)}}}"

    def __str__(self) -> str:
        return self.label()


def line_bundle(a: int, b: int) -> ExceptionalBundle:
    return ExceptionalBundle(1, a, b, a * b)


def exceptional_from_slope(mu: Slope) -> ExceptionalBundle:
    """The unique exceptional bundle with the given exceptional slope.

    The rank is the denominator of mu_{1,1}; the induced first Chern class
    must be integral with coordinates coprime to the rank, and ch2 (from the
    discriminant (r^2-1)/(2r^2)) must come out integral, otherwise the slope
    is not exceptional and the call raises.
    """
    mu11 = mu.mu11
    r = mu11.denominator
    c1a = mu.mu1 * r
    c1b = mu.mu2 * r
    if c1a.denominator != 1 or c1b.denominator != 1:
        raise InvalidExceptionalError(f"slope {mu} has non-integral c1 at rank {r}")
    a, b = int(c1a), int(c1b)
    if gcd(a, r) != 1 or gcd(b, r) != 1:
        raise InvalidExceptionalError(f"slope {mu}: c1 not coprime to rank {r}")
    # ch2 = ab/r - (r^2-1)/(2r)
    ch2 = Fraction(a * b, r) - Fraction(r * r - 1, 2 * r)
    if ch2.denominator != 1:
        raise InvalidExceptionalError(f"slope {mu}: non-integral ch2")
    E = ExceptionalBundle(r, a, b, int(ch2))
    validate_bundle(E)
    return E


def validate_bundle(E: ExceptionalBundle) -> None:
    """Check all numeric exceptional-bundle invariants; raise when violated."""
    r = E.rank
    if r <= 0:
        raise InvalidExceptionalError(f"nonpositive rank in {E}")
    mu11 = Fraction(E.c1a + E.c1b, r)
    if mu11.denominator != r:
        raise InvalidExceptionalError(f"{E}: rank is not the denominator of mu11")
    if gcd(E.c1a, r) != 1 or gcd(E.c1b, r) != 1:
        raise InvalidExceptionalError(f"{E}: c1 not coprime to rank")
    if E.ch.discriminant() != E.discriminant():
        raise InvalidExceptionalError(f"{E}: discriminant is not (r^2-1)/(2r^2)")
    if rel_chi(E.ch, E.ch) != 1:
        raise InvalidExceptionalError(f"{E}: chi(E,E) != 1")


def bundle_from_ch(ch: ChernCharacter) -> ExceptionalBundle:
    if not ch.is_integral():
        raise InvalidExceptionalError(f"non-integral character {ch}")
    E = ExceptionalBundle(int(ch.rank), int(ch.c1a), int(ch.c1b), int(ch.ch2))
    validate_bundle(E)
    return E


class MutationKind(Enum):
    REGULAR = "regular"
    REBOUND = "rebound"
    EXTENSION = "extension"


@dataclass(frozen=True)
class ExceptionalPair:
    """An exceptional pair (first, second): chi(second, first) = 0."""

    first: ExceptionalBundle
    second: ExceptionalBundle

    def __post_init__(self):
        if rel_chi(self.second.ch, self.first.ch) != 0:
            raise MalformedPairError(
                f"({self.first},{self.second}) is not chi-orthogonal as a pair")

    def __str__(self) -> str:
        return f"({self.first},{self.second})"


def _mutated_character(pivot: ChernCharacter, moved: ChernCharacter,
                       chi: Fraction) -> Tuple[ChernCharacter, MutationKind]:
    """Character of the mutation of `moved` across `pivot`.

    For chi > 0 the result is +-(chi*pivot - moved) with the sign making the
    rank positive (regular / rebound); chi <= 0 is the extension branch
    moved - chi*pivot.  Zero resulting rank means the pair is malformed.
    """
    if chi <= 0:
        return moved - pivot.scaled(chi), MutationKind.EXTENSION
    cand = pivot.scaled(chi) - moved
    if cand.rank > 0:
        return cand, MutationKind.REGULAR
    if cand.rank < 0:
        return -cand, MutationKind.REBOUND
    raise MalformedPairError("mutation produces rank zero")


def classify_mutation(pair: ExceptionalPair) -> MutationKind:
    """Kind of the left mutation of the pair, by rank positivity."""
    chi = rel_chi(pair.first.ch, pair.second.ch)
    _, kind = _mutated_character(pair.first.ch, pair.second.ch, chi)
    return kind


def left_mutation_ch(E0: ChernCharacter, E1: ChernCharacter) -> Tuple[ChernCharacter, MutationKind]:
    """ch(L_{E0} E1) with the mutation kind."""
    return _mutated_character(E0, E1, rel_chi(E0, E1))


def right_mutation_ch(E0: ChernCharacter, E1: ChernCharacter) -> Tuple[ChernCharacter, MutationKind]:
    """ch(R_{E1} E0) with the mutation kind."""
    return _mutated_character(E1, E0, rel_chi(E0, E1))


def left_mutation(pair: ExceptionalPair) -> ExceptionalPair:
    """L(E0, E1) = (L_{E0} E1, E0)."""
    ch, _ = left_mutation_ch(pair.first.ch, pair.second.ch)
    return ExceptionalPair(bundle_from_ch(ch), pair.first)


def right_mutation(pair: ExceptionalPair) -> ExceptionalPair:
    """R(E0, E1) = (E1, R_{E1} E0)."""
    ch, _ = right_mutation_ch(pair.first.ch, pair.second.ch)
    return ExceptionalPair(pair.second, bundle_from_ch(ch))


@dataclass(frozen=True)
class Coil:
    """A length-four exceptional collection, checked at the chi level."""

    terms: Tuple[ExceptionalBundle, ExceptionalBundle, ExceptionalBundle, ExceptionalBundle]

    def __post_init__(self):
        t = self.terms
        if len(t) != 4:
            raise ValueError("a coil has four terms")
        for j in range(4):
            for i in range(j):
                if rel_chi(t[j].ch, t[i].ch) != 0:
                    raise MalformedPairError(
                        f"coil chi-orthogonality fails between {t[j]} and {t[i]}")

    def characters(self) -> Tuple[ChernCharacter, ...]:
        return tuple(b.ch for b in self.terms)

    def __str__(self) -> str:
        return "{" + ",".join(str(b) for b in self.terms) + "}"


def coil_characters_valid(chs: Sequence[ChernCharacter]) -> bool:
    """chi-orthogonality test for an ordered tuple of characters."""
    for j in range(len(chs)):
        for i in range(j):
            if rel_chi(chs[j], chs[i]) != 0:
                return False
    return True


def mutate_coil_left(coil: Coil) -> Coil:
    """(E0,..,E3) -> (L0 L1 L2 E3, L0 L1 E2, L0 E1, E0)."""
    chs = [b.ch for b in coil.terms]
    out: List[ChernCharacter] = []
    for p in range(4):
        cur = chs[p]
        for i in range(p - 1, -1, -1):
            cur, _ = left_mutation_ch(chs[i], cur)
        out.append(cur)
    out.reverse()
    return Coil(tuple(bundle_from_ch(c) for c in out))


def mutate_coil_right(coil: Coil) -> Coil:
    """(E0,..,E3) -> (E3, R3 E2, R3 R2 E1, R3 R2 R1 E0)."""
    chs = [b.ch for b in coil.terms]
    out: List[ChernCharacter] = []
    for p in range(3, -1, -1):
        cur = chs[p]
        for i in range(p + 1, 4):
            cur, _ = right_mutation_ch(cur, chs[i])
        out.append(cur)
    return Coil(tuple(bundle_from_ch(c) for c in out))


def mutated_coil_right_ch(chs: Sequence[ChernCharacter]) -> List[ChernCharacter]:
    """Right mutation of an arbitrary character coil (no validation)."""
    out: List[ChernCharacter] = []
    for p in range(len(chs) - 1, -1, -1):
        cur = chs[p]
        for i in range(p + 1, len(chs)):
            cur, _ = right_mutation_ch(cur, chs[i])
        out.append(cur)
    return out


# ---------------------------------------------------------------------------
# database generation


def _rel_chi_int(e: IntKey, f: IntKey) -> int:
    """rel_chi on integer (r, a, b, z) tuples; hot path of the closure."""
    re, ae, be, ze = e
    rf, af, bf, zf = f
    return (re * zf + rf * ze - ae * bf - be * af
            + re * af - rf * ae + re * bf - rf * be + re * rf)


Window = Tuple[Fraction, Fraction, Fraction, Fraction]  # x0, x1, y0, y1


@dataclass(frozen=True)
class DatabaseParams:
    rank_bound: int
    window: Window  # already padded
    slope_reach: int = 8

    def covers(self, other: "DatabaseParams") -> bool:
        sx0, sx1, sy0, sy1 = self.window
        ox0, ox1, oy0, oy1 = other.window
        return (self.rank_bound >= other.rank_bound
                and self.slope_reach >= other.slope_reach
                and sx0 <= ox0 and sx1 >= ox1 and sy0 <= oy0 and sy1 >= oy1)


class Database:
    """Mutation closure of the line bundles in a slope window."""

    SCHEMA = "p1xp1-exceptional-db v1"

    def __init__(self, params: DatabaseParams, bundles: Iterable[ExceptionalBundle]):
        self.params = params
        self._by_key: Dict[Tuple[int, int, int], ExceptionalBundle] = {}
        for b in bundles:
            self._by_key[b.key] = b
        self._sorted: Optional[List[ExceptionalBundle]] = None
        self._mu11_sorted: Optional[List[Tuple[Fraction, ExceptionalBundle]]] = None

    # -- queries ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._by_key)

    def __contains__(self, b: ExceptionalBundle) -> bool:
        return b.key in self._by_key

    def bundles(self) -> List[ExceptionalBundle]:
        """Canonical listing, sorted by (rank, mu1, mu2)."""
        if self._sorted is None:
            self._sorted = sorted(
                self._by_key.values(),
                key=lambda b: (b.rank, Fraction(b.c1a, b.rank), Fraction(b.c1b, b.rank)))
        return self._sorted

    def find_slope(self, mu: Slope) -> Optional[ExceptionalBundle]:
        r = mu.mu11.denominator
        a, b = mu.mu1 * r, mu.mu2 * r
        if a.denominator != 1 or b.denominator != 1:
            return None
        return self._by_key.get((r, int(a), int(b)))

    def with_mu11_near(self, mu11: Fraction, radius: int = 4) -> List[ExceptionalBundle]:
        """Bundles E with |mu11(E) - mu11| < radius (closed at ties)."""
        import bisect
        if self._mu11_sorted is None:
            self._mu11_sorted = sorted(
                ((Fraction(b.c1a + b.c1b, b.rank), b) for b in self._by_key.values()),
                key=lambda t: t[0])
        keys = [t[0] for t in self._mu11_sorted]
        lo = bisect.bisect_left(keys, mu11 - radius)
        hi = bisect.bisect_right(keys, mu11 + radius)
        return [self._mu11_sorted[i][1] for i in range(lo, hi)]

    # -- generation ----------------------------------------------------------

    @classmethod
    def generate(cls, rank_bound: int, window: Window, slope_reach: int = 8,
                 element_cap: int = 200000) -> "Database":
        import math
        import numpy as np

        x0, x1, y0, y1 = window
        params = DatabaseParams(rank_bound, window, slope_reach)
        # integer window multiples for the vectorized membership test
        wx0n, wx0d = x0.numerator, x0.denominator
        wx1n, wx1d = x1.numerator, x1.denominator
        wy0n, wy0d = y0.numerator, y0.denominator
        wy1n, wy1d = y1.numerator, y1.denominator

        members: Dict[Tuple[int, int, int], IntKey] = {}
        queue: List[IntKey] = []
        # mu11 buckets holding (r, a, b, z, insertion_index) rows
        buckets: Dict[int, List[Tuple[int, int, int, int, int]]] = {}
        arrays: Dict[int, "np.ndarray"] = {}

        def bucket_of(r: int, a: int, b: int) -> int:
            return (a + b) // r  # floor of mu11

        def insert(r: int, a: int, b: int, z: int) -> None:
            members[(r, a, b)] = (r, a, b, z)
            idx = len(queue)
            queue.append((r, a, b, z))
            bk = bucket_of(r, a, b)
            buckets.setdefault(bk, []).append((r, a, b, z, idx))
            arrays.pop(bk, None)
            if len(members) > element_cap:
                raise ResourceBoundError(
                    f"exceptional database exceeded cap {element_cap}")

        for a in range(math.ceil(x0), math.floor(x1) + 1):
            for b in range(math.ceil(y0), math.floor(y1) + 1):
                insert(1, a, b, a * b)

        def try_insert(r: int, a: int, b: int, z: int) -> None:
            if r <= 0 or r > rank_bound or (r, a, b) in members:
                return
            if not (wx0n * r <= a * wx0d and a * wx1d <= wx1n * r
                    and wy0n * r <= b * wy0d and b * wy1d <= wy1n * r):
                return
            try:
                # chi-orthogonality is weaker than true exceptionality, so a
                # spurious pair may mutate to a non-exceptional character;
                # those are screened out here instead of entering the closure.
                validate_bundle(ExceptionalBundle(r, a, b, z))
            except InvalidExceptionalError:
                return
            insert(r, a, b, z)

        def rows_near(mu11_num: int, mu11_den: int) -> "np.ndarray":
            lo = (mu11_num - slope_reach * mu11_den) // mu11_den - 1
            hi = (mu11_num + slope_reach * mu11_den) // mu11_den + 1
            chunks = []
            for bk in range(lo, hi + 1):
                if bk not in buckets:
                    continue
                if bk not in arrays:
                    arrays[bk] = np.asarray(buckets[bk], dtype=np.int64)
                chunks.append(arrays[bk])
            if not chunks:
                return np.empty((0, 5), dtype=np.int64)
            return np.concatenate(chunks) if len(chunks) > 1 else chunks[0]

        idx = 0
        while idx < len(queue):
            e = queue[idx]
            re_, ae, be, ze = e
            rows = rows_near(ae + be, re_)
            rows = rows[rows[:, 4] < idx]  # one pass per unordered pair
            if rows.size:
                R, A, B, Z = rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]
                reach_ok = np.abs((ae + be) * R - (A + B) * re_) \
                    <= slope_reach * re_ * R
                rows_f = rows[reach_ok]
                if rows_f.size:
                    R, A, B, Z = rows_f[:, 0], rows_f[:, 1], rows_f[:, 2], rows_f[:, 3]
                    # chi(arr, e) and chi(e, arr)
                    chi_fe = (R * ze + re_ * Z - A * be - B * ae
                              + R * ae - re_ * A + R * be - re_ * B + R * re_)
                    chi_ef = (re_ * Z + R * ze - ae * B - be * A
                              + re_ * A - R * ae + re_ * B - R * be + re_ * R)
                    # pair (f, e): chi(e, f)=0 must vanish; chi of the pair
                    # in collection order is chi(f, e), and vice versa.
                    for pair_mask, chi in ((chi_ef == 0, chi_fe),
                                           (chi_fe == 0, chi_ef)):
                        sel = np.nonzero(pair_mask)[0]
                        if not sel.size:
                            continue
                        c = chi[sel]
                        Rs, As, Bs, Zs = R[sel], A[sel], B[sel], Z[sel]
                        first_is_f = chi is chi_fe
                        if first_is_f:
                            r1, a1, b1, z1 = Rs, As, Bs, Zs
                            r2 = np.full_like(Rs, re_)
                            a2, b2, z2 = (np.full_like(Rs, v) for v in (ae, be, ze))
                        else:
                            r2, a2, b2, z2 = Rs, As, Bs, Zs
                            r1 = np.full_like(Rs, re_)
                            a1, b1, z1 = (np.full_like(Rs, v) for v in (ae, be, ze))
                        cands = []
                        # left mutation: +-(chi*first - second); ext when chi<=0
                        cands.append((c * r1 - r2, c * a1 - a2, c * b1 - b2, c * z1 - z2))
                        # right mutation: +-(chi*second - first)
                        cands.append((c * r2 - r1, c * a2 - a1, c * b2 - b1, c * z2 - z1))
                        for rr, ra, rb, rz in cands:
                            sign = np.where(rr >= 0, 1, -1)
                            rr, ra, rb, rz = sign * rr, sign * ra, sign * rb, sign * rz
                            keep = (rr > 0) & (rr <= rank_bound)
                            for t in np.nonzero(keep)[0]:
                                try_insert(int(rr[t]), int(ra[t]),
                                           int(rb[t]), int(rz[t]))
            idx += 1

        return cls(params, (ExceptionalBundle(*k) for k in members.values()))

    # -- persistence ----------------------------------------------------------

    def dumps(self) -> str:
        p = self.params
        lines = [f"# {self.SCHEMA}",
                 f"rank_bound={p.rank_bound}",
                 f"window={p.window[0]} {p.window[1]} {p.window[2]} {p.window[3]}",
                 f"slope_reach={p.slope_reach}",
                 f"count={len(self)}"]
        for b in self.bundles():
            lines.append(f"{b.rank} {b.c1a} {b.c1b} {b.ch2}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Database":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != f"# {cls.SCHEMA}":
            raise ValueError("unrecognized database file")
        header = {}
        body_start = 1
        for i, ln in enumerate(lines[1:], start=1):
            if "=" in ln:
                k, v = ln.split("=", 1)
                header[k] = v
                body_start = i + 1
            else:
                break
        window = tuple(Fraction(t) for t in header["window"].split())
        params = DatabaseParams(int(header["rank_bound"]), window,  # type: ignore[arg-type]
                                int(header.get("slope_reach", 8)))
        bundles = []
        for ln in lines[body_start:]:
            r, a, b, z = (int(t) for t in ln.split())
            bundles.append(ExceptionalBundle(r, a, b, z))
        return cls(params, bundles)

    def save(self, path: str) -> None:
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="ascii") as fh:
            fh.write(self.dumps())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str) -> "Database":
        with open(path, encoding="ascii") as fh:
            return cls.loads(fh.read())


_MEMORY_CACHE: Dict[Tuple, Database] = {}


def cache_filename(params: DatabaseParams) -> str:
    x0, x1, y0, y1 = params.window
    token = f"r{params.rank_bound}_w{x0}_{x1}_{y0}_{y1}_s{params.slope_reach}"
    return "excdb_" + token.replace("/", "over").replace("-", "m") + ".txt"


def get_database(rank_bound: int, window: Window, slope_reach: int = 8,
                 element_cap: int = 200000,
                 cache_dir: Optional[str] = None) -> Database:
    """Database for the padded window, via memory and disk caches.

    Any cached database whose parameters cover the request is reused.
    """
    window = tuple(frac(v) for v in window)  # type: ignore[assignment]
    want = DatabaseParams(rank_bound, window, slope_reach)  # type: ignore[arg-type]
    for db in _MEMORY_CACHE.values():
        if db.params.covers(want):
            return db
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, cache_filename(want))
        if os.path.exists(path):
            db = Database.load(path)
            _MEMORY_CACHE[(db.params.rank_bound, db.params.window, db.params.slope_reach)] = db
            return db
    db = Database.generate(rank_bound, window, slope_reach, element_cap)
    _MEMORY_CACHE[(want.rank_bound, want.window, want.slope_reach)] = db
    if cache_dir:
        db.save(os.path.join(cache_dir, cache_filename(want)))
    return db


# ---------------------------------------------------------------------------
# completion


def completion_candidates(E_alpha: ExceptionalBundle, E_beta: ExceptionalBundle,
                          db: Database) -> List[Tuple[ExceptionalBundle, ExceptionalBundle]]:
    """Ordered pairs (P, Q) with (E_alpha, E_beta, P, Q) a chi-coil.

    The five vanishings are chi(P, E_alpha) = chi(P, E_beta) =
    chi(Q, E_alpha) = chi(Q, E_beta) = chi(Q, P) = 0.
    """
    ea, eb = E_alpha.ch, E_beta.ch
    third = [c for c in db.bundles()
             if c.key not in (E_alpha.key, E_beta.key)
             and rel_chi(c.ch, ea) == 0 and rel_chi(c.ch, eb) == 0]
    out = []
    for P in third:
        for Q in third:
            if P.key == Q.key:
                continue
            if rel_chi(Q.ch, P.ch) == 0:
                out.append((P, Q))
    out.sort(key=lambda pq: (pq[0].rank + pq[1].rank,
                             pq[0].slope.gamma_key(), pq[1].slope.gamma_key()))
    return out


def complete_pair_to_coil(pair: ExceptionalPair, db: Database,
                          xi: Optional[ChernCharacter] = None,
                          config=None) -> Coil:
    """Complete an exceptional pair to a coil (E_alpha, E_beta, P, Q).

    Without a target character the minimally ranked candidate is returned
    (ties by slope).  With ``xi`` the choice is delegated to the resolution
    machinery so that the completed coil is the one the Beilinson recipe
    actually resolves xi with.
    """
    if xi is not None:
        from .resolver import find_resolution
        from .config import Config
        res = find_resolution(xi, pair.first, pair.second, db,
                              config or Config())
        return Coil((pair.first, pair.second, res.f_minus1, res.f_zero))
    cands = completion_candidates(pair.first, pair.second, db)
    if not cands:
        raise CompletionNotFoundError(
            f"no completion of {pair} within database bounds")
    P, Q = cands[0]
    return Coil((pair.first, pair.second, P, Q))
