r"""Rudakov's delta-surface and the existence test for moduli spaces.

Each exceptional bundle E cuts out a piece of the stability boundary:

    delta_E(mu) = Q_{E^*}(mu)      if mu11(E) - 4 < mu11(mu), gamma(mu) < gamma(E)
                  Q_{E^*(K)}(mu)   if mu11(mu) < mu11(E) + 4, gamma(E) < gamma(mu)
                  0                otherwise

with gamma-bar compared lexicographically on (mu11, mu12), and
Q_xi(mu) = P(mu(xi) + mu) - Delta(xi) the orthogonal surface.  The full
surface is the supremum over the database; only bundles with
|mu11(E) - mu11(mu)| < 4 can contribute, which keeps the maximum finite.

A character of positive rank has a nonempty (positive-dimensional) moduli
space iff r*mu11 and chi are integers and Delta >= delta(mu).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple

from .chern import ChernCharacter, K_CHAR, Slope, hilbert_P
from .exceptional import Database, ExceptionalBundle


class CoverageError(ValueError):
    """Requested slope too close to the database window boundary."""


def q_eval(xi: ChernCharacter, mu: Slope) -> Fraction:
    """Value of the orthogonal surface Q_xi at mu (its Delta coordinate)."""
    s = xi.slope()
    return hilbert_P(s.mu1 + mu.mu1, s.mu2 + mu.mu2) - xi.discriminant()


def delta_E(E: ExceptionalBundle, mu: Slope) -> Fraction:
    """Contribution of a single exceptional bundle to the delta-surface."""
    value, _ = delta_E_branch(E, mu)
    return value


def delta_E_branch(E: ExceptionalBundle, mu: Slope) -> Tuple[Fraction, str]:
    es = E.slope
    ek = es.gamma_key()
    mk = mu.gamma_key()
    if es.mu11 - 4 < mu.mu11 and mk < ek:
        return q_eval(E.dual_ch(), mu), "chi_E_mu"
    if mu.mu11 < es.mu11 + 4 and ek < mk:
        return q_eval(E.dual_ch().twist(K_CHAR), mu), "chi_mu_E"
    return Fraction(0), "zero"


@dataclass(frozen=True)
class DeltaValue:
    value: Fraction
    attainer: Optional[ExceptionalBundle]
    near_rank_bound: bool


def delta_surface(mu: Slope, db: Database) -> DeltaValue:
    """sup over the database of delta_E(mu), with the attaining bundle.

    Candidates are the bundles with |mu11 - mu11(mu)| < 4 (the only ones
    whose branch windows reach mu).  A float prescreen narrows the exact
    comparisons to near-maximal candidates.
    """
    x0, x1, y0, y1 = db.params.window
    if not (x0 + 4 <= mu.mu1 <= x1 - 4 and y0 + 4 <= mu.mu2 <= y1 - 4):
        raise CoverageError(
            f"slope {mu} within 4 of the database window {db.params.window}")
    candidates = db.with_mu11_near(mu.mu11, 4)
    best = Fraction(0)
    attainer: Optional[ExceptionalBundle] = None
    # branch selection is exact; floats only shortlist near-maximal values
    mk = mu.gamma_key()
    m1, m2 = float(mu.mu1), float(mu.mu2)
    shortlist = []
    approx_best = 0.0
    for E in candidates:
        es = E.slope
        ek = es.gamma_key()
        f1, f2 = float(es.mu1), float(es.mu2)
        d = float(E.discriminant())
        if es.mu11 - 4 < mu.mu11 and mk < ek:
            v = (m1 - f1 + 1.0) * (m2 - f2 + 1.0) - d
        elif mu.mu11 < es.mu11 + 4 and ek < mk:
            v = (f1 - m1 + 1.0) * (f2 - m2 + 1.0) - d
        else:
            continue
        if v > approx_best:
            approx_best = v
        shortlist.append((v, E))
    for v, E in shortlist:
        if v < approx_best - 1e-6:
            continue
        val, branch = delta_E_branch(E, mu)
        if branch == "zero":
            continue
        if val > best or (val == best and attainer is None):
            best = val
            attainer = E
    near_bound = attainer is not None and attainer.rank >= db.params.rank_bound - 2
    return DeltaValue(best, attainer, near_bound)


def moduli_nonempty(xi: ChernCharacter, db: Database) -> bool:
    """Rudakov's criterion for a positive-dimensional moduli space."""
    if xi.rank <= 0:
        raise ValueError("criterion applies to positive-rank characters")
    mu = xi.slope()
    if (xi.rank * mu.mu11).denominator != 1:
        return False
    chi = xi.euler()
    if chi.denominator != 1:
        return False
    return xi.discriminant() >= delta_surface(mu, db).value
