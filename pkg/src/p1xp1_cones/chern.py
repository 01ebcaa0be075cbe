r"""Exact arithmetic on Chern characters of sheaves on P1 x P1.

A character is a triple (ch0, ch1, ch2) with ch1 written in the basis of
the two rulings, so a line bundle O(a,b) has character (1, (a,b), ab).
Everything is computed over ``fractions.Fraction``; no floating point is
used anywhere, so equality tests (needed for cone corners like (12/5, 6/5))
are exact.

The conventions:

* slope mu = ch1/ch0, a pair (mu1, mu2);
* discriminant Delta = mu1*mu2 - ch2/ch0 (the self-intersection of
  (mu1, mu2) on the quadric is 2*mu1*mu2);
* Riemann-Roch: chi(E) = ch2 + c1a + c1b + rank, equivalently
  r*(P(mu) - Delta) with P(x, y) = (x+1)*(y+1);
* relative Euler characteristic
  chi(E, F) = r(E) r(F) (P(mu(F) - mu(E)) - Delta(E) - Delta(F)),
  the sign that reproduces the worked slope computations, and the
  symmetric pairing (E, F) = chi(E ox F).

Both ``rel_chi`` and ``sym_pairing`` are evaluated through coordinate
formulas that are bilinear in (rank, c1, ch2) and therefore remain valid
for rank-zero classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

RatLike = Union[int, Fraction]


def frac(x: RatLike) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def hilbert_P(x: RatLike, y: RatLike) -> Fraction:
    """Euler characteristic (x+1)(y+1) of the line bundle O(x, y)."""
    return (frac(x) + 1) * (frac(y) + 1)


class RankZeroError(ZeroDivisionError):
    """Slope or discriminant requested for a rank-zero character."""


@dataclass(frozen=True, order=True)
class Slope:
    """A slope (mu1, mu2), i.e. c1/rank in the ruling basis."""

    mu1: Fraction
    mu2: Fraction

    def __init__(self, mu1: RatLike, mu2: RatLike):
        object.__setattr__(self, "mu1", frac(mu1))
        object.__setattr__(self, "mu2", frac(mu2))

    @property
    def mu11(self) -> Fraction:
        """Slope against the polarization O(1,1)."""
        return self.mu1 + self.mu2

    @property
    def mu12(self) -> Fraction:
        """Slope against the polarization O(1,2)."""
        return self.mu1 + 2 * self.mu2

    def gamma_key(self) -> Tuple[Fraction, Fraction]:
        """Total-order key used for gamma-bar comparisons of slopes."""
        return (self.mu11, self.mu12)

    def mirror(self) -> "Slope":
        return Slope(self.mu2, self.mu1)

    def __add__(self, other: "Slope") -> "Slope":
        return Slope(self.mu1 + other.mu1, self.mu2 + other.mu2)

    def __sub__(self, other: "Slope") -> "Slope":
        return Slope(self.mu1 - other.mu1, self.mu2 - other.mu2)

    def __neg__(self) -> "Slope":
        return Slope(-self.mu1, -self.mu2)

    def __str__(self) -> str:
        return f"({self.mu1},{self.mu2})"


@dataclass(frozen=True, order=True)
class ChernCharacter:
    """Exact Chern character (rank, (c1a, c1b), ch2)."""

    rank: Fraction
    c1a: Fraction
    c1b: Fraction
    ch2: Fraction

    def __init__(self, rank: RatLike, c1a: RatLike, c1b: RatLike, ch2: RatLike):
        object.__setattr__(self, "rank", frac(rank))
        object.__setattr__(self, "c1a", frac(c1a))
        object.__setattr__(self, "c1b", frac(c1b))
        object.__setattr__(self, "ch2", frac(ch2))

    @classmethod
    def line(cls, a: RatLike, b: RatLike) -> "ChernCharacter":
        """Character of the line bundle O(a, b)."""
        return cls(1, a, b, frac(a) * frac(b))

    @classmethod
    def from_slope_discriminant(cls, rank: RatLike, slope: Slope,
                                delta: RatLike) -> "ChernCharacter":
        """Rebuild (rank, c1, ch2) from rank, slope and discriminant."""
        r = frac(rank)
        if r == 0:
            raise RankZeroError("rank must be nonzero")
        ch2 = r * (slope.mu1 * slope.mu2 - frac(delta))
        return cls(r, r * slope.mu1, r * slope.mu2, ch2)

    def slope(self) -> Slope:
        if self.rank == 0:
            raise RankZeroError("slope of a rank-zero character")
        return Slope(self.c1a / self.rank, self.c1b / self.rank)

    def discriminant(self) -> Fraction:
        if self.rank == 0:
            raise RankZeroError("discriminant of a rank-zero character")
        mu = self.slope()
        return mu.mu1 * mu.mu2 - self.ch2 / self.rank

    def euler(self) -> Fraction:
        """chi of the character, by Riemann-Roch; additive in the character."""
        return self.ch2 + self.c1a + self.c1b + self.rank

    def dual(self) -> "ChernCharacter":
        return ChernCharacter(self.rank, -self.c1a, -self.c1b, self.ch2)

    def twist(self, line: "ChernCharacter") -> "ChernCharacter":
        """Tensor with a line-bundle character (rank 1, discriminant 0)."""
        if line.rank != 1 or line.discriminant() != 0:
            raise ValueError(f"twist by non-line-bundle character {line}")
        a, b = line.c1a, line.c1b
        return ChernCharacter(
            self.rank,
            self.c1a + self.rank * a,
            self.c1b + self.rank * b,
            self.ch2 + self.c1a * b + self.c1b * a + self.rank * a * b,
        )

    def mirror(self) -> "ChernCharacter":
        """Swap the two rulings."""
        return ChernCharacter(self.rank, self.c1b, self.c1a, self.ch2)

    def scaled(self, k: RatLike) -> "ChernCharacter":
        k = frac(k)
        return ChernCharacter(k * self.rank, k * self.c1a, k * self.c1b, k * self.ch2)

    def __add__(self, other: "ChernCharacter") -> "ChernCharacter":
        return ChernCharacter(self.rank + other.rank, self.c1a + other.c1a,
                              self.c1b + other.c1b, self.ch2 + other.ch2)

    def __sub__(self, other: "ChernCharacter") -> "ChernCharacter":
        return ChernCharacter(self.rank - other.rank, self.c1a - other.c1a,
                              self.c1b - other.c1b, self.ch2 - other.ch2)

    def __neg__(self) -> "ChernCharacter":
        return ChernCharacter(-self.rank, -self.c1a, -self.c1b, -self.ch2)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in (self.rank, self.c1a, self.c1b, self.ch2))

    def __str__(self) -> str:
        return f"({self.rank},({self.c1a},{self.c1b}),{self.ch2})"


#: Character of the canonical bundle K = O(-2,-2).
K_CHAR = ChernCharacter.line(-2, -2)


def euler_chi(xi: ChernCharacter) -> Fraction:
    """chi(xi) = r(P(mu) - Delta); computed additively so rank 0 is fine."""
    return xi.euler()


def rel_chi(E: ChernCharacter, F: ChernCharacter) -> Fraction:
    """Relative Euler characteristic chi(E, F) = chi(E^* ox F).

    Coordinate form of r(E) r(F) (P(mu(F) - mu(E)) - Delta(E) - Delta(F)),
    bilinear in both arguments (so also defined for rank-zero classes).
    """
    return (E.rank * F.ch2 + F.rank * E.ch2
            - E.c1a * F.c1b - E.c1b * F.c1a
            + E.rank * F.c1a - F.rank * E.c1a
            + E.rank * F.c1b - F.rank * E.c1b
            + E.rank * F.rank)


def sym_pairing(E: ChernCharacter, F: ChernCharacter) -> Fraction:
    """The symmetric pairing (E, F) = chi(E^*, F) = chi(E ox F)."""
    return (E.rank * F.ch2 + F.rank * E.ch2
            + E.c1a * F.c1b + E.c1b * F.c1a
            + E.rank * F.c1a + F.rank * E.c1a
            + E.rank * F.c1b + F.rank * E.c1b
            + E.rank * F.rank)


def tensor_slope_delta(E: ChernCharacter, F: ChernCharacter) -> Tuple[Slope, Fraction]:
    """Slope and discriminant of E ox F; both are additive."""
    return (E.slope() + F.slope(), E.discriminant() + F.discriminant())
