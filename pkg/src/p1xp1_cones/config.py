"""Runtime configuration shared by the library pipeline and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional


def default_cache_dir() -> str:
    env = os.environ.get("P1XP1_CONES_CACHE")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "p1xp1_cones")


@dataclass(frozen=True)
class Config:
    rank_bound: int = 50
    scan_step: Fraction = Fraction(1, 64)
    pad: int = 4
    slope_reach: int = 8
    element_cap: int = 200000
    def41_sign_reading: str = "mirrored"  # or "as-printed"
    cache_dir: Optional[str] = field(default_factory=default_cache_dir)
    refine_depth: int = 12
    strict: bool = False

    def __post_init__(self):
        if self.rank_bound < 1 or self.pad < 0 or self.scan_step <= 0:
            raise ValueError("bounds must be positive")
        if self.def41_sign_reading not in ("mirrored", "as-printed"):
            raise ValueError(f"unknown def41 reading {self.def41_sign_reading!r}")

    def with_(self, **kw) -> "Config":
        return replace(self, **kw)
