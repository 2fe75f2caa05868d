"""Colored partitions whose part gaps equal color gaps, ending in one 0 part.

A partition is stored by its color sequence ``(u_1, ..., u_s)`` with
``u_s`` the ground color ``a``; the parts follow from ``lambda_s = 0`` and
``lambda_i = lambda_(i+1) + |u_i - u_(i+1)|``.  Exactly one part is 0, so
``u_(s-1) != a``.  The trailing 0 is not counted as a part.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .abacus import abacus_from_cylindric, cylindric_from_abacus, is_tight_abacus, tight_abacus_from_shapes, yoke_stats
from .cylinder import as_profile, canonical_rows, is_tight
from .series import BivariateSeries


@dataclass(frozen=True)
class DHKPartition:
    level: int
    colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(u) for u in self.colors))
        if self.level < 1:
            raise ValueError("level must be >= 1")
        if not self.colors:
            raise ValueError("color sequence must be nonempty")
        for u in self.colors:
            if not 0 <= u <= self.level:
                raise ValueError(f"color {u} outside [0, {self.level}]")
        if len(self.colors) >= 2 and self.colors[-2] == self.colors[-1]:
            raise ValueError("second-to-last color equals the ground color: two parts of size 0")

    @property
    def ground(self) -> int:
        return self.colors[-1]

    @property
    def parts(self) -> tuple[int, ...]:
        parts = [0]
        for hi, lo in zip(reversed(self.colors[:-1]), reversed(self.colors[1:])):
            parts.append(parts[-1] + abs(hi - lo))
        return tuple(reversed(parts))

    @property
    def num_parts(self) -> int:
        return len(self.colors) - 1

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __str__(self):
        return " + ".join(f"{p}_{u}" for p, u in zip(self.parts, self.colors))

    def to_json(self) -> dict:
        return {"level": self.level, "ground": self.ground, "colors": list(self.colors), "parts": list(self.parts)}

    @classmethod
    def from_json(cls, data: dict) -> "DHKPartition":
        colors = tuple(data["colors"])
        if "ground" in data and colors and colors[-1] != int(data["ground"]):
            raise ValueError("last color must equal the ground color")
        # parts in the payload are informational only
        return cls(int(data["level"]), colors)


def dhk_from_colors(level: int, colors) -> DHKPartition:
    return DHKPartition(level, tuple(colors))


@lru_cache(maxsize=128)
def _enumerate_cached(level: int, ground: int, weight_cap: int) -> tuple[DHKPartition, ...]:
    found = []

    # grow from the 0 end: each new color adds a part = previous part + color gap
    def walk(seq, last_part, weight):
        found.append(DHKPartition(level, tuple(reversed(seq))))
        prev = seq[-1]
        for u in range(level + 1):
            if len(seq) == 1 and u == ground:
                continue
            part = last_part + abs(u - prev)
            if weight + part > weight_cap:
                continue
            seq.append(u)
            walk(seq, part, weight + part)
            seq.pop()

    walk([ground], 0, 0)
    return tuple(sorted(found, key=lambda d: (d.weight, d.colors)))


def enumerate_dhk(level: int, ground_color: int, weight_cap: int) -> list[DHKPartition]:
    """All DHK partitions of weight <= weight_cap, sorted by (weight, colors)."""
    if level < 1 or not 0 <= ground_color <= level:
        raise ValueError(f"need level >= 1 and 0 <= ground <= level, got {level}, {ground_color}")
    if weight_cap < 0:
        raise ValueError("weight_cap must be >= 0")
    return list(_enumerate_cached(level, ground_color, weight_cap))


@lru_cache(maxsize=256)
def gf_dhk(level: int, ground_color: int, q_cap: int, z_cap: int) -> BivariateSeries:
    rows = [[0] * (z_cap + 1) for _ in range(q_cap + 1)]
    for lam in enumerate_dhk(level, ground_color, q_cap):
        if lam.num_parts <= z_cap:
            rows[lam.weight][lam.num_parts] += 1
    return BivariateSeries(q_cap, z_cap, rows)


class NotTightError(ValueError):
    pass


def dhk_from_tight(rows, profile) -> DHKPartition:
    profile = as_profile(profile)
    rows = canonical_rows(rows)
    ab = abacus_from_cylindric(rows, profile)
    if not is_tight(rows) or not is_tight_abacus(ab):
        raise NotTightError(f"{rows} is not tight")
    stats = yoke_stats(ab)
    lam = DHKPartition(profile.level, tuple(reversed(stats.shape_seq)))
    if lam.parts != tuple(reversed(stats.vacancy_counts)):
        raise AssertionError("vacancy gaps disagree with shape gaps")
    return lam


def tight_from_dhk(lam: DHKPartition):
    """Return ``(rows, profile)`` of the tight 2-row partition of profile (l - a, a)."""
    ab = tight_abacus_from_shapes(lam.level, reversed(lam.colors))
    return cylindric_from_abacus(ab)
