"""Profiles, cylindric partitions and their exhaustive enumeration.

Rows and parts are 1-indexed in docstrings; storage is 0-indexed.

A cylindric partition of profile ``c = (c_1, ..., c_r)`` is an r-tuple of
partitions with

    pi^(i)_j >= pi^(i+1)_(j + c_(i+1))    for 1 <= i < r
    pi^(r)_j >= pi^(1)_(j + c_1)          (wrap-around)

The wrap-around inequality is always taken from the last row.  Parts
beyond a row's length are 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .series import BivariateSeries


@dataclass(frozen=True)
class Profile:
    c: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))
        if len(self.c) < 2:
            raise ValueError(f"profile needs rank >= 2, got {self.c}")
        if any(x < 0 for x in self.c):
            raise ValueError(f"profile entries must be >= 0, got {self.c}")

    @property
    def rank(self) -> int:
        return len(self.c)

    @property
    def level(self) -> int:
        return sum(self.c)

    def rotate(self, k: int = 1) -> "Profile":
        k %= self.rank
        return Profile(self.c[k:] + self.c[:k])

    def __iter__(self):
        return iter(self.c)

    def __str__(self):
        return ",".join(map(str, self.c))


def as_profile(profile) -> Profile:
    return profile if isinstance(profile, Profile) else Profile(tuple(profile))


@dataclass(frozen=True)
class PartitionStats:
    max_part: int
    weight: int


@dataclass(frozen=True, order=True)
class CylindricPartition:
    rows: tuple[tuple[int, ...], ...]
    profile: Profile

    @property
    def weight(self) -> int:
        return sum(map(sum, self.rows))

    @property
    def max_part(self) -> int:
        return max((row[0] for row in self.rows if row), default=0)

    @property
    def stats(self) -> PartitionStats:
        return PartitionStats(self.max_part, self.weight)

    def to_json(self) -> dict:
        return {"profile": list(self.profile.c), "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "CylindricPartition":
        profile = Profile(tuple(data["profile"]))
        rows = canonical_rows(data["rows"])
        if not is_cylindric(rows, profile):
            raise ValueError(f"rows {rows} are not cylindric for profile {profile.c}")
        return cls(rows, profile)


def canonical_rows(rows: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Validate weak decrease and strip zero parts."""
    out = []
    for row in rows:
        row = tuple(int(x) for x in row)
        if any(x < 0 for x in row):
            raise ValueError(f"negative part in row {row}")
        if any(row[k] < row[k + 1] for k in range(len(row) - 1)):
            raise ValueError(f"row {row} is not weakly decreasing")
        out.append(tuple(x for x in row if x > 0))
    return tuple(out)


def _part(row, j):
    # 1-indexed, 0 past the end
    return row[j - 1] if j <= len(row) else 0


def is_cylindric(rows, profile) -> bool:
    profile = as_profile(profile)
    rows = canonical_rows(rows)
    if len(rows) != profile.rank:
        raise ValueError(f"expected {profile.rank} rows, got {len(rows)}")
    c, r = profile.c, profile.rank
    for i in range(r):
        upper = rows[i]
        if i + 1 < r:
            lower, offset = rows[i + 1], c[i + 1]
        else:
            lower, offset = rows[0], c[0]
        # only indices where the lower entry is nonzero can fail
        for j in range(1, len(lower) - offset + 1):
            if _part(upper, j) < _part(lower, j + offset):
                return False
    return True


def is_tight(rows) -> bool:
    """No positive integer is a part of every row."""
    rows = canonical_rows(rows)
    common = set(rows[0])
    for row in rows[1:]:
        common &= set(row)
    return not common


def _sort_key(p: CylindricPartition):
    return (p.weight, p.rows)


def _positions(profile: Profile, max_len: int):
    """Cells (i, j) in an order where every upper bound precedes its cell.

    Cell (i, j) sits in diagonal x = j - (c_2 + ... + c_i); the vertical
    inequalities stay inside one diagonal (ordered by i), the horizontal one
    steps to x + 1, and the wrap-around one steps by the level.  Each entry
    is (i, j, bounds), bounds being earlier cells that dominate it.
    """
    c, r = profile.c, profile.rank
    offsets = [0] * r
    for i in range(1, r):
        offsets[i] = offsets[i - 1] + c[i]
    cells = [(j - offsets[i], i, j) for i in range(r) for j in range(1, max_len + 1)]
    cells.sort()
    out = []
    for _, i, j in cells:
        bounds = []
        if j >= 2:
            bounds.append((i, j - 1))
        if i >= 1:
            if j - c[i] >= 1:
                bounds.append((i - 1, j - c[i]))
        elif j - c[0] >= 1:
            bounds.append((r - 1, j - c[0]))
        out.append((i, j, tuple(bounds)))
    return out


def _enumerate_level_zero(profile: Profile, weight_cap: int):
    # all rows coincide
    r = profile.rank
    out = []

    def parts(budget, largest, prefix):
        yield prefix
        for p in range(min(budget, largest), 0, -1):
            yield from parts(budget - p, p, prefix + (p,))

    for mu in parts(weight_cap // r, weight_cap, ()):
        out.append(CylindricPartition((mu,) * r, profile))
    return out


@lru_cache(maxsize=256)
def _enumerate_cached(profile: Profile, weight_cap: int) -> tuple[CylindricPartition, ...]:
    if profile.level == 0:
        found = _enumerate_level_zero(profile, weight_cap)
        return tuple(sorted(found, key=_sort_key))

    r = profile.rank
    order = _positions(profile, weight_cap)
    values = {}
    rows = [[] for _ in range(r)]
    closed = [False] * r
    found = []

    def emit():
        found.append(CylindricPartition(tuple(tuple(row) for row in rows), profile))

    def walk(k, budget):
        if budget == 0 or all(closed):
            emit()
            return
        while k < len(order) and closed[order[k][0]]:
            k += 1
        if k == len(order):
            emit()
            return
        i, j, bounds = order[k]
        hi = budget
        for cell in bounds:
            v = values.get(cell, 0)
            if v < hi:
                hi = v
        # value 0 closes the row
        closed[i] = True
        values[(i, j)] = 0
        walk(k + 1, budget)
        closed[i] = False
        for v in range(1, hi + 1):
            values[(i, j)] = v
            rows[i].append(v)
            walk(k + 1, budget - v)
            rows[i].pop()
        del values[(i, j)]

    walk(0, weight_cap)
    return tuple(sorted(found, key=_sort_key))


def enumerate_cylindric(profile, weight_cap: int) -> list[CylindricPartition]:
    """All cylindric partitions of weight <= weight_cap, sorted by (weight, rows)."""
    if weight_cap < 0:
        raise ValueError("weight_cap must be >= 0")
    return list(_enumerate_cached(as_profile(profile), weight_cap))


def enumerate_tight(profile, weight_cap: int) -> list[CylindricPartition]:
    return [p for p in enumerate_cylindric(profile, weight_cap) if is_tight(p.rows)]


def gf_from_partitions(parts, q_cap: int, z_cap: int) -> BivariateSeries:
    """Sum of z^max q^wt over the given cylindric partitions."""
    rows = [[0] * (z_cap + 1) for _ in range(q_cap + 1)]
    for p in parts:
        wt, mx = p.weight, p.max_part
        if wt > q_cap:
            raise ValueError(f"partition of weight {wt} exceeds q_cap {q_cap}")
        if mx <= z_cap:
            rows[wt][mx] += 1
    return BivariateSeries(q_cap, z_cap, rows)


@lru_cache(maxsize=512)
def tight_gf(profile: Profile, q_cap: int, z_cap: int) -> BivariateSeries:
    """T_c(z, q) from enumeration."""
    return gf_from_partitions(enumerate_tight(profile, q_cap), q_cap, z_cap)


@lru_cache(maxsize=512)
def cylindric_gf(profile: Profile, q_cap: int, z_cap: int) -> BivariateSeries:
    """C_c(z, q) from enumeration."""
    return gf_from_partitions(enumerate_cylindric(profile, q_cap), q_cap, z_cap)


def profile_support(profile) -> set[int]:
    """1-indexed positions with c_i > 0."""
    return {i + 1 for i, x in enumerate(as_profile(profile).c) if x > 0}


def profile_child(profile, J) -> Profile:
    """The composition c(J) for nonempty J inside the support (1-indexed, c_0 = c_r)."""
    profile = as_profile(profile)
    J = set(J)
    if not J:
        raise ValueError("J must be nonempty")
    if not J <= profile_support(profile):
        raise ValueError(f"J={sorted(J)} is not inside the support of {profile.c}")
    r = profile.rank
    out = []
    for i in range(1, r + 1):
        prev = i - 1 if i > 1 else r
        ci = profile.c[i - 1]
        if i in J and prev not in J:
            ci -= 1
        elif i not in J and prev in J:
            ci += 1
        out.append(ci)
    return Profile(tuple(out))


def nonempty_subsets(indices) -> list[tuple[int, ...]]:
    indices = sorted(indices)
    return [s for k in range(1, len(indices) + 1) for s in combinations(indices, k)]
