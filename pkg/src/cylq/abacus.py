"""2-string abaci of type A_{l-a, a} and their link to 2-row cylindric partitions.

Coordinates: string 1 (top) carries row 1, string 2 (bottom) carries row 2.
A yoke joins a bottom bead at site ``b`` to a top bead at site ``b + shape``.
The sea to the left consists of the yokes ``(-k, -k + a)``, k >= 0; yoke 0
is ``(0, a)``, the right-most sea yoke.  Only the yokes to the right of it
are stored.  So the bottom string is full at sites <= 0 and the top string
is full at sites <= a.

Reading a row: the i-th part is the number of beads to the right of the i-th
vacancy on that string.  On each string the beads are paired with the other
string's beads in left-to-right order, which is what fixes the relative
placement of the two strings.

Vacancy statistic: for yoke k, the count is the number of vacancies on the
bottom string left of its bottom bead plus the number of vacancies on the
top string left of its top bead.  Since both strings are full inside the
sea, this is the number of vacancies between yoke 0 and yoke k.  For
((10,8,4,3,3), (9,5,1)) of profile (3,0) it gives 0,1,2,3,3,3,4,5,7,7,8.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .cylinder import Profile, as_profile, canonical_rows, is_cylindric


@dataclass(frozen=True)
class Abacus2:
    level: int
    background_shape: int
    yokes: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "yokes", tuple((int(b), int(s)) for b, s in self.yokes))
        if self.level < 1:
            raise ValueError("level must be >= 1")
        a = self.background_shape
        if not 0 <= a <= self.level:
            raise ValueError(f"background shape {a} outside [0, {self.level}]")
        prev_bottom, prev_top = 0, a
        for k, (b, s) in enumerate(self.yokes, start=1):
            if not 0 <= s <= self.level:
                raise ValueError(f"yoke {k} has shape {s} outside [0, {self.level}]")
            if b <= prev_bottom or b + s <= prev_top:
                raise ValueError(f"yoke {k} at ({b}, {b + s}) crosses or touches yoke {k - 1}")
            prev_bottom, prev_top = b, b + s
        if self.yokes and self.yokes[0] == (1, a):
            raise ValueError("yoke 1 continues the sea; normalize by dropping it")

    @property
    def profile(self) -> Profile:
        return Profile((self.level - self.background_shape, self.background_shape))

    def bottom_sites(self) -> list[int]:
        return [b for b, _ in self.yokes]

    def top_sites(self) -> list[int]:
        return [b + s for b, s in self.yokes]

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "background_shape": self.background_shape,
            "yokes": [[b, s] for b, s in self.yokes],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Abacus2":
        return cls(int(data["level"]), int(data["background_shape"]), tuple(map(tuple, data["yokes"])))


@dataclass(frozen=True)
class YokeStats:
    shape_seq: tuple[int, ...]
    vacancy_counts: tuple[int, ...]


def _beads_beyond(row, first_vacancy: int) -> list[int]:
    """Bead sites right of the full region for a string whose first vacancy is given.

    Between vacancy i and vacancy i+1 sit row[i] - row[i+1] beads.
    """
    sites = list(range(1, first_vacancy)) if first_vacancy > 1 else []
    pos = first_vacancy
    padded = list(row) + [0]
    for i in range(len(row)):
        gap = padded[i] - padded[i + 1]
        sites.extend(range(pos + 1, pos + 1 + gap))
        pos += gap + 1
    return sites


def abacus_from_cylindric(rows, profile) -> Abacus2:
    profile = as_profile(profile)
    if profile.rank != 2:
        raise ValueError("abaci are implemented for 2-row profiles only")
    rows = canonical_rows(rows)
    if not is_cylindric(rows, profile):
        raise ValueError(f"{rows} is not cylindric for profile {profile.c}")
    level, a = profile.level, profile.c[1]
    top_row, bottom_row = rows
    top_max = top_row[0] if top_row else 0
    bottom_max = bottom_row[0] if bottom_row else 0
    # equal bead counts beyond the sea; one string starts right at the sea edge
    if bottom_max >= top_max:
        bottom_first, top_first_rel = 1, 1 + bottom_max - top_max
    else:
        bottom_first, top_first_rel = 1 + top_max - bottom_max, 1
    bottom = _beads_beyond(bottom_row, bottom_first)
    top = [a + s for s in _beads_beyond(top_row, top_first_rel)]
    if len(bottom) != len(top):
        raise AssertionError("bead counts differ")  # unreachable by construction
    return Abacus2(level, a, tuple((b, t - b) for b, t in zip(bottom, top)))


def _read_row(full_upto: int, beads: list[int]) -> tuple[int, ...]:
    parts = []
    bead_set = set(beads)
    total = len(beads)
    passed = 0
    site = full_upto + 1
    while passed < total:
        if site in bead_set:
            passed += 1
        else:
            parts.append(total - passed)
        site += 1
    return tuple(parts)


def cylindric_from_abacus(ab: Abacus2):
    """Return ``(rows, profile)``."""
    a = ab.background_shape
    top = _read_row(a, ab.top_sites())
    bottom = _read_row(0, ab.bottom_sites())
    return (top, bottom), ab.profile


def _can_shift_left(ab: Abacus2, k: int) -> bool:
    """Whether yoke k (1-indexed) can move one site left without breaking validity."""
    b, s = ab.yokes[k - 1]
    prev_b, prev_s = ab.yokes[k - 2] if k >= 2 else (0, ab.background_shape)
    return b - 1 > prev_b and b - 1 + s > prev_b + prev_s


def is_tight_abacus(ab: Abacus2) -> bool:
    return not any(_can_shift_left(ab, k) for k in range(1, len(ab.yokes) + 1))


def _vacancies_before(full_upto: int, beads: list[int], site: int) -> int:
    # sites full_upto+1 .. site-1 minus the beads among them
    return (site - 1 - full_upto) - bisect_left(beads, site)


def yoke_stats(ab: Abacus2) -> YokeStats:
    a = ab.background_shape
    bottoms, tops = ab.bottom_sites(), ab.top_sites()
    shapes = [a]
    vacancies = [0]
    for (b, s), t in zip(ab.yokes, tops):
        shapes.append(s)
        vacancies.append(_vacancies_before(0, bottoms, b) + _vacancies_before(a, tops, t))
    return YokeStats(tuple(shapes), tuple(vacancies))


def tight_abacus_from_shapes(level: int, shapes) -> Abacus2:
    """Pack yokes of the given shapes (yoke 0 first) as far left as possible."""
    shapes = list(shapes)
    a = shapes[0]
    yokes = []
    prev_b, prev_t = 0, a
    for s in shapes[1:]:
        b = max(prev_b + 1, prev_t + 1 - s)
        yokes.append((b, s))
        prev_b, prev_t = b, b + s
    return Abacus2(level, a, tuple(yokes))
