"""Exact truncated power series in q whose coefficients are polynomials in z.

A series carries two inclusive caps: ``q_cap`` bounds the q-degree and
``z_cap`` bounds the z-degree.  Every operation silently drops terms that
land above either cap.  Binary operations require identical caps and raise
:class:`CapMismatchError` otherwise; use :func:`recap` to truncate
explicitly.

Coefficients are Python ints, so overflow cannot happen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

INFINITY = math.inf


class CapMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Monomial:
    z_exp: int
    q_exp: int
    coeff: int = 1

    def __post_init__(self):
        if self.z_exp < 0 or self.q_exp < 0:
            raise ValueError(f"negative exponent in {self!r}")


class BivariateSeries:
    """Dense table ``rows[n][m]`` = coefficient of ``z**m q**n``."""

    __slots__ = ("q_cap", "z_cap", "_rows")

    def __init__(self, q_cap: int, z_cap: int, rows=None):
        if q_cap < 0 or z_cap < 0:
            raise ValueError("caps must be nonnegative")
        self.q_cap = q_cap
        self.z_cap = z_cap
        if rows is None:
            self._rows = tuple((0,) * (z_cap + 1) for _ in range(q_cap + 1))
        else:
            self._rows = tuple(tuple(r) for r in rows)
            if len(self._rows) != q_cap + 1 or any(len(r) != z_cap + 1 for r in self._rows):
                raise ValueError("row table does not match caps")

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int, int]], q_cap: int, z_cap: int):
        """Build from ``(n, m, coeff)`` triples; terms above the caps are dropped."""
        rows = [[0] * (z_cap + 1) for _ in range(q_cap + 1)]
        for n, m, c in terms:
            if n < 0 or m < 0:
                raise ValueError(f"negative exponent ({n}, {m})")
            if n <= q_cap and m <= z_cap:
                rows[n][m] += c
        return cls(q_cap, z_cap, rows)

    @classmethod
    def from_q_list(cls, coeffs: Iterable[int], q_cap: int, z_cap: int = 0):
        """Embed a z-free coefficient list ``[c_0, c_1, ...]``."""
        return cls.from_terms(((n, 0, c) for n, c in enumerate(coeffs)), q_cap, z_cap)

    # -- access -------------------------------------------------------------

    @property
    def caps(self) -> tuple[int, int]:
        return (self.q_cap, self.z_cap)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def coeff(self, n: int, m: int = 0) -> int:
        if 0 <= n <= self.q_cap and 0 <= m <= self.z_cap:
            return self._rows[n][m]
        return 0

    def terms(self) -> Iterator[tuple[int, int, int]]:
        """Nonzero ``(n, m, coeff)`` triples in lexicographic order."""
        for n, row in enumerate(self._rows):
            for m, c in enumerate(row):
                if c:
                    yield n, m, c

    def q_coeffs(self, n: int) -> tuple[int, ...]:
        """The z-polynomial multiplying ``q**n``."""
        return self._rows[n]

    def at_z_one(self) -> list[int]:
        """Coefficients of q^0..q^q_cap after z -> 1.

        Only meaningful when no z-degree above ``z_cap`` was truncated away,
        e.g. for generating functions where the z-degree never exceeds the
        q-degree and ``z_cap >= q_cap``.
        """
        return [sum(row) for row in self._rows]

    def first_nonzero(self):
        return next(self.terms(), None)

    # -- dunder glue ----------------------------------------------------------

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_sub(self, other)

    def __mul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return series_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return NotImplemented

    def __neg__(self):
        return scale(self, -1)

    def __eq__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return series_eq(self, other)

    __hash__ = None

    def __repr__(self):
        return f"BivariateSeries(q_cap={self.q_cap}, z_cap={self.z_cap}, {format_series(self)})"


def _check_caps(a: BivariateSeries, b: BivariateSeries):
    if a.caps != b.caps:
        raise CapMismatchError(f"caps differ: {a.caps} vs {b.caps}")


def _zeros(q_cap, z_cap):
    return [[0] * (z_cap + 1) for _ in range(q_cap + 1)]


def series_const(value: int, q_cap: int, z_cap: int) -> BivariateSeries:
    return BivariateSeries.from_terms([(0, 0, value)], q_cap, z_cap)


def monomial(mono: Monomial, q_cap: int, z_cap: int) -> BivariateSeries:
    return BivariateSeries.from_terms([(mono.q_exp, mono.z_exp, mono.coeff)], q_cap, z_cap)


def recap(a: BivariateSeries, q_cap: int, z_cap: int) -> BivariateSeries:
    """Truncate to smaller caps.  Enlarging is refused: the lost terms are unknown."""
    if q_cap > a.q_cap or z_cap > a.z_cap:
        raise CapMismatchError(f"cannot enlarge caps {a.caps} to {(q_cap, z_cap)}")
    return BivariateSeries(q_cap, z_cap, (row[: z_cap + 1] for row in a.rows[: q_cap + 1]))


def series_add(a: BivariateSeries, b: BivariateSeries) -> BivariateSeries:
    _check_caps(a, b)
    rows = (tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows))
    return BivariateSeries(a.q_cap, a.z_cap, rows)


def series_sub(a: BivariateSeries, b: BivariateSeries) -> BivariateSeries:
    _check_caps(a, b)
    rows = (tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows))
    return BivariateSeries(a.q_cap, a.z_cap, rows)


def scale(a: BivariateSeries, k: int) -> BivariateSeries:
    return BivariateSeries(a.q_cap, a.z_cap, (tuple(k * x for x in row) for row in a.rows))


def series_mul(a: BivariateSeries, b: BivariateSeries) -> BivariateSeries:
    _check_caps(a, b)
    Q, Z = a.q_cap, a.z_cap
    out = _zeros(Q, Z)
    b_rows = b.rows
    for n1, ra in enumerate(a.rows):
        a_terms = [(m, c) for m, c in enumerate(ra) if c]
        if not a_terms:
            continue
        for n2 in range(Q - n1 + 1):
            rb = b_rows[n2]
            target = out[n1 + n2]
            for m1, c1 in a_terms:
                for m2 in range(Z - m1 + 1):
                    c2 = rb[m2]
                    if c2:
                        target[m1 + m2] += c1 * c2
    return BivariateSeries(Q, Z, out)


def shift(a: BivariateSeries, z_exp: int, q_exp: int, coeff: int = 1) -> BivariateSeries:
    """Multiply by the monomial ``coeff * z**z_exp * q**q_exp``."""
    if z_exp < 0 or q_exp < 0:
        raise ValueError("shift exponents must be nonnegative")
    Q, Z = a.q_cap, a.z_cap
    out = _zeros(Q, Z)
    for n in range(Q - q_exp + 1):
        row = a.rows[n]
        target = out[n + q_exp]
        for m in range(Z - z_exp + 1):
            if row[m]:
                target[m + z_exp] = coeff * row[m]
    return BivariateSeries(Q, Z, out)


def series_subst_z(a: BivariateSeries, k: int) -> BivariateSeries:
    """Substitute ``z -> z q**k``: the term ``z^m q^n`` moves to ``z^m q^(n + m k)``."""
    if k < 0:
        raise ValueError("substitution exponent must be nonnegative")
    Q, Z = a.q_cap, a.z_cap
    out = _zeros(Q, Z)
    for n, row in enumerate(a.rows):
        for m, c in enumerate(row):
            if c and n + m * k <= Q:
                out[n + m * k][m] += c
    return BivariateSeries(Q, Z, out)


def _admissible_geometric(mono: Monomial):
    if mono.q_exp == 0 and mono.z_exp == 0:
        raise ValueError("1/(1 - c) with a constant c is not a power series here")


def div_one_minus(a: BivariateSeries, z_exp: int, q_exp: int) -> BivariateSeries:
    """``a / (1 - z**z_exp q**q_exp)`` by the recurrence g = a + z^i q^j g."""
    _admissible_geometric(Monomial(z_exp, q_exp))
    Q, Z = a.q_cap, a.z_cap
    g = [list(row) for row in a.rows]
    # rows are filled in increasing (n, m); the source term is always earlier
    for n in range(q_exp, Q + 1):
        src = g[n - q_exp]
        dst = g[n]
        for m in range(z_exp, Z + 1):
            if src[m - z_exp]:
                dst[m] += src[m - z_exp]
    return BivariateSeries(Q, Z, g)


def mul_one_minus(a: BivariateSeries, mono: Monomial) -> BivariateSeries:
    """``a * (1 - mono)``."""
    return series_sub(a, shift(a, mono.z_exp, mono.q_exp, mono.coeff))


def series_inv_one_minus(mono: Monomial, q_cap: int, z_cap: int) -> BivariateSeries:
    """Geometric expansion of ``1 / (1 - z^a q^b)`` for a unit-coefficient monomial."""
    if mono.coeff != 1:
        raise ValueError("series_inv_one_minus expects a monomial with coefficient 1")
    _admissible_geometric(mono)
    return div_one_minus(series_const(1, q_cap, z_cap), mono.z_exp, mono.q_exp)


def series_inverse(a: BivariateSeries) -> BivariateSeries:
    """Multiplicative inverse of a series with constant term 1.

    Long division: the coefficient at (n, m) of the inverse is fixed by
    requiring the product to vanish there.
    """
    if a.coeff(0, 0) != 1:
        raise ValueError("series_inverse needs constant term 1")
    Q, Z = a.q_cap, a.z_cap
    a_terms = [(n, m, c) for n, m, c in a.terms() if (n, m) != (0, 0)]
    inv = _zeros(Q, Z)
    inv[0][0] = 1
    for n in range(Q + 1):
        for m in range(Z + 1):
            if n == 0 and m == 0:
                continue
            acc = 0
            for dn, dm, c in a_terms:
                if dn <= n and dm <= m:
                    acc += c * inv[n - dn][m - dm]
            inv[n][m] = -acc
    return BivariateSeries(Q, Z, inv)


def pochhammer(base: Monomial, n, q_step: int, q_cap: int, z_cap: int = 0) -> BivariateSeries:
    """``prod_{j=0}^{n-1} (1 - base * q**(j*q_step))``, truncated.

    ``n`` may be :data:`INFINITY`; the base must then carry a positive power
    of q, and factors starting above ``q_cap`` are skipped.
    """
    if q_step < 1:
        raise ValueError("q_step must be >= 1")
    if n == INFINITY:
        if base.q_exp < 1:
            raise ValueError("infinite product with q-free base diverges")
        count = (q_cap - base.q_exp) // q_step + 1 if base.q_exp <= q_cap else 0
    else:
        if n < 0:
            raise ValueError("pochhammer length must be >= 0")
        count = int(n)
    acc = series_const(1, q_cap, z_cap)
    for j in range(count):
        q_exp = base.q_exp + j * q_step
        if q_exp > q_cap or base.z_exp > z_cap:
            continue
        acc = mul_one_minus(acc, Monomial(base.z_exp, q_exp, base.coeff))
    return acc


def theta_trunc(a_exp: int, modulus: int, q_cap: int, z_cap: int = 0) -> BivariateSeries:
    """``(q^a; q^m)_inf (q^(m-a); q^m)_inf``."""
    if modulus < 2 or not 1 <= a_exp < modulus:
        raise ValueError(f"need 1 <= a_exp < modulus, got a_exp={a_exp}, modulus={modulus}")
    left = pochhammer(Monomial(0, a_exp), INFINITY, modulus, q_cap, z_cap)
    right = pochhammer(Monomial(0, modulus - a_exp), INFINITY, modulus, q_cap, z_cap)
    return series_mul(left, right)


def series_is_zero(a: BivariateSeries) -> bool:
    return not any(any(row) for row in a.rows)


def series_eq(a: BivariateSeries, b: BivariateSeries) -> bool:
    _check_caps(a, b)
    return a.rows == b.rows


# -- serialization ------------------------------------------------------------


def to_json(a: BivariateSeries) -> dict:
    return {
        "q_cap": a.q_cap,
        "z_cap": a.z_cap,
        "terms": [[n, m, str(c)] for n, m, c in a.terms()],
    }


def from_json(data: dict) -> BivariateSeries:
    terms = ((int(n), int(m), int(c)) for n, m, c in data["terms"])
    return BivariateSeries.from_terms(terms, int(data["q_cap"]), int(data["z_cap"]))


def format_series(a: BivariateSeries) -> str:
    """Human-readable rendering, e.g. ``1 + z*q + 2*z^2*q^3``."""
    parts = []
    for n, m, c in a.terms():
        factors = []
        if m:
            factors.append("z" if m == 1 else f"z^{m}")
        if n:
            factors.append("q" if n == 1 else f"q^{n}")
        body = "*".join(factors)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        elif c == -1:
            parts.append("-" + body)
        else:
            parts.append(f"{c}*{body}")
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")


# -- z-free helpers used by the multisum evaluators -----------------------------


def trunc_mul(a, b, cap: int) -> tuple[int, ...]:
    """Product of two q-coefficient lists, truncated at ``q**cap``."""
    out = [0] * (cap + 1)
    for i, x in enumerate(a):
        if i > cap:
            break
        if x:
            for j in range(min(len(b), cap + 1 - i)):
                if b[j]:
                    out[i + j] += x * b[j]
    return tuple(out)


@lru_cache(maxsize=None)
def qbinomial(n: int, k: int, cap: int) -> tuple[int, ...]:
    """Gaussian binomial [n choose k]_q truncated at ``q**cap``, by q-Pascal."""
    if k < 0 or k > n:
        return (0,) * (cap + 1)
    if k == 0 or k == n:
        return (1,) + (0,) * cap
    left = qbinomial(n - 1, k - 1, cap)
    right = qbinomial(n - 1, k, cap)
    return tuple(left[d] + (right[d - k] if d >= k else 0) for d in range(cap + 1))


@lru_cache(maxsize=None)
def inv_qpoch(n: int, step: int, cap: int) -> tuple[int, ...]:
    """Coefficients of ``1 / (q^step; q^step)_n`` truncated at ``q**cap``."""
    acc = series_const(1, cap, 0)
    for j in range(1, n + 1):
        if step * j > cap:
            break
        acc = div_one_minus(acc, 0, step * j)
    return tuple(row[0] for row in acc.rows)
