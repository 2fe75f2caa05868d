"""Closed-form evaluators and residual checkers for the functional equations.

Every checker builds ``lhs - rhs`` as a truncated series and wraps it in a
:class:`CheckReport`; a vanishing residual certifies the identity modulo the
caps.  All constituent series are computed at the report caps.  That is
sound because ``z -> z q^k`` and division by ``1 - z q^k`` never lower the
q- or z-degree of a term, so every coefficient inside the caps only depends
on coefficients inside the caps.

Each checker takes ``mutate=True`` to apply one deliberate perturbation to
the identity.  The perturbed residual must come out nonzero, which guards
against checkers that are vacuously zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .cylinder import Profile, as_profile, nonempty_subsets, profile_child, profile_support, tight_gf, cylindric_gf
from .dhk import dhk_from_tight, enumerate_dhk, gf_dhk, tight_from_dhk
from .cylinder import enumerate_tight
from .series import (
    INFINITY,
    BivariateSeries,
    Monomial,
    div_one_minus,
    inv_qpoch,
    pochhammer,
    qbinomial,
    series_const,
    series_inverse,
    series_mul,
    series_subst_z,
    shift,
    theta_trunc,
    trunc_mul,
)

Vector = tuple[int, ...]


# -- vectors ------------------------------------------------------------------


def _e(ell, j):
    return tuple(1 if k == j else 0 for k in range(1, ell + 1))


def _delta(ell, j):
    return tuple(1 if k >= j else 0 for k in range(1, ell + 1))


def vadd(*vs: Vector) -> Vector:
    return tuple(map(sum, zip(*vs)))


def vneg(v: Vector) -> Vector:
    return tuple(-x for x in v)


def vscale(k: int, v: Vector) -> Vector:
    return tuple(k * x for x in v)


def vec_basis(ell: int, kind: str, index: int) -> Vector:
    """The vectors e_j, delta_j, Delta_i, eta_i of length ``ell``.

    ``kind`` is one of ``"e"``, ``"delta"``, ``"Delta"``, ``"eta"``.  Indices
    past ``ell`` give zero contributions, so e_j = delta_j = 0 for j > ell.
    """
    if index < 0:
        raise ValueError("index must be >= 0")
    if kind == "e":
        return _e(ell, index) if index >= 1 else (0,) * ell
    if kind == "delta":
        return _delta(ell, index) if index >= 1 else (0,) * ell
    if kind == "Delta":
        return vadd((0,) * ell, *(_delta(ell, k) for k in range(1, index + 1)))
    if kind == "eta":
        return vadd((0,) * ell, *(_delta(ell, 2 * k) for k in range(1, index + 1)))
    raise ValueError(f"unknown vector kind {kind!r}")


# -- reports ------------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    name: str
    q_cap: int
    z_cap: int
    residual_zero: bool
    first_nonzero_term: tuple[int, int, int] | None = None
    asserted: bool = True
    detail: str = field(default="", compare=False)

    @property
    def caps(self):
        return (self.q_cap, self.z_cap)

    @classmethod
    def from_residual(cls, name: str, residual: BivariateSeries, **kw) -> "CheckReport":
        first = residual.first_nonzero()
        return cls(name, residual.q_cap, residual.z_cap, first is None, first, **kw)

    def to_json(self) -> dict:
        first = self.first_nonzero_term
        return {
            "name": self.name,
            "q_cap": self.q_cap,
            "z_cap": self.z_cap,
            "ok": self.residual_zero,
            "first_nonzero": None if first is None else [first[0], first[1], str(first[2])],
        }


def _boolean_report(name, ok, q_cap, z_cap, detail=""):
    return CheckReport(name, q_cap, z_cap, ok, None if ok else (0, 0, 1), detail=detail)


# -- multisum engine ----------------------------------------------------------


def _chains(length: int, top: int, q_cap: int, pieces: Sequence[Callable[[int], int]]):
    """Yield ``(N, exponent)`` for top >= N_1 >= ... >= N_length >= 0.

    The exponent is ``sum(pieces[i](N_i))``.  Branches whose smallest
    possible exponent already exceeds ``q_cap`` are pruned; a chain with a
    negative exponent raises, since it would need a Laurent term.
    """
    # floor[i][B] = min over i' >= i of pieces, each minimized on [0, B]
    floor = [[0] * (top + 1) for _ in range(length + 1)]
    for i in range(length - 1, -1, -1):
        best = None
        for B in range(top + 1):
            val = pieces[i](B)
            best = val if best is None else min(best, val)
            floor[i][B] = best + floor[i + 1][B]

    chain = []

    def walk(i, bound, acc):
        if i == length:
            if acc < 0:
                raise ValueError(f"negative q-exponent {acc} at N={tuple(chain)}")
            yield tuple(chain), acc
            return
        for N in range(bound + 1):
            val = acc + pieces[i](N)
            if val + floor[i + 1][N] > q_cap:
                continue
            chain.append(N)
            yield from walk(i + 1, N, val)
            chain.pop()

    if length == 0:
        yield (), 0
        return
    yield from walk(0, top, 0)


def _binom2(N):
    return N * (N + 1) // 2


def _multinomial(chain, cap):
    """(q)_{N_1} / ((q)_{N_1-N_2} ... (q)_{N_l}) as a product of Gaussian binomials."""
    coeffs = (1,) + (0,) * cap
    for k in range(len(chain) - 1):
        coeffs = trunc_mul(coeffs, qbinomial(chain[k], chain[k + 1], cap), cap)
    return coeffs


def _assemble(by_n1: dict[int, list[int]], t: int, q_cap: int, z_cap: int) -> BivariateSeries:
    """sum_{N_1} z^{N_1} U_{N_1}(q) / (zq; q)_{N_1 + t}, Horner-style from the top N_1."""
    if not by_n1:
        return BivariateSeries(q_cap, z_cap)
    top = max(by_n1)
    acc = BivariateSeries(q_cap, z_cap)
    for n1 in range(top, -1, -1):
        if n1 < top:
            acc = div_one_minus(acc, 1, t + n1 + 1) if t + n1 + 1 <= q_cap else acc
        coeffs = by_n1.get(n1)
        if coeffs:
            acc = acc + BivariateSeries.from_terms(((n, n1, c) for n, c in enumerate(coeffs)), q_cap, z_cap)
    for j in range(1, min(t, q_cap) + 1):
        acc = div_one_minus(acc, 1, j)
    return acc


def _quadratic_sum(ell, linear, t, q_cap, z_cap):
    """sum over chains of z^{N_1} q^{sum C(N_i+1,2) + sum linear_i N_i} (q)_{N_1}/(...)/(zq)_{N_1+t}."""
    pieces = [(lambda N, w=w: _binom2(N) + w * N) for w in linear]
    by_n1: dict[int, list[int]] = {}
    for chain, expo in _chains(ell, z_cap, q_cap, pieces):
        n1 = chain[0] if chain else 0
        weight = _multinomial(chain, q_cap - expo)
        acc = by_n1.setdefault(n1, [0] * (q_cap + 1))
        for d, c in enumerate(weight):
            acc[expo + d] += c
    return _assemble(by_n1, t, q_cap, z_cap)


def min_exponent(v: Vector) -> int:
    """Smallest value of sum C(N_i+1, 2) + v.n over all n >= 0.

    With w_i = v_i - v_(i-1), v.n = sum w_i N_i, and each piece
    C(N+1, 2) + w N increases for N >= -w, so clamping every N_i at
    max(0, -min w) keeps the chain and never raises a piece.  The minimum is
    thus attained with N_1 below that bound.
    """
    ell = len(v)
    w = [v[i] - (v[i - 1] if i else 0) for i in range(ell)]
    bound = max([0] + [-x for x in w])
    pieces = [(lambda N, x=x: _binom2(N) + x * N) for x in w]
    best = 0
    for _, expo in _chains_unpruned(ell, bound, pieces):
        best = min(best, expo)
    return best


def _chains_unpruned(length, top, pieces):
    def walk(i, bound, acc, chain):
        if i == length:
            yield tuple(chain), acc
            return
        for N in range(bound + 1):
            yield from walk(i + 1, N, acc + pieces[i](N), chain + [N])

    yield from walk(0, top, 0, [])


def is_admissible(v: Vector) -> bool:
    return min_exponent(tuple(v)) >= 0


@lru_cache(maxsize=4096)
def _eval_S_cached(ell, t, v, q_cap, z_cap):
    if not is_admissible(v):
        raise ValueError(f"inadmissible vector {v}: some summand has a negative q-exponent")
    w = [v[i] - (v[i - 1] if i else 0) for i in range(ell)]
    return _quadratic_sum(ell, w, t, q_cap, z_cap)


def eval_S(ell: int, t: int, v: Sequence[int], q_cap: int, z_cap: int) -> BivariateSeries:
    """The auxiliary multisum S(t; v; z, q) in l summation indices."""
    v = tuple(int(x) for x in v)
    if len(v) != ell:
        raise ValueError(f"vector {v} does not have length {ell}")
    if t < 0:
        raise ValueError("t must be >= 0")
    return _eval_S_cached(ell, t, v, q_cap, z_cap)


@lru_cache(maxsize=256)
def eval_T_multisum(ell: int, b: int, q_cap: int, z_cap: int) -> BivariateSeries:
    """Closed form for T_(l-b, b)(z, q), in the binomial-exponent shape.

    Exponent: sum_i C(N_i + 1, 2) - (N_2 + N_4 + ... + N_2b).
    """
    if ell < 1 or not 0 <= b <= ell // 2:
        raise ValueError(f"need l >= 1 and 0 <= b <= l/2, got l={ell}, b={b}")
    linear = [-1 if (i % 2 == 0 and i <= 2 * b) else 0 for i in range(1, ell + 1)]
    return _quadratic_sum(ell, linear, 0, q_cap, z_cap)


@lru_cache(maxsize=256)
def eval_C_multisum(ell: int, b: int, q_cap: int, z_cap: int) -> BivariateSeries:
    """Closed form for C_(l-b, b)(z, q): all 2-row cylindric partitions.

    For l = 1 there are no summation indices and the sum is taken to be 1,
    leaving 1 / (zq; q)_inf; enumeration confirms this.
    """
    if ell < 1 or not 0 <= b <= ell // 2:
        raise ValueError(f"need l >= 1 and 0 <= b <= l/2, got l={ell}, b={b}")
    k = ell // 2
    s = 1 if ell % 2 else 2
    pieces = [(lambda N, i=i: N * N + (N if i > b else 0)) for i in range(1, k + 1)]
    total = BivariateSeries(q_cap, z_cap)
    rows = [[0] * (z_cap + 1) for _ in range(q_cap + 1)]
    for chain, expo in _chains(k, z_cap, q_cap, pieces):
        cap = q_cap - expo
        coeffs = (1,) + (0,) * cap
        for i in range(k - 1):
            coeffs = trunc_mul(coeffs, inv_qpoch(chain[i] - chain[i + 1], 1, cap), cap)
        if k:
            coeffs = trunc_mul(coeffs, inv_qpoch(chain[-1], s, cap), cap)
        n1 = chain[0] if chain else 0
        for d, c in enumerate(coeffs):
            rows[expo + d][n1] += c
    total = BivariateSeries(q_cap, z_cap, rows)
    for j in range(1, q_cap + 1):
        total = div_one_minus(total, 1, j)
    return total


def eval_level1(r: int, q_cap: int, z_cap: int) -> BivariateSeries:
    """T_c(z, q) for any level-1 profile of rank r.

    1 + sum_{n>=1} z^n ((q^r;q^r)_n/(q)_n - (q^r;q^r)_{n-1}/(q)_{n-1}).
    """
    if r < 2:
        raise ValueError("rank must be >= 2")

    def ratio(n):
        num = pochhammer(Monomial(0, r), n, r, q_cap)
        den = pochhammer(Monomial(0, 1), n, 1, q_cap)
        return [row[0] for row in series_mul(num, series_inverse(den)).rows]

    rows = [[0] * (z_cap + 1) for _ in range(q_cap + 1)]
    rows[0][0] = 1
    prev = ratio(0)
    for n in range(1, z_cap + 1):
        cur = ratio(n)
        for d in range(q_cap + 1):
            rows[d][n] += cur[d] - prev[d]
        prev = cur
    return BivariateSeries(q_cap, z_cap, rows)


def _poch_inf(q_exp, step, q_cap, coeff=1):
    return pochhammer(Monomial(0, q_exp, coeff), INFINITY, step, q_cap)


def eval_product_univariate(profile, q_cap: int) -> BivariateSeries:
    """The principal-character product for T_c(1, q), with m = r + l.

    (q^r;q^r)_inf (q^m;q^m)_inf^(r-1) / (q)_inf^r
        * prod_{i<j} theta(q^(j-i+c_i+...+c_(j-1)); q^m)
    """
    profile = as_profile(profile)
    r, ell = profile.rank, profile.level
    if ell < 1:
        raise ValueError("level must be >= 1")
    m = r + ell
    c = profile.c
    acc = _poch_inf(r, r, q_cap)
    pm = _poch_inf(m, m, q_cap)
    for _ in range(r - 1):
        acc = series_mul(acc, pm)
    inv_q = series_inverse(_poch_inf(1, 1, q_cap))
    for _ in range(r):
        acc = series_mul(acc, inv_q)
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            acc = series_mul(acc, theta_trunc(j - i + sum(c[i - 1 : j - 1]), m, q_cap))
    return acc


def product_two_row(ell: int, b: int, q_cap: int) -> BivariateSeries:
    """(-q;q)_inf (q^(b+1), q^(l-b+1), q^(l+2); q^(l+2))_inf / (q;q)_inf."""
    mod = ell + 2
    acc = _poch_inf(1, 1, q_cap, coeff=-1)
    for e in (b + 1, ell - b + 1, ell + 2):
        acc = series_mul(acc, _poch_inf(e, mod, q_cap))
    return series_mul(acc, series_inverse(_poch_inf(1, 1, q_cap)))


def product_dhk(ell: int, a: int, q_cap: int) -> BivariateSeries:
    """(q^(a+1), q^(l-a+1), q^(l+2); q^(l+2))_inf / ((q;q^2)_inf (q;q)_inf)."""
    mod = ell + 2
    acc = series_const(1, q_cap, 0)
    for e in (a + 1, ell - a + 1, ell + 2):
        acc = series_mul(acc, _poch_inf(e, mod, q_cap))
    den = series_mul(_poch_inf(1, 2, q_cap), _poch_inf(1, 1, q_cap))
    return series_mul(acc, series_inverse(den))


def _z_free(values, q_cap):
    return BivariateSeries.from_q_list(values, q_cap, 0)


# -- building blocks for the functional equations -----------------------------


def _over_one_minus(f: BivariateSeries, k: int) -> BivariateSeries:
    """f(z q^k) / (1 - z q^k)."""
    return div_one_minus(series_subst_z(f, k), 1, k) if k else div_one_minus(f, 1, 0)


def _geometric_tail(f: BivariateSeries, k: int) -> BivariateSeries:
    """z q^k / (1 - z q^k) * f(z q^k)."""
    return shift(_over_one_minus(f, k), 1, k)


def _diamond_lhs(f: BivariateSeries, mutate=False) -> BivariateSeries:
    tail = _geometric_tail(f, 2)
    return f - tail if mutate else f + tail


# -- checkers -----------------------------------------------------------------


def check_rel(ell: int, j: int, t: int, v: Sequence[int], q_cap: int, z_cap: int, mutate=False) -> CheckReport:
    """rel_j(t; v) for 1 <= j <= l, or rel_0(t; v) for j = 0."""
    v = tuple(v)
    if not 0 <= j <= ell:
        raise ValueError(f"j={j} outside 0..{ell}")
    sign = -1 if mutate else 1
    S = lambda tt, vv: eval_S(ell, tt, vv, q_cap, z_cap)  # noqa: E731
    d1 = vec_basis(ell, "delta", 1)
    if j == 0:
        third = shift(S(t + 1, vadd(v, d1)), 1, t + 1)
        residual = S(t, v) - S(t + 1, v) + sign * third
    else:
        Dj = vec_basis(ell, "Delta", j)
        e = v[j - 1] + j
        if e < 0:
            raise ValueError(f"inadmissible vector {v}: prefactor q^{e}")
        third = shift(S(t + 1, vadd(v, Dj)), 1, e)
        fourth = shift(S(t + 1, vadd(v, d1, Dj)), 1, e + 1)
        residual = S(t, v) - S(t, vadd(v, vec_basis(ell, "e", j))) - sign * third + fourth
    name = f"rel_{j}(t={t}; v={list(v)}) l={ell}" + (" [mutated]" if mutate else "")
    return CheckReport.from_residual(name, residual)


def check_four_term(ell: int, i: int, q_cap: int, z_cap: int, mutate=False) -> CheckReport:
    """Four-term S-relation for 1 <= i < l/2, or its three-term form at i = l/2."""
    d1 = vec_basis(ell, "delta", 1)
    e12 = vadd(vec_basis(ell, "e", 1), vec_basis(ell, "e", 2))
    eta = lambda k: vec_basis(ell, "eta", k)  # noqa: E731
    S = lambda vv: eval_S(ell, 1, vv, q_cap, z_cap)  # noqa: E731
    if 1 <= i and 2 * i < ell:
        last = S(vadd(d1, vneg(eta(i + 1))))
        residual = (
            S(vadd(d1, vneg(eta(i - 1))))
            - S(vadd(vscale(2, d1), vneg(eta(i))))
            - S(vadd(e12, vneg(eta(i))))
            + (-last if mutate else last)
        )
    elif ell % 2 == 0 and 2 * i == ell:
        lead = 1 if mutate else 2
        residual = (
            lead * S(vadd(d1, vneg(eta(i - 1))))
            - S(vadd(vscale(2, d1), vneg(eta(i))))
            - S(vadd(e12, vneg(eta(i))))
        )
    else:
        raise ValueError(f"i={i} out of range for l={ell}")
    name = f"fourterm l={ell} i={i}" + (" [mutated]" if mutate else "")
    return CheckReport.from_residual(name, residual)


def four_term_indices(ell: int) -> list[int]:
    return [i for i in range(1, ell // 2 + 1) if 2 * i < ell or (ell % 2 == 0 and 2 * i == ell)]


DIAMOND_MODES = ("S", "T", "enum")


def _R_provider(ell, mode, q_cap, z_cap):
    if mode == "S":
        return lambda i: eval_S(ell, 0, vneg(vec_basis(ell, "eta", i)), q_cap, z_cap)
    if mode == "T":
        return lambda i: eval_T_multisum(ell, i, q_cap, z_cap)
    if mode == "enum":
        return lambda i: tight_gf(Profile((ell - i, i)), q_cap, z_cap)
    raise ValueError(f"unknown mode {mode!r}")


def _diamond_system(ell, R, mutate):
    """The closed system in R_0..R_(l//2), as (label, residual) pairs."""
    out = []
    zq = lambda f: _over_one_minus(f, 1)  # noqa: E731
    zq2 = lambda f: _over_one_minus(f, 2)  # noqa: E731
    # edge: R_1 means T_(l-1,1), which is R_0 again when l = 1
    out.append(("edge i=0", _diamond_lhs(R(0), mutate) - zq(R(1 if ell >= 2 else 0))))
    for i in range(1, ell // 2 + 1):
        if 2 * i < ell - 1:
            rhs = zq(R(i - 1)) + zq(R(i + 1)) - zq2(R(i))
            out.append((f"general i={i}", _diamond_lhs(R(i), mutate) - rhs))
        elif ell % 2 == 0 and 2 * i == ell:
            rhs = 2 * zq(R(i - 1)) - zq2(R(i))
            out.append((f"even middle i={i}", _diamond_lhs(R(i), mutate) - rhs))
        elif ell % 2 == 1 and 2 * i == ell - 1:
            rhs = zq(R(i - 1)) + zq(R(i)) - zq2(R(i))
            out.append((f"odd middle i={i}", _diamond_lhs(R(i), mutate) - rhs))
    return out


def _diamond_full(ell, T, mutate):
    """The relations over all profiles (l-i, i), 0 <= i <= l, with T(i) = T_(l-i,i)."""
    out = []
    zq = lambda f: _over_one_minus(f, 1)  # noqa: E731
    zq2 = lambda f: _over_one_minus(f, 2)  # noqa: E731
    out.append((f"edge ({ell},0)", _diamond_lhs(T(0), mutate) - zq(T(1))))
    out.append((f"edge (0,{ell})", _diamond_lhs(T(ell), mutate) - zq(T(ell - 1))))
    for i in range(1, ell):
        rhs = zq(T(i - 1)) + zq(T(i + 1)) - zq2(T(i))
        out.append((f"main ({ell - i},{i})", _diamond_lhs(T(i), mutate) - rhs))
    return out


def check_diamond(ell: int, q_cap: int, z_cap: int, mode: str = "S", mutate=False) -> list[CheckReport]:
    """Diamond relations with R realized by S(0; -eta_i), the T multisum, or enumeration.

    Modes ``S`` and ``T`` check the closed system in R_0..R_(l//2) with its
    initial conditions, and mode ``S`` also compares against ``T``.  Mode
    ``enum`` checks every relation over profiles (l-i, i), 0 <= i <= l.
    """
    if ell < 1:
        raise ValueError("level must be >= 1")
    tag = " [mutated]" if mutate else ""
    R = _R_provider(ell, mode, q_cap, z_cap)
    reports = []
    if mode == "enum":
        for label, res in _diamond_full(ell, R, mutate):
            reports.append(CheckReport.from_residual(f"diamond[enum] l={ell} {label}{tag}", res))
        return reports
    for label, res in _diamond_system(ell, R, mutate):
        reports.append(CheckReport.from_residual(f"diamond[{mode}] l={ell} {label}{tag}", res))
    for i in range(ell // 2 + 1):
        f = R(i)
        z_zero = all(f.coeff(n, 0) == (1 if n == 0 else 0) for n in range(f.q_cap + 1))
        q_zero = all(f.coeff(0, m) == (1 if m == 0 else 0) for m in range(f.z_cap + 1))
        reports.append(
            _boolean_report(f"diamond[{mode}] l={ell} initial R_{i}(0,q)=R_{i}(z,0)=1", z_zero and q_zero, q_cap, z_cap)
        )
        if mode == "S":
            res = f - eval_T_multisum(ell, i, q_cap, z_cap)
            reports.append(CheckReport.from_residual(f"diamond[S] l={ell} R_{i}: S(0;-eta_{i}) = T multisum", res))
    return reports


def check_cw(profile, q_cap: int, z_cap: int, mutate=False) -> CheckReport:
    """Tight Corteel-Welsh relation, with every T series from enumeration.

    T_c + zq^r/(1-zq^r) T_c(zq^r) = sum_{J} (-1)^(|J|-1) T_c(J)(zq^|J|)/(1-zq^|J|).
    The mutation drops the zq^r correction term on the left.
    """
    profile = as_profile(profile)
    if profile.level < 1:
        raise ValueError("level must be >= 1")
    r = profile.rank
    T = lambda p: tight_gf(p, q_cap, z_cap)  # noqa: E731
    lhs = T(profile)
    if not mutate:
        lhs = lhs + _geometric_tail(T(profile), r)
    rhs = BivariateSeries(q_cap, z_cap)
    for J in nonempty_subsets(profile_support(profile)):
        term = _over_one_minus(T(profile_child(profile, J)), len(J))
        rhs = rhs + term if len(J) % 2 else rhs - term
    name = f"cw c=({profile})" + (" [mutated]" if mutate else "")
    return CheckReport.from_residual(name, lhs - rhs)


def check_tight_rec2(c1: int, c2: int, q_cap: int, z_cap: int, mutate=False) -> CheckReport:
    """T_(c1,c2) = 1 + sum_{a != c2} zq^|a-c2|/(1-zq^|a-c2|) T_(l-a,a)(zq^|a-c2|).

    The mutation uses the signed difference a - c2 in place of |a - c2|,
    clamped at 0 where it would go negative.
    """
    ell = c1 + c2
    if ell < 1:
        raise ValueError("level must be >= 1")
    rhs = series_const(1, q_cap, z_cap)
    for a in range(ell + 1):
        if a == c2:
            continue
        k = max(a - c2, 0) if mutate else abs(a - c2)
        rhs = rhs + shift(_over_one_minus(tight_gf(Profile((ell - a, a)), q_cap, z_cap), k), 1, k)
    lhs = tight_gf(Profile((c1, c2)), q_cap, z_cap)
    name = f"rec2 c=({c1},{c2})" + (" [mutated]" if mutate else "")
    return CheckReport.from_residual(name, lhs - rhs)


def check_dhk_rec(level: int, ground_color: int, q_cap: int, z_cap: int, mutate=False) -> CheckReport:
    """D_a = 1 + sum_{j != a} zq^|j-a|/(1-zq^|j-a|) D_j(zq^|j-a|); the mutation drops the 1."""
    rhs = BivariateSeries(q_cap, z_cap) if mutate else series_const(1, q_cap, z_cap)
    for j in range(level + 1):
        if j == ground_color:
            continue
        rhs = rhs + _geometric_tail(gf_dhk(level, j, q_cap, z_cap), abs(j - ground_color))
    lhs = gf_dhk(level, ground_color, q_cap, z_cap)
    name = f"dhkrec l={level} a={ground_color}" + (" [mutated]" if mutate else "")
    return CheckReport.from_residual(name, lhs - rhs)


def check_T_multisum(ell: int, b: int, q_cap: int, z_cap: int) -> list[CheckReport]:
    """The T multisum against tight enumeration, for (l-b, b) and (b, l-b)."""
    f = eval_T_multisum(ell, b, q_cap, z_cap)
    return [
        CheckReport.from_residual(f"T multisum l={ell} b={b} vs enum ({p[0]},{p[1]})", f - tight_gf(Profile(p), q_cap, z_cap))
        for p in ((ell - b, b), (b, ell - b))
    ]


def check_C_multisum(ell: int, b: int, q_cap: int, z_cap: int) -> list[CheckReport]:
    f = eval_C_multisum(ell, b, q_cap, z_cap)
    return [
        CheckReport.from_residual(
            f"C multisum l={ell} b={b} vs enum ({p[0]},{p[1]})", f - cylindric_gf(Profile(p), q_cap, z_cap)
        )
        for p in ((ell - b, b), (b, ell - b))
    ]


def level_one_profiles(r: int) -> list[Profile]:
    return [Profile(tuple(1 if k == i else 0 for k in range(r))) for i in range(r)]


def check_level1(r: int, q_cap: int, z_cap: int) -> list[CheckReport]:
    f = eval_level1(r, q_cap, z_cap)
    return [
        CheckReport.from_residual(f"level1 r={r} vs enum ({p})", f - tight_gf(p, q_cap, z_cap))
        for p in level_one_profiles(r)
    ]


def check_products(profile, q_cap: int, enum_cap: int | None = None) -> list[CheckReport]:
    """The principal-character product against the other product shapes and enumeration.

    For 2-row profiles (l-b, b) this also compares with the two-row display,
    the DHK product (ground color b) and DHK enumeration at z = 1.
    """
    profile = as_profile(profile)
    enum_cap = q_cap if enum_cap is None else enum_cap
    prod = eval_product_univariate(profile, q_cap)
    reports = []
    if profile.rank == 2:
        ell, b = profile.level, profile.c[1]
        reports.append(
            CheckReport.from_residual(f"product ({profile}) vs two-row display", prod - product_two_row(ell, b, q_cap))
        )
        reports.append(CheckReport.from_residual(f"product ({profile}) vs DHK product", prod - product_dhk(ell, b, q_cap)))
    small = BivariateSeries.from_q_list([row[0] for row in prod.rows[: enum_cap + 1]], enum_cap, 0)
    enum = _z_free(tight_gf(profile, enum_cap, enum_cap).at_z_one(), enum_cap)
    reports.append(CheckReport.from_residual(f"product ({profile}) vs tight enumeration at z=1", small - enum))
    if profile.rank == 2:
        dhk = _z_free(gf_dhk(profile.level, profile.c[1], enum_cap, enum_cap).at_z_one(), enum_cap)
        reports.append(CheckReport.from_residual(f"product ({profile}) vs DHK enumeration at z=1", small - dhk))
    return reports


def check_bijection(level: int, ground_color: int, cap: int) -> list[CheckReport]:
    """Round trips in both directions plus transport of weight and max part."""
    profile = Profile((level - ground_color, ground_color))
    tight = enumerate_tight(profile, cap)
    forward_ok, stats_ok = True, True
    for p in tight:
        lam = dhk_from_tight(p.rows, profile)
        if tight_from_dhk(lam) != (p.rows, profile):
            forward_ok = False
        if lam.weight != p.weight or lam.num_parts != p.max_part:
            stats_ok = False
    dhks = enumerate_dhk(level, ground_color, cap)
    backward_ok = True
    for lam in dhks:
        rows, prof = tight_from_dhk(lam)
        if dhk_from_tight(rows, prof) != lam:
            backward_ok = False
    counts_ok = len(dhks) == len(tight)
    tag = f"l={level} a={ground_color} cap={cap}"
    return [
        _boolean_report(f"bijection {tag} tight->DHK->tight", forward_ok, cap, cap, f"{len(tight)} partitions"),
        _boolean_report(f"bijection {tag} DHK->tight->DHK", backward_ok, cap, cap, f"{len(dhks)} partitions"),
        _boolean_report(f"bijection {tag} weight and max->#parts", stats_ok, cap, cap),
        _boolean_report(f"bijection {tag} equal counts", counts_ok, cap, cap),
    ]


# -- unimodality observation --------------------------------------------------


@dataclass(frozen=True)
class UnimodalRow:
    n: int
    conforms: bool
    violation_at: int | None = None


def _classify(coeffs: Sequence[int]) -> int | None:
    """Index of the first violation of rise / 1-or-2 wide peak / fall, or None."""
    support = [m for m, c in enumerate(coeffs) if c]
    if not support:
        return None
    lo, hi = support[0], support[-1]
    seq = coeffs[lo : hi + 1]
    for k, c in enumerate(seq):
        if c <= 0:
            return lo + k
    k = 0
    while k + 1 < len(seq) and seq[k + 1] > seq[k]:
        k += 1
    if k + 1 < len(seq) and seq[k + 1] == seq[k]:
        k += 1
    while k + 1 < len(seq):
        if seq[k + 1] >= seq[k]:
            return lo + k + 1
        k += 1
    return None


def check_unimodal(series: BivariateSeries) -> list[UnimodalRow]:
    """Classify each q^n coefficient polynomial in z.  Report only; nothing is asserted."""
    out = []
    for n in range(series.q_cap + 1):
        bad = _classify(series.q_coeffs(n))
        out.append(UnimodalRow(n, bad is None, bad))
    return out
