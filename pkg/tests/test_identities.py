import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cylq import identities as ids
from cylq.cylinder import Profile, cylindric_gf, tight_gf
from cylq.series import (
    INFINITY,
    BivariateSeries,
    Monomial,
    pochhammer,
    series_const,
    series_inverse,
    shift,
)

TIGHT_10 = BivariateSeries.from_terms([(0, 0, 1), (1, 1, 1), (2, 2, 1), (3, 2, 1), (3, 3, 1)], 3, 3)


def naive_S(ell, t, v, q_cap, z_cap):
    """Direct term-by-term summation with generic series operations only."""
    total = BivariateSeries(q_cap, z_cap)
    qpoch = lambda n: pochhammer(Monomial(0, 1), n, 1, q_cap, z_cap)  # noqa: E731
    for n in itertools.product(range(z_cap + 1), repeat=ell):
        N = [sum(n[i:]) for i in range(ell)]
        if N and N[0] > z_cap:
            continue
        expo = (sum(x * x for x in N) + sum(N)) // 2 + sum(a * b for a, b in zip(v, n))
        assert expo >= 0
        if expo > q_cap:
            continue
        n1 = N[0] if N else 0
        term = shift(qpoch(n1), n1, expo)
        for k in n:
            term = term * series_inverse(qpoch(k))
        term = term * series_inverse(pochhammer(Monomial(1, 1), n1 + t, 1, q_cap, z_cap))
        total = total + term
    return total


# -- vectors ---------------------------------------------------------------------


def test_vec_basis():
    assert ids.vec_basis(3, "delta", 2) == (0, 1, 1)
    assert ids.vec_basis(4, "eta", 1) == (0, 1, 1, 1)
    assert ids.vec_basis(4, "eta", 2) == (0, 1, 1, 2)
    assert ids.vec_basis(3, "Delta", 2) == (1, 2, 2)
    assert ids.vec_basis(2, "e", 3) == (0, 0)
    for ell in range(1, 6):
        for j in range(1, ell + 2):
            expected = ids.vadd(ids.vec_basis(ell, "delta", j), ids.vneg(ids.vec_basis(ell, "delta", j + 1)))
            assert ids.vec_basis(ell, "e", j) == expected
    with pytest.raises(ValueError):
        ids.vec_basis(3, "delta", -1)
    with pytest.raises(ValueError):
        ids.vec_basis(3, "theta", 1)


# -- evaluators ---------------------------------------------------------------------


def test_S_boundary_values():
    for ell in (1, 2, 3):
        for i in range(ell // 2 + 1):
            v = ids.vneg(ids.vec_basis(ell, "eta", i))
            assert ids.eval_S(ell, 0, v, 6, 0) == series_const(1, 6, 0)
            assert ids.eval_S(ell, 0, v, 0, 6) == series_const(1, 0, 6)
    assert ids.eval_S(1, 0, (0,), 3, 3) == TIGHT_10
    with pytest.raises(ValueError):
        ids.eval_S(1, 0, (-3,), 5, 5)
    with pytest.raises(ValueError):
        ids.eval_S(2, 0, (0,), 5, 5)


@pytest.mark.parametrize("ell", [1, 2])
def test_S_matches_naive_summation(ell):
    for v in itertools.product(range(-1, 2), repeat=ell):
        if not ids.is_admissible(v):
            continue
        for t in (0, 2):
            assert ids.eval_S(ell, t, v, 7, 5) == naive_S(ell, t, v, 7, 5), (v, t)


def test_admissibility_implies_shifted_entries_nonnegative():
    for ell in (1, 2, 3):
        for v in itertools.product(range(-3, 3), repeat=ell):
            if ids.is_admissible(v):
                assert all(x + j >= 0 for j, x in enumerate(v, start=1))
    assert not ids.is_admissible((-2,))
    assert ids.is_admissible((-1,))


def test_T_multisum_examples():
    assert ids.eval_T_multisum(1, 0, 3, 3) == TIGHT_10
    assert ids.eval_T_multisum(3, 1, 8, 0) == series_const(1, 8, 0)
    assert ids.eval_T_multisum(2, 1, 15, 15) == tight_gf(Profile((1, 1)), 15, 15)
    with pytest.raises(ValueError):
        ids.eval_T_multisum(3, 2, 5, 5)


def test_C_multisum_examples():
    assert ids.eval_C_multisum(2, 0, 10, 10) == cylindric_gf(Profile((2, 0)), 10, 10)
    assert ids.eval_C_multisum(2, 1, 10, 10) == cylindric_gf(Profile((1, 1)), 10, 10)
    assert ids.eval_C_multisum(3, 1, 9, 0) == series_const(1, 9, 0)
    # no summation indices: only the prefactor remains
    inf = series_inverse(pochhammer(Monomial(1, 1), INFINITY, 1, 12, 12))
    assert ids.eval_C_multisum(1, 0, 12, 12) == inf == cylindric_gf(Profile((1, 0)), 12, 12)


def test_level1_examples():
    assert ids.eval_level1(2, 3, 3) == TIGHT_10
    assert ids.eval_level1(4, 7, 0) == series_const(1, 7, 0)
    assert ids.eval_level1(3, 10, 10) == tight_gf(Profile((1, 0, 0)), 10, 10)
    with pytest.raises(ValueError):
        ids.eval_level1(1, 3, 3)


def test_product_examples():
    assert ids.eval_product_univariate((1, 0), 5).at_z_one() == [1, 1, 1, 2, 2, 3]
    for ell in range(1, 5):
        for b in range(ell + 1):
            p = ids.eval_product_univariate((ell - b, b), 30)
            assert p == ids.product_two_row(ell, b, 30)
            assert p == ids.product_dhk(ell, b, 30)


# -- checkers ---------------------------------------------------------------------


def assert_zero(reports):
    reports = reports if isinstance(reports, list) else [reports]
    assert reports
    for r in reports:
        assert r.residual_zero, (r.name, r.first_nonzero_term)
        assert r.first_nonzero_term is None


def assert_caught(reports):
    reports = reports if isinstance(reports, list) else [reports]
    bad = [r for r in reports if not r.residual_zero]
    assert bad
    for r in bad:
        n, m, c = r.first_nonzero_term
        assert c != 0 and 0 <= n <= r.q_cap and 0 <= m <= r.z_cap


@pytest.mark.parametrize("ell,j,t,v", [(2, 0, 0, (0, 0)), (2, 1, 1, (0, 0)), (3, 2, 1, (0, -1, 0)), (1, 1, 2, (-1,))])
def test_rel(ell, j, t, v):
    assert_zero(ids.check_rel(ell, j, t, v, 12, 12))
    assert_caught(ids.check_rel(ell, j, t, v, 12, 12, mutate=True))


@given(st.integers(1, 3).flatmap(lambda ell: st.tuples(
    st.just(ell), st.integers(0, ell), st.integers(0, 2), st.lists(st.integers(-2, 2), min_size=ell, max_size=ell)
)))
def test_rel_random(args):
    ell, j, t, v = args
    if not ids.is_admissible(v):
        with pytest.raises(ValueError):
            ids.check_rel(ell, j, t, v, 8, 8)
        return
    assert_zero(ids.check_rel(ell, j, t, v, 8, 8))


@pytest.mark.parametrize("ell", [2, 3, 4, 5, 6])
def test_four_term(ell):
    assert ids.four_term_indices(ell)
    for i in ids.four_term_indices(ell):
        assert_zero(ids.check_four_term(ell, i, 12, 12))
        assert_caught(ids.check_four_term(ell, i, 12, 12, mutate=True))
    with pytest.raises(ValueError):
        ids.check_four_term(ell, ell, 8, 8)


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
@pytest.mark.parametrize("mode", ids.DIAMOND_MODES)
def test_diamond(ell, mode):
    assert_zero(ids.check_diamond(ell, 12, 12, mode))
    assert_caught(ids.check_diamond(ell, 12, 12, mode, mutate=True))


def test_diamond_report_names():
    names = [r.name for r in ids.check_diamond(3, 8, 8, "T")]
    assert any("edge" in n for n in names) and any("odd middle" in n for n in names)
    names = [r.name for r in ids.check_diamond(2, 8, 8, "T")]
    assert any("even middle" in n for n in names)


CW_PROFILES = [(1, 0), (1, 1), (2, 1), (3, 1), (2, 2), (0, 4), (1, 0, 0), (1, 1, 0), (0, 2, 0)]


@pytest.mark.parametrize("c", CW_PROFILES)
def test_cw(c):
    caps = (10, 10) if len(c) == 2 else (8, 8)
    assert_zero(ids.check_cw(c, *caps))
    assert_caught(ids.check_cw(c, *caps, mutate=True))
    with pytest.raises(ValueError):
        ids.check_cw((0, 0), 5, 5)


@pytest.mark.parametrize("c", [(ell - a, a) for ell in range(1, 5) for a in range(ell + 1)])
def test_rec2(c):
    assert_zero(ids.check_tight_rec2(*c, 10, 10))


def test_rec2_mutation():
    assert_caught(ids.check_tight_rec2(2, 1, 10, 10, mutate=True))
    # with c2 = 0 the signed and absolute differences coincide
    assert_zero(ids.check_tight_rec2(2, 0, 10, 10, mutate=True))
    with pytest.raises(ValueError):
        ids.check_tight_rec2(0, 0, 5, 5)


@pytest.mark.parametrize("ell,a", [(ell, a) for ell in range(1, 5) for a in range(ell + 1)])
def test_dhk_rec(ell, a):
    assert_zero(ids.check_dhk_rec(ell, a, 10, 10))
    assert_caught(ids.check_dhk_rec(ell, a, 10, 10, mutate=True))


def test_identities_hold_at_larger_caps():
    for ell in range(1, 5):
        for a in range(ell + 1):
            assert_zero(ids.check_cw((ell - a, a), 15, 15))
            assert_zero(ids.check_tight_rec2(ell - a, a, 15, 15))
    for c in [(1, 0, 0), (0, 1, 0), (2, 0, 0), (1, 1, 0), (1, 0, 1)]:
        assert_zero(ids.check_cw(c, 8, 8))


def test_closed_form_checkers():
    assert_zero(ids.check_T_multisum(3, 1, 12, 12))
    assert_zero(ids.check_C_multisum(4, 2, 10, 10))
    assert_zero(ids.check_level1(4, 10, 10))
    assert len(ids.level_one_profiles(3)) == 3


def test_products_and_bijection_checkers():
    assert_zero(ids.check_products((2, 1), 20, 12))
    assert_zero(ids.check_products((1, 1, 0), 12))
    reports = ids.check_bijection(3, 0, 12)
    assert len(reports) == 4
    assert_zero(reports)


def test_report_json():
    rep = ids.check_dhk_rec(2, 1, 6, 6, mutate=True)
    data = rep.to_json()
    assert set(data) == {"name", "q_cap", "z_cap", "ok", "first_nonzero"}
    assert data["ok"] is False and isinstance(data["first_nonzero"][2], str)
    assert ids.check_dhk_rec(2, 1, 6, 6).to_json()["first_nonzero"] is None


# -- unimodality report --------------------------------------------------------------------


def test_unimodal_examples():
    rows = ids.check_unimodal(series_const(1, 3, 3))
    assert rows[0].conforms and all(r.conforms for r in rows)
    gap = BivariateSeries.from_terms([(2, 1, 1), (2, 3, 1)], 3, 3)
    row = ids.check_unimodal(gap)[2]
    assert not row.conforms and row.violation_at == 2
    peak = BivariateSeries.from_terms([(1, m, c) for m, c in enumerate([1, 3, 3, 2])], 1, 3)
    assert ids.check_unimodal(peak)[1].conforms
    flat = BivariateSeries.from_terms([(1, m, c) for m, c in enumerate([1, 3, 3, 3])], 1, 3)
    assert ids.check_unimodal(flat)[1].violation_at == 3


def test_unimodal_on_tight_gf_is_report_only():
    # equal counts at max n and n-1 for weight n >= 4: ((n),()), ((),(n)) and ((n-1),(1)), ((1),(n-1))
    f = tight_gf(Profile((1, 1)), 12, 12)
    rows = ids.check_unimodal(f)
    assert all(rows[n].conforms for n in range(4))
    for n in range(4, 13):
        assert f.coeff(n, n) == f.coeff(n, n - 1) == 2
        assert not rows[n].conforms and rows[n].violation_at == n
