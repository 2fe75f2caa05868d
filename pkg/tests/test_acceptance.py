"""End-to-end acceptance criteria; each prints one [PASS]/[FAIL] line."""

import itertools
import subprocess
import sys
import time

import pytest

from cylq import identities as ids
from cylq.abacus import abacus_from_cylindric, cylindric_from_abacus, is_tight_abacus, yoke_stats
from cylq.cylinder import Profile, cylindric_gf, enumerate_cylindric, is_tight, tight_gf
from cylq.dhk import dhk_from_tight, enumerate_dhk, tight_from_dhk
from cylq.series import BivariateSeries

EXAMPLE = ((10, 8, 4, 3, 3), (9, 5, 1))


def two_row(max_level):
    return [Profile((ell - a, a)) for ell in range(1, max_level + 1) for a in range(ell + 1)]


def three_row(max_level):
    return [Profile(c) for c in itertools.product(range(max_level + 1), repeat=3) if 1 <= sum(c) <= max_level]


@pytest.fixture
def verdict(capsys):
    def record(number, failures, what):
        with capsys.disabled():
            status = "PASS" if not failures else "FAIL"
            print(f"\n[{status}] criterion {number}: {what}" + (f" ({len(failures)} failures)" if failures else ""))
        assert not failures, failures[:5]

    return record


def failed(reports):
    return [(r.name, r.first_nonzero_term) for r in reports if not r.residual_zero]


def test_criterion_01_bivariate_closed_form(verdict):
    bad = []
    for ell in range(1, 5):
        for b in range(ell // 2 + 1):
            f = ids.eval_T_multisum(ell, b, 15, 15)
            for c in ((ell - b, b), (b, ell - b)):
                if f != tight_gf(Profile(c), 15, 15):
                    bad.append((ell, b, c))
    verdict(1, bad, "T multisum equals tight enumeration, l <= 4, caps (15,15)")


def test_criterion_02_product_formulas(verdict):
    bad = []
    for p in two_row(4):
        ell, b = p.level, p.c[1]
        prod = ids.eval_product_univariate(p, 30)
        if prod != ids.product_two_row(ell, b, 30) or prod != ids.product_dhk(ell, b, 30):
            bad.append(("display", p.c))
    for p in two_row(4) + three_row(2):
        head = ids.eval_product_univariate(p, 15).at_z_one()
        if head != tight_gf(p, 15, 15).at_z_one():
            bad.append(("enumeration", p.c))
    verdict(2, bad, "product formulas vs displays (q_cap 30) and enumeration at z=1 (q_cap 15)")


def test_criterion_03_corteel_welsh(verdict):
    profiles = two_row(4) + three_row(2)
    bad = failed([ids.check_cw(p, 10, 10) for p in profiles])
    bad += [p.c for p in profiles if ids.check_cw(p, 10, 10, mutate=True).residual_zero]
    verdict(3, bad, "tight Corteel-Welsh residuals zero at (10,10); mutations nonzero")


def test_criterion_04_diamond(verdict):
    reports = [r for ell in range(1, 5) for m in ids.DIAMOND_MODES for r in ids.check_diamond(ell, 12, 12, m)]
    bad = failed(reports)
    for ell in range(1, 5):
        for m in ids.DIAMOND_MODES:
            if not failed(ids.check_diamond(ell, 12, 12, m, mutate=True)):
                bad.append(("mutation undetected", ell, m))
    verdict(4, bad, "diamond system zero in modes S/T/enum, l <= 4, caps (12,12)")


def test_criterion_05_proof_identities(verdict):
    reports = []
    for ell in range(1, 4):
        for v in itertools.product(range(-2, 3), repeat=ell):
            if not ids.is_admissible(v):
                continue
            for t in range(3):
                for j in range(ell + 1):
                    reports.append(ids.check_rel(ell, j, t, v, 10, 10))
    for ell in range(2, 6):
        for i in ids.four_term_indices(ell):
            reports.append(ids.check_four_term(ell, i, 10, 10))
    verdict(5, failed(reports), f"rel_j grid and four-term identities zero at (10,10), {len(reports)} instances")


def test_criterion_06_recurrences(verdict):
    reports = [ids.check_tight_rec2(*p.c, 10, 10) for p in two_row(4)]
    reports += [ids.check_dhk_rec(ell, a, 10, 10) for ell in range(1, 5) for a in range(ell + 1)]
    verdict(6, failed(reports), "two-row tight and DHK recurrences zero at (10,10)")


def test_criterion_07_bijection(verdict):
    bad = failed([r for p in two_row(4) for r in ids.check_bijection(p.level, p.c[1], 12)])
    lam = dhk_from_tight(EXAMPLE, (3, 0))
    if str(lam) != "8_2 + 7_3 + 7_3 + 5_1 + 4_0 + 3_1 + 3_1 + 3_1 + 2_0 + 1_1 + 0_0":
        bad.append(("example image", str(lam)))
    if (lam.weight, lam.num_parts) != (43, 10) or tight_from_dhk(lam) != (EXAMPLE, Profile((3, 0))):
        bad.append(("example statistics", lam.weight, lam.num_parts))
    verdict(7, bad, "bijection round trips and statistic transport, l <= 4, weight <= 12")


def test_criterion_08_all_cylindric(verdict):
    bad = []
    for ell in range(1, 5):
        for b in range(ell // 2 + 1):
            f = ids.eval_C_multisum(ell, b, 12, 12)
            for c in ((ell - b, b), (b, ell - b)):
                if f != cylindric_gf(Profile(c), 12, 12):
                    bad.append((ell, b, c))
    verdict(8, bad, "C multisum equals cylindric enumeration, l in 1..4, caps (12,12)")


def test_criterion_09_level_one(verdict):
    bad = failed([r for rank in (2, 3, 4) for r in ids.check_level1(rank, 12, 12)])
    verdict(9, bad, "level-1 formula equals tight enumeration, r in 2..4, caps (12,12)")


def test_criterion_10_abacus(verdict):
    bad = []
    for p in two_row(3):
        for part in enumerate_cylindric(p, 12):
            ab = abacus_from_cylindric(part.rows, p)
            tight = is_tight(part.rows)
            if cylindric_from_abacus(ab) != (part.rows, p) or is_tight_abacus(ab) != tight:
                bad.append(part.rows)
            if tight:
                st = yoke_stats(ab)
                v, s = st.vacancy_counts, st.shape_seq
                if any(v[i] - v[i - 1] != abs(s[i] - s[i - 1]) for i in range(1, len(v))):
                    bad.append(("gap law", part.rows))
    st = yoke_stats(abacus_from_cylindric(EXAMPLE, (3, 0)))
    if st.vacancy_counts != (0, 1, 2, 3, 3, 3, 4, 5, 7, 7, 8) or st.shape_seq != (0, 1, 0, 1, 1, 1, 0, 1, 3, 3, 2):
        bad.append(("example", st))
    verdict(10, bad, "abacus tightness equivalence and vacancy-gap law, l <= 3, weight <= 12")


def test_criterion_11_cli_check_all(verdict):
    bad = []
    start = time.perf_counter()
    ok = subprocess.run([sys.executable, "-m", "cylq", "check", "all"], capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    if ok.returncode != 0 or elapsed >= 60:
        bad.append(("check all", ok.returncode, round(elapsed, 1)))
    mutated = subprocess.run([sys.executable, "-m", "cylq", "check", "all", "--mutate"], capture_output=True, text=True)
    if mutated.returncode != 1:
        bad.append(("check all --mutate", mutated.returncode))
    verdict(11, bad, f"`check all` exits 0 in {elapsed:.1f}s; with --mutate exits 1")
