import itertools
import math
import random

import numpy as np
import pytest
import scipy.special as sc
import scipy.stats as ss
from hypothesis import given, settings
from hypothesis import strategies as st

from reprosignals.stats import (
    StatsError,
    chi_squared,
    mann_whitney_u,
    midranks,
    point_biserial,
    reg_incomplete_beta,
    reg_incomplete_gamma_p,
    reg_incomplete_gamma_q,
    std_normal_sf,
    student_t_sf,
)


# -- special functions -------------------------------------------------------

def test_gamma_q_closed_forms():
    for a in (0.1, 0.5, 1, 3.7, 50):
        assert reg_incomplete_gamma_q(a, 0) == 1.0
    assert reg_incomplete_gamma_q(1, 1) == pytest.approx(math.exp(-1), abs=1e-12)
    assert reg_incomplete_gamma_q(0.5, 2) == pytest.approx(math.erfc(math.sqrt(2)), abs=1e-12)
    for x in (0.01, 0.7, 3.0, 12.0, 40.0):
        assert reg_incomplete_gamma_q(1, x) == pytest.approx(math.exp(-x), abs=1e-12)
        # Q(2, x) = (1 + x) e^-x
        assert reg_incomplete_gamma_q(2, x) == pytest.approx((1 + x) * math.exp(-x), abs=1e-12)


@pytest.mark.parametrize("a", [0.05, 0.5, 1.0, 2.5, 10.0, 75.0, 300.0])
@pytest.mark.parametrize("x", [1e-6, 0.1, 0.9, 2.0, 9.5, 11.0, 80.0, 320.0])
def test_gamma_against_scipy(a, x):
    assert reg_incomplete_gamma_q(a, x) == pytest.approx(sc.gammaincc(a, x), abs=1e-10)
    assert reg_incomplete_gamma_p(a, x) == pytest.approx(sc.gammainc(a, x), abs=1e-10)


def test_gamma_domain():
    with pytest.raises(StatsError):
        reg_incomplete_gamma_q(0, 1)
    with pytest.raises(StatsError):
        reg_incomplete_gamma_q(1, -1)


def test_beta_closed_forms():
    for a, b in ((1, 1), (2, 5), (0.5, 0.5)):
        assert reg_incomplete_beta(a, b, 0) == 0.0
        assert reg_incomplete_beta(a, b, 1) == 1.0
    assert reg_incomplete_beta(1, 1, 0.5) == pytest.approx(0.5, abs=1e-12)
    assert reg_incomplete_beta(1, 2, 0.3) == pytest.approx(1 - 0.7 ** 2, abs=1e-12)
    for x in np.linspace(0.01, 0.99, 25):
        assert reg_incomplete_beta(1, 2, x) == pytest.approx(1 - (1 - x) ** 2, abs=1e-12)
        # I_x(a, 1) = x^a
        assert reg_incomplete_beta(3.5, 1, x) == pytest.approx(x ** 3.5, abs=1e-12)


@pytest.mark.parametrize("a, b", [(0.5, 0.5), (1, 30), (15, 0.5), (40, 60), (200, 3)])
@pytest.mark.parametrize("x", [0.001, 0.2, 0.5, 0.77, 0.999])
def test_beta_against_scipy(a, b, x):
    assert reg_incomplete_beta(a, b, x) == pytest.approx(sc.betainc(a, b, x), abs=1e-10)


def test_beta_domain():
    with pytest.raises(StatsError):
        reg_incomplete_beta(0, 1, 0.5)
    with pytest.raises(StatsError):
        reg_incomplete_beta(1, 1, 1.5)


def test_student_t():
    for df in (1, 2, 7.5, 100):
        assert student_t_sf(0, df) == 0.5
    # df=2: F(t) = 1/2 + t / (2 sqrt(t^2 + 2))
    t = 2.828
    assert student_t_sf(t, 2) == pytest.approx(0.5 - t / (2 * math.sqrt(t * t + 2)), abs=1e-12)
    assert student_t_sf(t, 2) == pytest.approx(0.0528, abs=1e-4)
    # df=1 is Cauchy
    assert student_t_sf(1.0, 1) == pytest.approx(0.25, abs=1e-12)
    for t in (-5, -1.2, 0.3, 4.4):
        for df in (1, 3, 29):
            assert student_t_sf(t, df) + student_t_sf(-t, df) == pytest.approx(1, abs=1e-12)
            assert student_t_sf(t, df) == pytest.approx(ss.t.sf(t, df), abs=1e-10)


def test_std_normal_sf():
    assert std_normal_sf(0) == 0.5
    assert std_normal_sf(1.96) == pytest.approx(0.0249979, abs=1e-7)
    for z in (0.1, 1.0, 2.5, 6.0):
        assert std_normal_sf(-z) == pytest.approx(1 - std_normal_sf(z), abs=1e-15)


@given(st.floats(0.01, 100), st.floats(0, 300))
def test_gamma_p_plus_q(a, x):
    p, q = reg_incomplete_gamma_p(a, x), reg_incomplete_gamma_q(a, x)
    assert 0 <= p <= 1 and 0 <= q <= 1
    assert p + q == pytest.approx(1, abs=1e-12)


@given(st.floats(0.1, 50), st.floats(0, 100), st.floats(0, 100))
def test_gamma_q_monotone(a, x1, x2):
    lo, hi = sorted((x1, x2))
    assert reg_incomplete_gamma_q(a, hi) <= reg_incomplete_gamma_q(a, lo) + 1e-15


@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(0.5, 200))
def test_t_sf_monotone(t1, t2, df):
    lo, hi = sorted((t1, t2))
    assert 0 <= student_t_sf(hi, df) <= student_t_sf(lo, df) + 1e-15 <= 1 + 1e-15


# -- point-biserial ----------------------------------------------------------

def test_point_biserial_hand_case():
    res = point_biserial([1, 2, 3, 4], [0, 0, 1, 1])
    # M1=3.5, M0=1.5, s_n=sqrt(1.25): r = 2/sqrt(1.25) * 1/2
    assert res.statistic == pytest.approx(2 / math.sqrt(1.25) / 2, abs=1e-12)
    assert res.statistic == pytest.approx(0.894427, abs=1e-6)
    t = res.statistic * math.sqrt(2 / (1 - res.statistic ** 2))
    assert t == pytest.approx(2.828, abs=1e-3)
    # closed-form df=2 tail, doubled
    assert res.p_value == pytest.approx(1 - t / math.sqrt(t * t + 2), abs=1e-12)
    assert res.p_value == pytest.approx(0.1056, abs=1e-4)
    assert res.df == 2 and (res.n_group1, res.n_group0) == (2, 2)


def test_point_biserial_complement():
    a = point_biserial([1, 2, 3, 4], [0, 0, 1, 1])
    b = point_biserial([1, 2, 3, 4], [1, 1, 0, 0])
    assert b.statistic == pytest.approx(-a.statistic, abs=1e-15)
    assert b.p_value == pytest.approx(a.p_value, abs=1e-15)


def test_point_biserial_errors():
    with pytest.raises(StatsError, match="degenerate dichotomy"):
        point_biserial([1, 2, 3], [1, 1, 1])
    with pytest.raises(StatsError, match="constant feature"):
        point_biserial([2, 2, 2], [0, 1, 1])
    with pytest.raises(StatsError):
        point_biserial([1, 2], [0, 1])


def test_point_biserial_perfect_separation():
    res = point_biserial([0, 0, 1, 1], [0, 0, 1, 1])
    assert res.statistic == pytest.approx(1.0) and res.p_value == 0.0


def test_point_biserial_matches_scipy():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(5, 60))
        labels = rng.integers(0, 2, n)
        labels[:2] = [0, 1]
        values = rng.normal(size=n) + labels * rng.normal()
        ref = ss.pointbiserialr(labels, values)
        res = point_biserial(values, labels)
        assert res.statistic == pytest.approx(ref.statistic, abs=1e-12)
        assert res.p_value == pytest.approx(ref.pvalue, abs=1e-10)


# -- Mann-Whitney U ----------------------------------------------------------

def test_midranks():
    assert midranks([10, 20, 20, 5]) == [2.0, 3.5, 3.5, 1.0]


def enumerate_mwu(group1, group0):
    """Exhaustive oracle: U by pair counting, p by enumerating all rank splits."""
    n1, n0 = len(group1), len(group0)
    u1 = sum((x > y) + 0.5 * (x == y) for x in group1 for y in group0)
    u = min(u1, n1 * n0 - u1)
    n = n1 + n0
    total = extreme = 0
    for chosen in itertools.combinations(range(1, n + 1), n1):
        ui = sum(chosen) - n1 * (n1 + 1) / 2
        total += 1
        extreme += min(ui, n1 * n0 - ui) <= u
    return u, extreme / total


def test_mwu_separated_groups():
    res = mann_whitney_u([1, 2, 3], [4, 5, 6])
    assert res.statistic == 0
    assert res.p_value == pytest.approx(0.1, abs=1e-15)
    assert res.method_note == "exact"
    assert enumerate_mwu([1, 2, 3], [4, 5, 6]) == (0, 0.1)


def test_mwu_identical_groups():
    res = mann_whitney_u([1, 2], [1, 2])
    assert res.statistic == 2
    assert res.p_value == 1.0


def test_mwu_errors():
    with pytest.raises(StatsError):
        mann_whitney_u([], [1])
    with pytest.raises(StatsError, match="all values tied"):
        mann_whitney_u([3, 3], [3, 3, 3])
    with pytest.raises(StatsError):
        mann_whitney_u([1, 1], [1, 2], method="exact")


@pytest.mark.parametrize("seed", range(40))
def test_mwu_exact_against_enumeration(seed):
    rng = random.Random(seed)
    n1, n0 = rng.randint(1, 8), rng.randint(1, 8)
    pool = rng.sample(range(1000), n1 + n0)
    g1, g0 = pool[:n1], pool[n1:]
    u, p = enumerate_mwu(g1, g0)
    res = mann_whitney_u(g1, g0)
    assert res.statistic == u
    assert res.p_value == p


@pytest.mark.parametrize("seed", range(20))
def test_mwu_against_scipy(seed):
    rng = np.random.default_rng(seed)
    n1, n0 = int(rng.integers(3, 40)), int(rng.integers(3, 40))
    # rounding forces ties
    g1 = np.round(rng.normal(0.3, 1, n1), 1)
    g0 = np.round(rng.normal(0, 1, n0), 1)
    res = mann_whitney_u(g1, g0, method="approx")
    ref = ss.mannwhitneyu(g1, g0, alternative="two-sided", use_continuity=True, method="asymptotic")
    assert res.statistic == pytest.approx(min(ref.statistic, n1 * n0 - ref.statistic))
    assert res.p_value == pytest.approx(ref.pvalue, abs=1e-10)


_sample = st.lists(st.integers(-20, 20), min_size=1, max_size=15)


@settings(max_examples=200)
@given(_sample, _sample)
def test_mwu_properties(g1, g0):
    if len(set(g1 + g0)) == 1:
        return
    res = mann_whitney_u(g1, g0)
    u1 = sum((x > y) + 0.5 * (x == y) for x in g1 for y in g0)
    u0 = sum((y > x) + 0.5 * (x == y) for x in g1 for y in g0)
    assert u1 + u0 == len(g1) * len(g0)
    assert res.statistic == min(u1, u0)
    assert 0 <= res.p_value <= 1
    swapped = mann_whitney_u(g0, g1)
    assert swapped.statistic == res.statistic
    assert swapped.p_value == pytest.approx(res.p_value, abs=1e-15)
    # strictly increasing transform
    transformed = mann_whitney_u([x ** 3 + 7 for x in g1], [x ** 3 + 7 for x in g0])
    assert transformed.statistic == res.statistic
    assert transformed.p_value == res.p_value


@pytest.mark.parametrize("seed", range(30))
def test_mwu_exact_vs_approx_at_eight(seed):
    rng = random.Random(seed)
    pool = rng.sample(range(10_000), 16)
    exact = mann_whitney_u(pool[:8], pool[8:], method="exact")
    approx = mann_whitney_u(pool[:8], pool[8:], method="approx")
    assert abs(exact.p_value - approx.p_value) <= 0.02


# -- chi-squared -------------------------------------------------------------

def test_chi_squared_fixtures():
    res = chi_squared([[10, 10], [10, 10]])
    assert res.statistic == 0 and res.p_value == 1.0
    plain = chi_squared([[20, 10], [10, 20]], yates=False)
    # E = 15 everywhere: 4 * 25/15
    assert plain.statistic == pytest.approx(20 / 3, abs=1e-12)
    # df=1 tail: 2 * Phi(-sqrt(chi2))
    assert plain.p_value == pytest.approx(2 * std_normal_sf(math.sqrt(20 / 3)), abs=1e-12)
    assert plain.p_value == pytest.approx(0.0098, abs=1e-4)
    yates = chi_squared([[20, 10], [10, 20]], yates=True)
    assert yates.statistic == pytest.approx(4 * 4.5 ** 2 / 15, abs=1e-12)
    assert yates.p_value == pytest.approx(0.0201, abs=1e-4)
    assert plain.df == 1


def test_chi_squared_yates_cap():
    # |O - E| = 0.25 < 0.5, so the corrected deviation is capped at zero
    res = chi_squared([[1, 2], [2, 3]], yates=True)
    assert res.statistic == 0.0 and res.p_value == 1.0


def test_chi_squared_errors():
    with pytest.raises(StatsError, match="empty margin"):
        chi_squared([[0, 0], [3, 4]])
    with pytest.raises(StatsError, match="empty margin"):
        chi_squared([[0, 5], [0, 4]])


_cell = st.integers(1, 60)
_table = st.integers(2, 4).flatmap(lambda k: st.lists(st.lists(_cell, min_size=k, max_size=k), min_size=2, max_size=2))


@given(_table, st.integers(2, 5), st.booleans())
def test_chi_squared_properties(table, k, yates):
    res = chi_squared(table, yates=False)
    ref = ss.chi2_contingency(np.array(table), correction=yates)
    mine = chi_squared(table, yates=yates)
    assert mine.statistic == pytest.approx(ref.statistic, rel=1e-10, abs=1e-12)
    assert mine.p_value == pytest.approx(ref.pvalue, abs=1e-10)
    scaled = chi_squared([[k * c for c in row] for row in table], yates=False)
    assert scaled.statistic == pytest.approx(k * res.statistic, rel=1e-10, abs=1e-10)
    permuted = chi_squared([list(reversed(row)) for row in reversed(table)], yates=False)
    assert permuted.statistic == pytest.approx(res.statistic, rel=1e-12, abs=1e-12)


def test_chi_squared_zero_iff_independent():
    assert chi_squared([[2, 4, 6], [3, 6, 9]], yates=False).statistic == pytest.approx(0, abs=1e-12)
    assert chi_squared([[2, 4, 6], [3, 6, 8]], yates=False).statistic > 0
