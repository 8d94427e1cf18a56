"""Hypothesis tests and the special functions behind their p-values.

All p-values are two-sided. Nothing here depends on scipy; the test suite uses
scipy only as an independent reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10_000


class StatsError(ValueError):
    pass


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    n_group1: int
    n_group0: int
    df: float | None = None
    method_note: str = ""

    __test__ = False  # not a pytest class

    @property
    def n(self) -> int:
        return self.n_group1 + self.n_group0


# -- special functions -------------------------------------------------------


def _gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by its power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    else:
        raise StatsError(f"incomplete gamma series did not converge (a={a}, x={x})")
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by modified Lentz continued fraction."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise StatsError(f"incomplete gamma fraction did not converge (a={a}, x={x})")
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _check_gamma_args(a: float, x: float) -> None:
    if not a > 0 or math.isinf(a):
        raise StatsError(f"incomplete gamma needs a > 0, got {a}")
    if not x >= 0:
        raise StatsError(f"incomplete gamma needs x >= 0, got {x}")


def reg_incomplete_gamma_p(a: float, x: float) -> float:
    _check_gamma_args(a, x)
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return max(0.0, 1.0 - _gamma_cf(a, x))


def reg_incomplete_gamma_q(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x): series below x = a + 1, continued fraction above."""
    _check_gamma_args(a, x)
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_cf(a, x))


def _beta_cf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise StatsError(f"incomplete beta fraction did not converge (a={a}, b={b}, x={x})")


def reg_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if not (a > 0 and b > 0):
        raise StatsError(f"incomplete beta needs a, b > 0, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise StatsError(f"incomplete beta needs 0 <= x <= 1, got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        value = front * _beta_cf(a, b, x) / a
    else:
        value = 1.0 - front * _beta_cf(b, a, 1.0 - x) / b
    return min(1.0, max(0.0, value))


def std_normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def student_t_sf(t: float, df: float) -> float:
    if not df > 0:
        raise StatsError(f"Student t needs df > 0, got {df}")
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    tail = 0.5 * reg_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
    return tail if t >= 0 else 1.0 - tail


def chi2_sf(x: float, df: float) -> float:
    return reg_incomplete_gamma_q(df / 2.0, x / 2.0)


# -- point-biserial ----------------------------------------------------------


def point_biserial(values, labels) -> TestResult:
    """Point-biserial r of ``values`` against 0/1 ``labels`` with a t-test p-value."""
    values = [float(v) for v in values]
    labels = [int(l) for l in labels]
    n = len(values)
    if n != len(labels):
        raise StatsError("values and labels differ in length")
    if n < 3:
        raise StatsError("point-biserial needs at least 3 observations")
    if any(l not in (0, 1) for l in labels):
        raise StatsError("labels must be 0 or 1")
    ones = [v for v, l in zip(values, labels) if l == 1]
    zeros = [v for v, l in zip(values, labels) if l == 0]
    if not ones or not zeros:
        raise StatsError("degenerate dichotomy")

    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / n
    if var == 0.0:
        raise StatsError("constant feature")
    n1, n0 = len(ones), len(zeros)
    m1 = math.fsum(ones) / n1
    m0 = math.fsum(zeros) / n0
    r = (m1 - m0) / math.sqrt(var) * math.sqrt(n1 * n0) / n
    r = max(-1.0, min(1.0, r))

    df = n - 2
    if abs(r) == 1.0:
        t = math.copysign(math.inf, r)
        p = 0.0
    else:
        t = r * math.sqrt(df / (1.0 - r * r))
        p = min(1.0, 2.0 * student_t_sf(abs(t), df))
    return TestResult(
        statistic=r, p_value=p, n_group1=n1, n_group0=n0, df=float(df),
        method_note=f"t={t:.6g}, two-sided",
    )


# -- Mann-Whitney U ----------------------------------------------------------


def midranks(values) -> list[float]:
    """1-based ranks with ties given the average of the positions they span."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


@lru_cache(maxsize=None)
def _u_counts(n1: int, n0: int) -> tuple[int, ...]:
    """Number of rank assignments giving each U in 0..n1*n0 (no ties)."""
    # f(m, n) over u: placing the largest value in group 1 adds n to U
    table = {(0, n): (1,) for n in range(n0 + 1)}
    for m in range(1, n1 + 1):
        table[(m, 0)] = (1,)
        for n in range(1, n0 + 1):
            a = table[(m - 1, n)]  # largest in group 1: shift by n
            b = table[(m, n - 1)]  # largest in group 0
            out = [0] * (m * n + 1)
            for u, c in enumerate(a):
                out[u + n] += c
            for u, c in enumerate(b):
                out[u] += c
            table[(m, n)] = tuple(out)
    return table[(n1, n0)]


def mann_whitney_exact_p(u_min: float, n1: int, n0: int) -> float:
    counts = _u_counts(n1, n0)
    total = sum(counts)
    tail = sum(counts[: int(u_min) + 1])
    return min(1.0, 2.0 * tail / total)


EXACT_MAX_N = 8


def mann_whitney_u(group1, group0, method: str = "auto") -> TestResult:
    """Two-sided Mann-Whitney U; ``statistic`` is min(U1, U0).

    With ``method="auto"`` the exact null distribution is used when both groups
    have at most ``EXACT_MAX_N`` values and there are no ties; otherwise the
    normal approximation with tie-corrected variance and a 0.5 continuity
    correction. ``"exact"`` and ``"approx"`` force one or the other.
    """
    if method not in ("auto", "exact", "approx"):
        raise StatsError(f"unknown method {method!r}")
    group1 = [float(v) for v in group1]
    group0 = [float(v) for v in group0]
    n1, n0 = len(group1), len(group0)
    if n1 == 0 or n0 == 0:
        raise StatsError("Mann-Whitney U needs two nonempty groups")
    pooled = group1 + group0
    n = n1 + n0
    ranks = midranks(pooled)
    r1 = math.fsum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2.0
    u0 = n1 * n0 - u1
    u = min(u1, u0)

    tie_sizes = {}
    for v in pooled:
        tie_sizes[v] = tie_sizes.get(v, 0) + 1
    tie_term = sum(t ** 3 - t for t in tie_sizes.values())
    if len(tie_sizes) == 1:
        raise StatsError("all values tied")

    if method == "exact" and tie_term:
        raise StatsError("exact p-value needs untied data")
    small = n1 <= EXACT_MAX_N and n0 <= EXACT_MAX_N and tie_term == 0
    if method == "exact" or (method == "auto" and small):
        p = mann_whitney_exact_p(u, n1, n0)
        note = "exact"
    else:
        var = (n1 * n0 / 12.0) * ((n + 1) - tie_term / (n * (n - 1)))
        z = max(0.0, abs(u1 - n1 * n0 / 2.0) - 0.5) / math.sqrt(var)
        p = min(1.0, 2.0 * std_normal_sf(z))
        note = "normal approx, tie-corrected, continuity 0.5"
    return TestResult(statistic=u, p_value=p, n_group1=n1, n_group0=n0, method_note=note)


# -- chi-squared -------------------------------------------------------------


def chi_squared(table, yates: bool = True) -> TestResult:
    """Chi-squared test of independence on an R x K table of counts.

    Rows are label 0 and label 1 when called from the analysis pipeline, so
    ``n_group0``/``n_group1`` are the row totals. The Yates correction only
    applies to 2 x 2 tables.
    """
    observed = [[float(c) for c in row] for row in table]
    if not observed or not observed[0] or any(len(row) != len(observed[0]) for row in observed):
        raise StatsError("contingency table must be a nonempty rectangle")
    if len(observed) < 2 or len(observed[0]) < 2:
        raise StatsError("contingency table needs at least 2 rows and 2 columns")
    if any(c < 0 for row in observed for c in row):
        raise StatsError("negative count")
    rows = [math.fsum(row) for row in observed]
    cols = [math.fsum(col) for col in zip(*observed)]
    total = math.fsum(rows)
    if any(s <= 0 for s in rows) or any(s <= 0 for s in cols):
        raise StatsError("empty margin")

    correction = 0.5 if yates and len(rows) == 2 and len(cols) == 2 else 0.0
    stat = 0.0
    for i, row in enumerate(observed):
        for j, obs in enumerate(row):
            exp = rows[i] * cols[j] / total
            dev = max(abs(obs - exp) - correction, 0.0)
            stat += dev * dev / exp
    df = (len(rows) - 1) * (len(cols) - 1)
    p = chi2_sf(stat, df) if stat > 0 else 1.0
    n0 = int(rows[0])
    n1 = int(total) - n0
    return TestResult(
        statistic=stat, p_value=p, n_group1=n1, n_group0=n0, df=float(df),
        method_note="Yates-corrected" if correction else "uncorrected",
    )
