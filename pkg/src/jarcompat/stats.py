"""Statistical machinery: sampling, hypothesis tests, and effect sizes.

Everything is implemented directly on top of the standard library so the
numbers are reproducible without an external statistics dependency. The
normal quantile uses Acklam's rational approximation refined with one
Halley step against ``math.erfc``; chi-square tail probabilities go through
the regularized incomplete gamma function with the usual series /
continued-fraction split.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence


class DegenerateTable(ValueError):
    """Contingency table without enough information to test."""


class EmptyInput(ValueError):
    """An operation that needs at least one value received none."""


@dataclass
class TestResult:
    statistic: float
    p_value: float
    adjusted_p: float | None = None
    effect_size: float | None = None
    interpretation: str | None = None


@dataclass
class ContingencyTable:
    """Labelled rows of counts, e.g. level -> (broken, not_broken)."""

    rows: list[tuple[str, tuple[int, ...]]]

    def counts(self) -> list[tuple[int, ...]]:
        return [cells for _, cells in self.rows]


# --- normal distribution -------------------------------------------------

# Acklam's inverse normal CDF coefficients.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_sf(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF, accurate to well under 1e-9."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile argument must be in (0, 1), got {p}")
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
            ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        )
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    # One Halley refinement step against the exact CDF.
    err = normal_cdf(x) - p
    u = err * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


# --- incomplete gamma / chi-square tail ----------------------------------

_GAMMA_EPS = 1e-15
_GAMMA_ITMAX = 1000


def _gamma_series(a: float, x: float) -> float:
    """Lower regularized gamma P(a, x) by series; valid for x < a + 1."""
    term = 1.0 / a
    total = term
    for n in range(1, _GAMMA_ITMAX):
        term *= x / (a + n)
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cont_fraction(a: float, x: float) -> float:
    """Upper regularized gamma Q(a, x) by continued fraction; x >= a + 1."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_ITMAX):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x)."""
    if x < 0 or a <= 0:
        raise ValueError(f"gamma_q domain error: a={a}, x={x}")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cont_fraction(a, x)


def chi2_sf(stat: float, df: int) -> float:
    return gamma_q(df / 2.0, stat / 2.0)


# --- sampling -------------------------------------------------------------


def cochran_sample(population: int, confidence: float, margin: float, proportion: float = 0.5) -> int:
    """Cochran sample size with finite-population correction.

    n0 = z^2 p (1 - p) / e^2 with z the two-sided normal quantile, then
    n = n0 / (1 + (n0 - 1) / N), rounded half-up and capped at N.
    """
    if population < 1:
        raise ValueError(f"population must be >= 1, got {population}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must be in (0, 1), got {confidence}")
    if not 0.0 < margin < 1.0:
        raise ValueError(f"margin must be in (0, 1), got {margin}")
    if not 0.0 <= proportion <= 1.0:
        raise ValueError(f"proportion must be in [0, 1], got {proportion}")
    z = normal_quantile((1.0 + confidence) / 2.0)
    n0 = z * z * proportion * (1.0 - proportion) / (margin * margin)
    n = n0 / (1.0 + (n0 - 1.0) / population)
    return min(population, int(math.floor(n + 0.5)))


# --- contingency tests -----------------------------------------------------


def chi_squared(table: ContingencyTable) -> TestResult:
    """Pearson chi-squared test of homogeneity across the table rows."""
    counts = table.counts()
    if len(counts) < 2 or any(len(cells) < 2 for cells in counts):
        raise DegenerateTable("need at least a 2x2 table")
    width = len(counts[0])
    if any(len(cells) != width for cells in counts):
        raise DegenerateTable("ragged table")
    if any(cell < 0 for cells in counts for cell in cells):
        raise DegenerateTable("negative cell")
    row_sums = [sum(cells) for cells in counts]
    col_sums = [sum(cells[j] for cells in counts) for j in range(width)]
    total = sum(row_sums)
    if any(s == 0 for s in row_sums) or any(s == 0 for s in col_sums):
        raise DegenerateTable("zero row or column sum gives zero expected counts")
    stat = 0.0
    for i, cells in enumerate(counts):
        for j, observed in enumerate(cells):
            expected = row_sums[i] * col_sums[j] / total
            stat += (observed - expected) ** 2 / expected
    df = (len(counts) - 1) * (width - 1)
    return TestResult(statistic=stat, p_value=chi2_sf(stat, df))


# Exact-arithmetic cutoff for Fisher's test; bigger tables go to log space.
_FISHER_EXACT_LIMIT = 1000
# Relative tolerance for counting a table as "at most as probable" in log space.
_FISHER_REL_EPS = 1e-7


def fisher_exact(table: Sequence[Sequence[int]]) -> TestResult:
    """Two-sided Fisher's exact test on a 2x2 table.

    Sums hypergeometric probabilities no larger than the observed table's.
    Small tables are evaluated in exact integer arithmetic; large ones in
    log space with a relative tie tolerance.
    """
    if len(table) != 2 or any(len(row) != 2 for row in table):
        raise DegenerateTable("fisher_exact needs a 2x2 table")
    (a, b), (c, d) = table
    if min(a, b, c, d) < 0:
        raise DegenerateTable("negative cell")
    r1, r2 = a + b, c + d
    c1 = a + c
    n = r1 + r2
    if n == 0 or r1 == 0 or r2 == 0 or c1 == 0 or c1 == n:
        return TestResult(statistic=float("nan"), p_value=1.0)

    lo = max(0, c1 - r2)
    hi = min(r1, c1)
    if n <= _FISHER_EXACT_LIMIT:
        weights = [math.comb(r1, k) * math.comb(r2, c1 - k) for k in range(lo, hi + 1)]
        observed = weights[a - lo]
        included = sum(w for w in weights if w <= observed)
        p = included / math.comb(n, c1)
    else:
        log_obs = _log_hyper(a, r1, r2, c1)
        acc = 0.0
        for k in range(lo, hi + 1):
            log_w = _log_hyper(k, r1, r2, c1)
            if log_w <= log_obs + math.log1p(_FISHER_REL_EPS):
                acc += math.exp(log_w)
        p = min(1.0, acc)
    odds = float("inf") if b * c == 0 else (a * d) / (b * c)
    return TestResult(statistic=odds, p_value=min(1.0, p))


def _log_hyper(k: int, r1: int, r2: int, c1: int) -> float:
    return (
        _log_comb(r1, k)
        + _log_comb(r2, c1 - k)
        - _log_comb(r1 + r2, c1)
    )


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def odds_ratio(a_broken: int, a_total: int, b_broken: int, b_total: int) -> float:
    """Odds of b relative to the odds of a ("a vs b" orientation).

    Returns inf when the comparison is undefined because a zero cell makes
    one of the odds zero or infinite.
    """
    if not (0 <= a_broken <= a_total and 0 <= b_broken <= b_total):
        raise ValueError("broken counts must satisfy 0 <= broken <= total")
    a_ok = a_total - a_broken
    b_ok = b_total - b_broken
    if a_broken == 0 or b_ok == 0:
        return float("inf")
    if b_broken == 0:
        return 0.0
    return (b_broken / b_ok) / (a_broken / a_ok)


def holm_bonferroni(p_values: Sequence[float]) -> list[float]:
    """Step-down Holm-Bonferroni adjustment, returned in input order."""
    if any(not 0.0 <= p <= 1.0 for p in p_values):
        raise ValueError("p-values must lie in [0, 1]")
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running = 0.0
    for rank, idx in enumerate(order):
        running = max(running, (m - rank) * p_values[idx])
        adjusted[idx] = min(1.0, running)
    return adjusted


# --- rank tests -------------------------------------------------------------

# Total sample size up to which the exact Mann-Whitney distribution is
# enumerated; beyond it a tie-corrected normal approximation is used.
_MW_EXACT_LIMIT = 16


def _u_statistic(xs: Sequence[float], ys: Sequence[float]) -> float:
    u = 0.0
    for x in xs:
        for y in ys:
            if x > y:
                u += 1.0
            elif x == y:
                u += 0.5
    return u


def mann_whitney(xs: Sequence[float], ys: Sequence[float], two_tailed: bool = True) -> TestResult:
    """Mann-Whitney U test.

    Small samples (n + m <= 16) use exact enumeration over all group
    assignments, which handles ties correctly. Larger samples use the
    tie-corrected normal approximation with continuity correction.
    """
    n, m = len(xs), len(ys)
    if n == 0 or m == 0:
        raise EmptyInput("both samples must be non-empty")
    u = _u_statistic(xs, ys)
    center = n * m / 2.0

    if n + m <= _MW_EXACT_LIMIT:
        pooled = list(xs) + list(ys)
        indices = range(n + m)
        total = 0
        extreme = 0
        observed_dev = abs(u - center)
        for chosen in combinations(indices, n):
            chosen_set = set(chosen)
            group_x = [pooled[i] for i in chosen]
            group_y = [pooled[i] for i in indices if i not in chosen_set]
            u_perm = _u_statistic(group_x, group_y)
            total += 1
            if two_tailed:
                if abs(u_perm - center) >= observed_dev - 1e-12:
                    extreme += 1
            elif u_perm >= u - 1e-12:
                extreme += 1
        return TestResult(statistic=u, p_value=min(1.0, extreme / total))

    all_values = list(xs) + list(ys)
    size = n + m
    tie_counts = _tie_counts(all_values)
    tie_term = sum(t**3 - t for t in tie_counts)
    sigma_sq = n * m / 12.0 * ((size + 1) - tie_term / (size * (size - 1)))
    if sigma_sq <= 0:
        return TestResult(statistic=u, p_value=1.0)
    deviation = abs(u - center)
    z = max(0.0, deviation - 0.5) / math.sqrt(sigma_sq)
    p = 2.0 * normal_sf(z) if two_tailed else normal_sf(z)
    return TestResult(statistic=u, p_value=min(1.0, p))


def _tie_counts(values: Iterable[float]) -> list[int]:
    counts: dict[float, int] = {}
    for value in values:
        counts[value] = counts.get(value, 0) + 1
    return [c for c in counts.values() if c > 1]


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j + 2) / 2.0  # average of 1-based positions i+1 .. j+1
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> TestResult:
    """Kruskal-Wallis rank-sum test with tie correction."""
    if len(groups) < 2 or any(len(g) == 0 for g in groups):
        raise EmptyInput("need at least two non-empty groups")
    pooled: list[float] = [v for g in groups for v in g]
    size = len(pooled)
    ranks = _midranks(pooled)
    h = 0.0
    offset = 0
    for group in groups:
        r = sum(ranks[offset : offset + len(group)])
        h += r * r / len(group)
        offset += len(group)
    h = 12.0 / (size * (size + 1)) * h - 3.0 * (size + 1)
    tie_term = sum(t**3 - t for t in _tie_counts(pooled))
    correction = 1.0 - tie_term / (size**3 - size) if size > 1 else 0.0
    if correction <= 0.0:
        return TestResult(statistic=0.0, p_value=1.0)  # all values tied
    h /= correction
    h = max(0.0, h)
    return TestResult(statistic=h, p_value=chi2_sf(h, len(groups) - 1))


# Cohen's-scale thresholds for |delta|.
CLIFFS_THRESHOLDS = ((0.147, "negligible"), (0.33, "small"), (0.474, "medium"))


def interpret_cliffs_delta(delta: float) -> str:
    magnitude = abs(delta)
    for threshold, label in CLIFFS_THRESHOLDS:
        if magnitude < threshold:
            return label
    return "large"


def cliffs_delta(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, str]:
    """Cliff's delta in [-1, 1] with its Cohen's-scale interpretation.

    Computed by sorted binary search over ys, equivalent to counting all
    (x, y) pairs.
    """
    if not xs or not ys:
        raise EmptyInput("both samples must be non-empty")
    sorted_ys = sorted(ys)
    m = len(sorted_ys)
    greater = 0
    less = 0
    for x in xs:
        greater += bisect.bisect_left(sorted_ys, x)
        less += m - bisect.bisect_right(sorted_ys, x)
    delta = (greater - less) / (len(xs) * m)
    return delta, interpret_cliffs_delta(delta)


# --- descriptive -----------------------------------------------------------


def distribution_summary(values: Sequence[float]) -> tuple[float, float, float, float, float, float]:
    """(min, q1, median, mean, q3, max) with linearly interpolated quartiles."""
    if not values:
        raise EmptyInput("distribution_summary of empty input")
    ordered = sorted(values)

    def quantile(p: float) -> float:
        h = (len(ordered) - 1) * p
        lower = math.floor(h)
        upper = min(lower + 1, len(ordered) - 1)
        frac = h - lower
        return ordered[lower] * (1 - frac) + ordered[upper] * frac

    mean = sum(ordered) / len(ordered)
    return (ordered[0], quantile(0.25), quantile(0.5), mean, quantile(0.75), ordered[-1])


# --- corpus ratios -----------------------------------------------------------

LEVEL_ORDER = ("major", "minor", "patch", "dev")


def breaking_ratio(rows: Iterable[dict], group_by: str = "level") -> list[dict]:
    """Count / share / breaking tallies per semver level (optionally per year).

    ``rows`` need "level" and "breaking" entries, plus "year" for the
    year-by-level grouping. Ratios over empty groups come out as None.
    """
    materialized = list(rows)
    if group_by == "level":
        groups = [(label, [r for r in materialized if r["level"] == label]) for label in LEVEL_ORDER]
        groups.append(("non-major", [r for r in materialized if r["level"] in ("minor", "patch")]))
        groups.append(("total", materialized))
    elif group_by == "year_level":
        keys = sorted({(r["year"], r["level"]) for r in materialized})
        groups = [
            (f"{year}/{level}", [r for r in materialized if r["year"] == year and r["level"] == level])
            for year, level in keys
        ]
        years = sorted({r["year"] for r in materialized})
        for year in years:
            groups.append(
                (
                    f"{year}/non-major",
                    [r for r in materialized if r["year"] == year and r["level"] in ("minor", "patch")],
                )
            )
    else:
        raise ValueError(f"unknown grouping {group_by!r}")

    total = len(materialized)
    table = []
    for label, members in groups:
        count = len(members)
        breaking = sum(1 for r in members if r["breaking"])
        table.append(
            {
                "group": label,
                "count": count,
                "share_pct": round(100.0 * count / total, 1) if total else None,
                "breaking": breaking,
                "breaking_pct": round(100.0 * breaking / count, 1) if count else None,
            }
        )
    return table
