"""Self-contained statistical kernel: special functions, correlation, rank
tests, normality test, multiple-comparison correction, plane fitting.

Everything here is deterministic and dependency-free. p-values are two-sided
throughout. Degenerate inputs (constant samples, fully tied pools) raise
typed errors instead of propagating NaN into downstream reports.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Sequence

from .errors import (
    CollinearInputError,
    ConstantInputError,
    DegenerateDataError,
    DomainError,
    SampleSizeError,
    StatsError,
)

_EPS = 1e-16
_FPMIN = 1e-300
_MAX_ITER = 600

_NORMAL = NormalDist()


class Method(enum.Enum):
    PEARSON = "pearson"
    MANN_WHITNEY = "mann_whitney"
    KRUSKAL_WALLIS = "kruskal_wallis"
    SHAPIRO_WILK = "shapiro_wilk"
    WILCOXON_SIGNED_RANK = "wilcoxon_signed_rank"


@dataclass(frozen=True)
class TestResult:
    """Statistic plus two-sided p-value for one hypothesis test."""

    statistic: float
    p_value: float
    method: Method
    n: int | tuple[int, ...]
    note: str = ""

    def to_dict(self) -> dict:
        out: dict = {
            "method": self.method.value,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "n": list(self.n) if isinstance(self.n, tuple) else self.n,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class PlaneFit:
    """Ordinary least squares fit of z = intercept + coef_x*x + coef_y*y."""

    intercept: float
    coef_x: float
    coef_y: float
    r_squared: float
    degenerate: bool = False  # SS_tot == 0: r_squared is not informative

    def to_dict(self) -> dict:
        out = {
            "intercept": self.intercept,
            "coef_x": self.coef_x,
            "coef_y": self.coef_y,
            "r_squared": self.r_squared,
        }
        if self.degenerate:
            out["degenerate"] = True
        return out


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------

def erf_cdf_normal(z: float) -> float:
    """Standard normal CDF via the complementary error function."""
    if not math.isfinite(z):
        raise DomainError(f"normal CDF requires finite z, got {z!r}")
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def regularized_incomplete_gamma(s: float, x: float) -> float:
    """Lower regularized incomplete gamma P(s, x).

    Power series for x < s + 1, continued fraction (modified Lentz) for the
    complement otherwise; both converge to near machine precision. The
    chi-square CDF with k degrees of freedom is P(k/2, x/2).
    """
    if s <= 0.0:
        raise DomainError(f"shape parameter must be positive, got {s!r}")
    if x < 0.0:
        raise DomainError(f"argument must be non-negative, got {x!r}")
    if x == 0.0:
        return 0.0
    log_prefactor = -x + s * math.log(x) - math.lgamma(s)
    if x < s + 1.0:
        ap = s
        term = 1.0 / s
        total = term
        for _ in range(_MAX_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _EPS:
                return min(1.0, max(0.0, total * math.exp(log_prefactor)))
        raise StatsError("incomplete gamma series failed to converge")
    # continued fraction for Q(s, x)
    b = x + 1.0 - s
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            q = math.exp(log_prefactor) * h if log_prefactor > -745.0 else 0.0
            return min(1.0, max(0.0, 1.0 - q))
    raise StatsError("incomplete gamma continued fraction failed to converge")


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise StatsError("incomplete beta continued fraction failed to converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) via the continued fraction."""
    if a <= 0.0 or b <= 0.0:
        raise DomainError(f"beta parameters must be positive, got a={a!r} b={b!r}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"argument must be in [0, 1], got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_bt = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    bt = math.exp(ln_bt) if ln_bt > -745.0 else 0.0
    if x < (a + 1.0) / (a + b + 2.0):
        value = bt * _beta_continued_fraction(a, b, x) / a
    else:
        value = 1.0 - bt * _beta_continued_fraction(b, a, 1.0 - x) / b
    return min(1.0, max(0.0, value))


def _student_t_two_sided_p(t: float, df: float) -> float:
    if math.isinf(t):
        return 0.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


# ---------------------------------------------------------------------------
# Ranking helpers
# ---------------------------------------------------------------------------

def _midranks(values: Sequence[float]) -> tuple[list[float], list[int]]:
    """1-based fractional ranks plus the sizes of each tie group."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    tie_sizes: list[int] = []
    i = 0
    n = len(values)
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0  # mean of 1-based positions i+1 .. j+1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def _tie_sum(tie_sizes: Sequence[int]) -> float:
    return float(sum(t * t * t - t for t in tie_sizes))


# ---------------------------------------------------------------------------
# Correlation
# ---------------------------------------------------------------------------

def pearson(xs: Sequence[float], ys: Sequence[float]) -> TestResult:
    """Pearson product-moment correlation with an exact-t two-sided p-value.

    The t transform t = r*sqrt((n-2)/(1-r^2)) is referred to the Student t
    distribution with n-2 degrees of freedom through the incomplete beta,
    which stays accurate at the small n where subgroup analyses live.
    """
    if len(xs) != len(ys):
        raise DomainError(f"length mismatch: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 3:
        raise SampleSizeError(f"pearson requires n >= 3, got {n}")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    syy = math.fsum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        raise ConstantInputError("pearson requires non-constant sequences")
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    df = n - 2
    if 1.0 - r * r <= 0.0:
        p = 0.0
    else:
        t = r * math.sqrt(df / (1.0 - r * r))
        p = _student_t_two_sided_p(t, df)
    return TestResult(statistic=r, p_value=p, method=Method.PEARSON, n=n)


# ---------------------------------------------------------------------------
# Rank tests
# ---------------------------------------------------------------------------

_EXACT_MWU_MAX_N = 16
_EXACT_WILCOXON_MAX_N = 12


def _exact_mwu_p(n1: int, n2: int, u_obs: float) -> float:
    """Exact two-sided p by counting rank assignments (tie-free pools only).

    Dynamic program over subset rank sums; equivalent to enumerating all
    C(n1+n2, n1) assignments of pooled ranks to the first sample.
    """
    total_n = n1 + n2
    max_sum = total_n * (total_n + 1) // 2
    # ways[j][s]: subsets of size j of the ranks seen so far with rank sum s
    ways = [[0] * (max_sum + 1) for _ in range(n1 + 1)]
    ways[0][0] = 1
    for rank in range(1, total_n + 1):
        for j in range(min(n1, rank), 0, -1):
            row = ways[j]
            prev = ways[j - 1]
            for s in range(max_sum, rank - 1, -1):
                if prev[s - rank]:
                    row[s] += prev[s - rank]
    offset = n1 * (n1 + 1) // 2
    favorable = 0
    total = 0
    for s, count in enumerate(ways[n1]):
        if not count:
            continue
        total += count
        u1 = s - offset
        if min(u1, n1 * n2 - u1) <= u_obs + 1e-12:
            favorable += count
    return favorable / total


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Mann-Whitney U with midrank ties; statistic is min(U1, U2).

    Small tie-free samples (n1+n2 <= 16) get the exact enumeration p-value;
    otherwise the normal approximation with tie-corrected variance and
    continuity correction is used.
    """
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise SampleSizeError("mann_whitney_u requires two non-empty samples")
    pooled = list(a) + list(b)
    ranks, tie_sizes = _midranks(pooled)
    r1 = math.fsum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2.0
    u2 = n1 * n2 - u1
    u = min(u1, u2)
    has_ties = any(t > 1 for t in tie_sizes)
    if not has_ties and n1 + n2 <= _EXACT_MWU_MAX_N:
        p = _exact_mwu_p(n1, n2, u)
        return TestResult(statistic=u, p_value=p, method=Method.MANN_WHITNEY, n=(n1, n2))
    total_n = n1 + n2
    tie_term = _tie_sum(tie_sizes) / (total_n * (total_n - 1)) if total_n > 1 else 0.0
    variance = n1 * n2 / 12.0 * ((total_n + 1) - tie_term)
    if variance <= 0.0:
        raise DegenerateDataError("all pooled values are identical")
    mean_u = n1 * n2 / 2.0
    z = (max(u1, u2) - mean_u - 0.5) / math.sqrt(variance)
    p = min(1.0, max(0.0, 2.0 * (1.0 - erf_cdf_normal(z))))
    return TestResult(statistic=u, p_value=p, method=Method.MANN_WHITNEY, n=(n1, n2))


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> TestResult:
    """Tie-corrected Kruskal-Wallis H with chi-square p (k-1 dof)."""
    k = len(groups)
    if k < 2:
        raise SampleSizeError("kruskal_wallis requires at least 2 groups")
    sizes = [len(g) for g in groups]
    if any(s == 0 for s in sizes):
        raise SampleSizeError("kruskal_wallis requires non-empty groups")
    total_n = sum(sizes)
    if total_n < 5:
        raise SampleSizeError(f"kruskal_wallis requires total n >= 5, got {total_n}")
    pooled: list[float] = []
    for g in groups:
        pooled.extend(g)
    ranks, tie_sizes = _midranks(pooled)
    h = 0.0
    start = 0
    for size in sizes:
        r = math.fsum(ranks[start:start + size])
        h += r * r / size
        start += size
    h = 12.0 / (total_n * (total_n + 1)) * h - 3.0 * (total_n + 1)
    correction = 1.0 - _tie_sum(tie_sizes) / (total_n**3 - total_n)
    if correction <= 0.0:
        raise DegenerateDataError("all pooled values are identical")
    h = max(0.0, h / correction)
    p = 1.0 - regularized_incomplete_gamma((k - 1) / 2.0, h / 2.0)
    return TestResult(statistic=h, p_value=p, method=Method.KRUSKAL_WALLIS, n=tuple(sizes))


def bonferroni(p_values: Sequence[float]) -> list[float]:
    """Multiply each p by the family size, clamped to 1."""
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"p-value outside [0, 1]: {p!r}")
    m = len(p_values)
    return [min(1.0, p * m) for p in p_values]


def _exact_wilcoxon_p(ranks: Sequence[float], w_obs: float) -> float:
    """Exact two-sided p over all sign assignments of the observed ranks.

    Ranks are doubled to integers (midranks are multiples of 1/2) so the
    enumeration is exact integer arithmetic.
    """
    n = len(ranks)
    ranks2 = [round(2 * r) for r in ranks]
    total2 = sum(ranks2)
    w_obs2 = round(2 * w_obs)
    favorable = 0
    for mask in range(1 << n):
        s = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                s += ranks2[i]
            m >>= 1
            i += 1
        if min(s, total2 - s) <= w_obs2:
            favorable += 1
    return favorable / (1 << n)


def _small_sample_signed_rank(diffs: Sequence[float]) -> TestResult:
    """Exact signed-rank result without the minimum-n rule.

    Matched-balance verification bypasses the >= 5 non-zero-pairs
    precondition by contract: when nearly every pair matches exactly, the
    evidence for imbalance is only the few non-zero differences, and the
    exact enumeration stays valid (if underpowered) at any n >= 1.
    """
    nonzero = [d for d in diffs if d != 0.0]
    ranks, _ = _midranks([abs(d) for d in nonzero])
    w_plus = math.fsum(r for r, d in zip(ranks, nonzero) if d > 0)
    n = len(nonzero)
    w = min(w_plus, n * (n + 1) / 2.0 - w_plus)
    return TestResult(
        statistic=w, p_value=_exact_wilcoxon_p(ranks, w),
        method=Method.WILCOXON_SIGNED_RANK, n=n,
    )


def wilcoxon_signed_rank(pairs: Sequence[tuple[float, float]]) -> TestResult:
    """Signed-rank test on paired differences; statistic is min(W+, W-).

    Zero differences are dropped (at least 5 non-zero pairs required). Exact
    sign-assignment enumeration for n <= 12, else the normal approximation
    with tie-corrected variance and continuity correction.
    """
    diffs = [float(a) - float(b) for a, b in pairs]
    nonzero = [d for d in diffs if d != 0.0]
    if not nonzero:
        raise DegenerateDataError("all paired differences are zero")
    n = len(nonzero)
    if n < 5:
        raise SampleSizeError(f"wilcoxon_signed_rank requires >= 5 non-zero pairs, got {n}")
    ranks, tie_sizes = _midranks([abs(d) for d in nonzero])
    w_plus = math.fsum(r for r, d in zip(ranks, nonzero) if d > 0)
    w_minus = n * (n + 1) / 2.0 - w_plus
    w = min(w_plus, w_minus)
    if n <= _EXACT_WILCOXON_MAX_N:
        p = _exact_wilcoxon_p(ranks, w)
        return TestResult(statistic=w, p_value=p, method=Method.WILCOXON_SIGNED_RANK, n=n)
    mean_w = n * (n + 1) / 4.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - _tie_sum(tie_sizes) / 48.0
    if variance <= 0.0:
        raise DegenerateDataError("signed-rank variance is zero")
    z = (w - mean_w + 0.5) / math.sqrt(variance)
    p = min(1.0, max(0.0, 2.0 * erf_cdf_normal(z)))
    return TestResult(statistic=w, p_value=p, method=Method.WILCOXON_SIGNED_RANK, n=n)


# ---------------------------------------------------------------------------
# Shapiro-Wilk normality test
# ---------------------------------------------------------------------------

# Polynomial coefficients (ascending powers) of the W-test approximation for
# the weight corrections and the normalizing transform of W, valid 3<=n<=5000.
_SW_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_SW_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_SW_C3 = (0.544, -0.39978, 0.025054, -6.714e-4)
_SW_C4 = (1.3822, -0.77857, 0.062767, -2.0322e-3)
_SW_C5 = (-1.5861, -0.31082, -0.083751, 3.8915e-3)
_SW_C6 = (-0.4803, -0.082676, 3.0302e-3)
_SW_G = (-2.273, 0.459)

SHAPIRO_MIN_N = 3
SHAPIRO_MAX_N = 5000


def _poly(coeffs: Sequence[float], x: float) -> float:
    total = 0.0
    for c in reversed(coeffs):
        total = total * x + c
    return total


def _shapiro_weights(n: int) -> list[float]:
    """Upper-half weights, largest order statistic first."""
    n2 = n // 2
    if n == 3:
        return [math.sqrt(0.5)]
    an25 = n + 0.25
    # magnitudes of the expected normal order statistics, largest first
    mags = [_NORMAL.inv_cdf((n - i + 1 - 0.375) / an25) for i in range(1, n2 + 1)]
    summ2 = 2.0 * math.fsum(v * v for v in mags)
    ssumm2 = math.sqrt(summ2)
    rsn = 1.0 / math.sqrt(n)
    w0 = _poly(_SW_C1, rsn) + mags[0] / ssumm2
    if n > 5:
        w1 = _poly(_SW_C2, rsn) + mags[1] / ssumm2
        fac = math.sqrt(
            (summ2 - 2.0 * mags[0] ** 2 - 2.0 * mags[1] ** 2)
            / (1.0 - 2.0 * w0 * w0 - 2.0 * w1 * w1)
        )
        return [w0, w1] + [v / fac for v in mags[2:]]
    fac = math.sqrt((summ2 - 2.0 * mags[0] ** 2) / (1.0 - 2.0 * w0 * w0))
    return [w0] + [v / fac for v in mags[1:]]


def shapiro_wilk(xs: Sequence[float]) -> TestResult:
    """W statistic and p-value of the normality W-test (3 <= n <= 5000).

    Weights come from the polynomial approximation to the normalized
    expected normal order statistics; the p-value uses the exact small-n
    form at n = 3, a gamma-shifted log transform for n <= 11, and the
    log-normal transform beyond.
    """
    n = len(xs)
    if not SHAPIRO_MIN_N <= n <= SHAPIRO_MAX_N:
        raise SampleSizeError(
            f"shapiro_wilk supports {SHAPIRO_MIN_N} <= n <= {SHAPIRO_MAX_N}, got {n}"
        )
    x = sorted(float(v) for v in xs)
    if x[-1] - x[0] <= 0.0:
        raise ConstantInputError("shapiro_wilk requires a non-constant sample")
    weights = _shapiro_weights(n)
    numerator = math.fsum(w * (x[n - 1 - k] - x[k]) for k, w in enumerate(weights))
    mean = math.fsum(x) / n
    ss = math.fsum((v - mean) ** 2 for v in x)
    w_stat = min(1.0, numerator * numerator / ss)
    if n == 3:
        p = 1.909859 * (math.asin(math.sqrt(w_stat)) - 1.047198)
        p = min(1.0, max(0.0, p))
        return TestResult(statistic=w_stat, p_value=p, method=Method.SHAPIRO_WILK, n=n)
    log_w1 = math.log(max(1.0 - w_stat, 1e-99))
    if n <= 11:
        gamma = _poly(_SW_G, float(n))
        if log_w1 >= gamma:
            p = 1e-19
        else:
            y = -math.log(gamma - log_w1)
            mu = _poly(_SW_C3, float(n))
            sigma = math.exp(_poly(_SW_C4, float(n)))
            p = 1.0 - erf_cdf_normal((y - mu) / sigma)
    else:
        log_n = math.log(n)
        mu = _poly(_SW_C5, log_n)
        sigma = math.exp(_poly(_SW_C6, log_n))
        p = 1.0 - erf_cdf_normal((log_w1 - mu) / sigma)
    p = min(1.0, max(0.0, p))
    return TestResult(statistic=w_stat, p_value=p, method=Method.SHAPIRO_WILK, n=n)


# ---------------------------------------------------------------------------
# Least squares plane
# ---------------------------------------------------------------------------

def fit_plane(points: Sequence[tuple[float, float, float]]) -> PlaneFit:
    """OLS fit of z = a + b*x + c*y.

    The design columns are centered before solving the normal equations,
    which removes the dominant ill-conditioning of the raw cross-products;
    the centered 2x2 system is solved directly with a determinant check for
    rank deficiency.
    """
    n = len(points)
    if n < 3:
        raise SampleSizeError(f"fit_plane requires >= 3 points, got {n}")
    mx = math.fsum(p[0] for p in points) / n
    my = math.fsum(p[1] for p in points) / n
    mz = math.fsum(p[2] for p in points) / n
    sxx = math.fsum((p[0] - mx) ** 2 for p in points)
    syy = math.fsum((p[1] - my) ** 2 for p in points)
    sxy = math.fsum((p[0] - mx) * (p[1] - my) for p in points)
    sxz = math.fsum((p[0] - mx) * (p[2] - mz) for p in points)
    syz = math.fsum((p[1] - my) * (p[2] - mz) for p in points)
    det = sxx * syy - sxy * sxy
    if det <= 1e-12 * max(sxx * syy, 1e-30):
        raise CollinearInputError("design points are collinear; plane fit is rank-deficient")
    coef_x = (syy * sxz - sxy * syz) / det
    coef_y = (sxx * syz - sxy * sxz) / det
    intercept = mz - coef_x * mx - coef_y * my
    ss_res = math.fsum(
        (p[2] - (intercept + coef_x * p[0] + coef_y * p[1])) ** 2 for p in points
    )
    ss_tot = math.fsum((p[2] - mz) ** 2 for p in points)
    if ss_tot <= 0.0:
        return PlaneFit(
            intercept=intercept, coef_x=coef_x, coef_y=coef_y,
            r_squared=1.0 if ss_res <= 1e-12 else 0.0, degenerate=True,
        )
    return PlaneFit(
        intercept=intercept, coef_x=coef_x, coef_y=coef_y,
        r_squared=1.0 - ss_res / ss_tot,
    )
