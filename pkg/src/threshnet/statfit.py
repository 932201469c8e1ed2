"""Degree statistics, discrete power-law fitting, and Monte-Carlo oracles.

The fitting pipeline is the discrete maximum-likelihood method with
Kolmogorov-Smirnov x_min selection and a semi-parametric bootstrap for the
goodness-of-fit p-value.  The Monte-Carlo estimators re-derive every closed
form in `analytics` from the raw edge predicates, using an RNG unrelated to
the model's node sampler, so the two routes are independent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta as hzeta

from .errors import DomainError, FitDegenerateError
from .model import LinkFn, ParetoParams

_ALPHA_MAX = 25.0
_MIN_TAIL = 50


@dataclass(frozen=True)
class FitResult:
    alpha_hat: float
    x_min: int
    ks_stat: float
    n_tail: int
    alpha_continuous: float
    n_zero: int = 0
    p_value: float | None = None

    def __post_init__(self):
        if not (self.alpha_hat > 1):
            raise DomainError(f"fitted exponent must exceed 1, got {self.alpha_hat}")
        if self.x_min < 1:
            raise DomainError(f"x_min must be >= 1, got {self.x_min}")
        if not (0.0 <= self.ks_stat <= 1.0):
            raise DomainError(f"KS statistic out of [0,1]: {self.ks_stat}")


@dataclass(frozen=True)
class GofResult:
    p_value: float
    stderr: float
    n_bootstrap: int
    ks_observed: float


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float
    trials: int


def ccdf(degrees) -> tuple[np.ndarray, np.ndarray]:
    """Empirical complementary CDF over distinct degree values.

    Returns (values, fraction of nodes with degree >= value); fractions are
    non-increasing and the first point counts every node at or above the
    smallest listed value.
    """
    deg = np.asarray(degrees)
    if deg.size == 0:
        raise DomainError("ccdf needs a non-empty degree list")
    if np.any(deg < 0):
        raise DomainError("degrees must be non-negative")
    values, counts = np.unique(deg, return_counts=True)
    frac_ge = np.cumsum(counts[::-1])[::-1] / deg.size
    return values, frac_ge


def ccdf_loglog_slope(degrees, k_lo: int, k_hi: int) -> float:
    """Log-log slope of the empirical CCDF between two degree values."""
    values, frac = ccdf(degrees)
    c_lo = frac[np.searchsorted(values, k_lo)]
    c_hi = frac[np.searchsorted(values, k_hi)]
    return float((np.log(c_hi) - np.log(c_lo)) / (np.log(k_hi) - np.log(k_lo)))


def _tail_loglik(alpha: float, x_min: int, n: int, sum_log: float) -> float:
    return -n * np.log(hzeta(alpha, x_min)) - alpha * sum_log


def _mle_alpha(tail: np.ndarray, x_min: int) -> float:
    n = len(tail)
    s = float(np.log(tail).sum())
    res = minimize_scalar(
        lambda alpha: -_tail_loglik(alpha, x_min, n, s),
        bounds=(1.0 + 1e-7, _ALPHA_MAX),
        method="bounded",
        options={"xatol": 1e-8},
    )
    return float(res.x)


def _ks_stat(tail: np.ndarray, alpha: float, x_min: int) -> float:
    values, counts = np.unique(tail, return_counts=True)
    emp_cdf = np.cumsum(counts) / len(tail)
    z = hzeta(alpha, x_min)
    model_cdf = 1.0 - hzeta(alpha, values + 1) / z
    return float(np.abs(emp_cdf - model_cdf).max())


def fit_powerlaw_discrete(samples, x_min: int | None = None, min_tail: int = _MIN_TAIL) -> FitResult:
    """Discrete power-law fit (zeta-normalized MLE + KS x_min scan).

    With x_min given, only the exponent is estimated.  Otherwise every
    distinct value that keeps at least `min_tail` tail samples is tried and
    the one minimizing the KS distance wins.  Zero (and negative) samples
    are excluded from the fit and reported in the result.
    """
    x = np.asarray(samples, dtype=np.int64)
    n_zero = int((x <= 0).sum())
    x = x[x > 0]
    if len(x) < min_tail:
        raise FitDegenerateError(f"need at least {min_tail} positive samples, got {len(x)}")
    if np.unique(x).size < 2:
        raise FitDegenerateError("all samples equal; no power-law fit possible")

    def fit_at(xm: int) -> tuple[float, float, int]:
        tail = x[x >= xm]
        alpha = _mle_alpha(tail, xm)
        return alpha, _ks_stat(tail, alpha, xm), len(tail)

    if x_min is not None:
        if x_min < 1:
            raise DomainError(f"x_min must be >= 1, got {x_min}")
        if (x >= x_min).sum() < min_tail:
            raise FitDegenerateError(f"fewer than {min_tail} samples at or above x_min={x_min}")
        alpha, ks, n_tail = fit_at(int(x_min))
        chosen = int(x_min)
    else:
        x_sorted = np.sort(x)
        candidates = [
            int(v)
            for v in np.unique(x_sorted)
            if (x_sorted >= v).sum() >= min_tail and np.unique(x_sorted[x_sorted >= v]).size >= 2
        ]
        if not candidates:
            raise FitDegenerateError("no x_min candidate keeps enough tail samples")
        best = None
        for xm in candidates:
            alpha_c, ks_c, nt = fit_at(xm)
            if best is None or ks_c < best[1]:
                best = (alpha_c, ks_c, nt, xm)
        alpha, ks, n_tail, chosen = best

    tail = x[x >= chosen]
    alpha_cont = 1.0 + len(tail) / float(np.log(tail / (chosen - 0.5)).sum())
    return FitResult(
        alpha_hat=alpha,
        x_min=chosen,
        ks_stat=ks,
        n_tail=n_tail,
        alpha_continuous=alpha_cont,
        n_zero=n_zero,
    )


def sample_discrete_powerlaw(
    rng: np.random.Generator, alpha: float, x_min: int, size: int, table_span: int = 10 ** 6
) -> np.ndarray:
    """Inverse-CDF draws from the zeta-normalized discrete power law.

    Exact within a precomputed table of `table_span` values; the residual
    tail beyond it (mass ~1e-7 at typical exponents) falls back to the
    continuous Pareto approximation.
    """
    if not (alpha > 1):
        raise DomainError(f"exponent must exceed 1, got {alpha}")
    ks = np.arange(x_min, x_min + table_span, dtype=np.float64)
    pmf = ks ** -alpha / hzeta(alpha, x_min)
    cdf = np.cumsum(pmf)
    u = rng.random(size)
    idx = np.searchsorted(cdf, u, side="right")
    out = x_min + idx
    over = idx >= table_span
    if over.any():
        k_max = x_min + table_span - 1
        ccdf_max = max(1.0 - cdf[-1], 1e-300)
        out[over] = np.floor(k_max * (ccdf_max / (1.0 - u[over])) ** (1.0 / (alpha - 1.0))).astype(np.int64)
    return out.astype(np.int64)


def gof_pvalue(
    samples,
    fit: FitResult,
    n_bootstrap: int = 1000,
    seed: int = 0,
) -> GofResult:
    """Semi-parametric bootstrap p-value for the power-law tail fit.

    Each replicate draws its RNG from (seed, replicate index), resamples the
    empirical body below x_min, draws the tail from the fitted law, refits
    the exponent at the same x_min, and records the KS statistic.  p is the
    fraction of replicate statistics at or above the observed one.
    """
    if n_bootstrap < 100:
        raise DomainError(f"need at least 100 bootstrap replicates, got {n_bootstrap}")
    x = np.asarray(samples, dtype=np.int64)
    x = x[x > 0]
    body = x[x < fit.x_min]
    n = len(x)
    tail_frac = fit.n_tail / n
    exceed = 0
    for rep in range(n_bootstrap):
        rng = np.random.default_rng([seed, rep])
        take_tail = rng.random(n) < tail_frac
        n_tail_syn = int(take_tail.sum())
        syn = np.empty(n, dtype=np.int64)
        syn[take_tail] = sample_discrete_powerlaw(rng, fit.alpha_hat, fit.x_min, n_tail_syn)
        n_body_syn = n - n_tail_syn
        if n_body_syn:
            if len(body) == 0:
                syn[~take_tail] = sample_discrete_powerlaw(rng, fit.alpha_hat, fit.x_min, n_body_syn)
            else:
                syn[~take_tail] = rng.choice(body, size=n_body_syn, replace=True)
        tail_syn = syn[syn >= fit.x_min]
        if len(tail_syn) < 2 or np.unique(tail_syn).size < 2:
            exceed += 1  # degenerate replicate cannot beat the observed fit
            continue
        alpha_syn = _mle_alpha(tail_syn, fit.x_min)
        if _ks_stat(tail_syn, alpha_syn, fit.x_min) >= fit.ks_stat:
            exceed += 1
    p = exceed / n_bootstrap
    stderr = float(np.sqrt(p * (1.0 - p) / n_bootstrap))
    return GofResult(p_value=p, stderr=stderr, n_bootstrap=n_bootstrap, ks_observed=fit.ks_stat)


def with_p_value(fit: FitResult, gof: GofResult) -> FitResult:
    return replace(fit, p_value=gof.p_value)


def _sphere_points(rng: np.random.Generator, m: int) -> np.ndarray:
    g = rng.standard_normal((m, 3))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _pareto_draws(rng: np.random.Generator, pareto: ParetoParams, m: int) -> np.ndarray:
    return pareto.w0 * (1.0 - rng.random(m)) ** (-1.0 / pareto.a)


def mc_estimate(
    kind: str,
    pareto: ParetoParams,
    theta: float,
    trials: int,
    seed: int = 0,
    w: float | None = None,
    alpha: float | None = None,
    beta: float | None = None,
    h: LinkFn | None = None,
    chunk: int = 10 ** 6,
) -> McEstimate:
    """Bernoulli Monte-Carlo estimate of an edge/wedge probability (d = 3).

    kind: 'edge', 'edge_given_weight', 'wedge', 'directed_edge_given_weight',
    or 'linkfn_edge_given_weight'.  Fresh random nodes per trial, exact
    predicate, binomial standard error.
    """
    if trials < 10 ** 4:
        raise DomainError(f"need at least 1e4 trials, got {trials}")
    if kind in ("edge_given_weight", "directed_edge_given_weight", "linkfn_edge_given_weight"):
        if w is None or w < pareto.w0:
            raise DomainError("this kind requires a conditioning weight w >= w0")
    if kind in ("directed_edge_given_weight", "linkfn_edge_given_weight"):
        if alpha is None or beta is None:
            raise DomainError("directed kinds require alpha and beta")
    if kind == "linkfn_edge_given_weight" and h is None:
        raise DomainError("linkfn kind requires a link function")
    if not (theta >= 0):
        raise DomainError(f"threshold must be non-negative, got {theta}")

    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        if kind == "edge":
            dots = np.einsum("ij,ij->i", _sphere_points(rng, m), _sphere_points(rng, m))
            ok = _pareto_draws(rng, pareto, m) * _pareto_draws(rng, pareto, m) * dots >= theta
        elif kind == "edge_given_weight":
            x = _sphere_points(rng, 1)[0]
            dots = _sphere_points(rng, m) @ x
            ok = w * _pareto_draws(rng, pareto, m) * dots >= theta
        elif kind == "wedge":
            wc = _pareto_draws(rng, pareto, m)
            xc = _sphere_points(rng, m)
            d1 = np.einsum("ij,ij->i", xc, _sphere_points(rng, m))
            d2 = np.einsum("ij,ij->i", xc, _sphere_points(rng, m))
            w1 = _pareto_draws(rng, pareto, m)
            w2 = _pareto_draws(rng, pareto, m)
            ok = (wc * w1 * d1 >= theta) & (wc * w2 * d2 >= theta)
        elif kind == "directed_edge_given_weight":
            x = _sphere_points(rng, 1)[0]
            dots = _sphere_points(rng, m) @ x
            ok = w ** alpha * _pareto_draws(rng, pareto, m) ** beta * dots >= theta
        elif kind == "linkfn_edge_given_weight":
            x = _sphere_points(rng, 1)[0]
            dots = _sphere_points(rng, m) @ x
            ok = w ** alpha * _pareto_draws(rng, pareto, m) ** beta * h(dots) >= theta
        else:
            raise DomainError(f"unknown Monte-Carlo kind {kind!r}")
        hits += int(ok.sum())
        done += m
    p_hat = hits / trials
    stderr = float(np.sqrt(p_hat * (1.0 - p_hat) / trials))
    return McEstimate(estimate=p_hat, stderr=stderr, trials=trials)
