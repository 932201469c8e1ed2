"""Closed-form edge probabilities, moments, and threshold calibration.

Every formula here is the 3-dimensional case (directions on the 2-sphere);
other dimensions are rejected by the callers that know about dimension.
The recurring building block is the spherical-cap fraction: for unit vectors,
P(dot >= t) = (1 - t) / 2 when t is in [0, 1].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize
from scipy.special import zeta as _hurwitz_zeta

from .errors import (
    DomainError,
    FeasibilityError,
    NumericError,
    UnsupportedAnalyticsError,
)
from .model import LinkFn, ParetoParams

_CALIBRATION_REL_TOL = 1e-10


def _check_theta(theta: float) -> None:
    if not (theta >= 0):
        raise DomainError(f"threshold must be non-negative, got theta={theta}")


def _check_weight(w: float, pareto: ParetoParams) -> None:
    if not (w >= pareto.w0):
        raise DomainError(f"weight {w} below Pareto scale w0={pareto.w0}")


def p_edge_given_weight(w: float, pareto: ParetoParams, theta: float) -> float:
    """Probability that a node of weight w links to an independent random node."""
    _check_theta(theta)
    _check_weight(w, pareto)
    a, w0 = pareto.a, pareto.w0
    if w > theta / w0:
        return 0.5 * (1.0 - a * theta / (w * (a + 1.0) * w0))
    return 0.5 * w0 ** a / (theta ** a * (a + 1.0)) * w ** a


def p_edge(pareto: ParetoParams, theta: float) -> float:
    """Edge probability for two independent random nodes."""
    _check_theta(theta)
    a, w0 = pareto.a, pareto.w0
    if theta < w0 ** 2:
        return 0.5 - 0.5 * (a / (a + 1.0)) ** 2 * theta / w0 ** 2
    return (
        w0 ** (2 * a)
        / (2.0 * theta ** a)
        * (
            a * (math.log(theta) - 2.0 * math.log(w0)) / (a + 1.0)
            - (a / (a + 1.0)) ** 2
            + 1.0
        )
    )


def expected_edges(n: int, pareto: ParetoParams, theta: float) -> float:
    if n < 1:
        raise DomainError(f"node count must be >= 1, got {n}")
    return n * (n - 1) / 2.0 * p_edge(pareto, theta)


def p_wedge(pareto: ParetoParams, theta: float) -> float:
    """Probability that one node links to two independent random leaves.

    Exceeds p_edge^2 because both edges share the center node's weight.
    """
    _check_theta(theta)
    a, w0 = pareto.a, pareto.w0
    r = a / (a + 1.0)
    if theta < w0 ** 2:
        return (
            0.25
            - 0.5 * r ** 2 * theta / w0 ** 2
            + 0.25 * a ** 3 * theta ** 2 / ((a + 1.0) ** 2 * (a + 2.0) * w0 ** 4)
        )
    head = 0.25 * w0 ** (2 * a) / (theta ** (2 * a) * (a + 1.0) ** 2) * (theta ** a - w0 ** (2 * a))
    tail = (
        0.25
        * w0 ** (2 * a)
        / theta ** a
        * (1.0 - 2.0 * r ** 2 + a ** 3 / ((a + 1.0) ** 2 * (a + 2.0)))
    )
    return head + tail


def variance_edges(n: int, pareto: ParetoParams, theta: float) -> float:
    """Variance of the edge count: Bernoulli term plus the shared-node wedge term."""
    if n < 2:
        raise DomainError(f"variance needs n >= 2, got {n}")
    pe = p_edge(pareto, theta)
    pw = p_wedge(pareto, theta)
    pairs = n * (n - 1) / 2.0
    return pairs * pe * (1.0 - pe) + n * (n - 1) * (n - 2) / 2.0 * (pw - pe ** 2)


def calibrate_theta(n: int, pareto: ParetoParams, target_edges: float) -> float:
    """Threshold with expected_edges(n, theta) = target_edges (unique root).

    Feasible targets lie strictly between 0 and n(n-1)/4: the edge
    probability spans (0, 1/2], so any sub-quadratic growth target is
    reachable for large enough n.
    """
    pairs = n * (n - 1) / 2.0
    if not (0.0 < target_edges < pairs / 2.0):
        raise FeasibilityError(
            f"target {target_edges} infeasible for n={n}: must lie in (0, {pairs / 2.0})"
        )
    a, w0 = pareto.a, pareto.w0
    p = target_edges / pairs
    # low-threshold branch inverts in closed form
    theta = 2.0 * (0.5 - p) * w0 ** 2 * ((a + 1.0) / a) ** 2
    if theta <= w0 ** 2:
        return theta
    hi = 2.0 * w0 ** 2
    while p_edge(pareto, hi) > p:
        hi *= 2.0
    theta = optimize.brentq(
        lambda t: p_edge(pareto, t) - p, w0 ** 2, hi, xtol=1e-300, rtol=8.9e-16, maxiter=200
    )
    achieved = expected_edges(n, pareto, theta)
    if abs(achieved - target_edges) / target_edges > _CALIBRATION_REL_TOL:
        raise NumericError(
            f"calibration missed target: achieved {achieved}, wanted {target_edges}"
        )
    return theta


def theta_powerlaw_schedule(n: int, D: float, a: float) -> float:
    """theta(n) = D * n^(1/a), the schedule that yields linearithmic growth."""
    if not (D > 0):
        raise DomainError(f"schedule coefficient must be positive, got D={D}")
    if n < 1:
        raise DomainError(f"node count must be >= 1, got {n}")
    return D * n ** (1.0 / a)


def expected_edges_linlog(n: int, D: float, pareto: ParetoParams) -> float:
    """Exact expected edge count under theta(n) = D * n^(1/a).

    Valid once D * n^(1/a) >= w0^2; equals expected_edges at that threshold.
    Leading coefficient of n*ln(n) is w0^(2a) / (4 D^a (a+1)).
    """
    a, w0 = pareto.a, pareto.w0
    if not (D > 0):
        raise DomainError(f"schedule coefficient must be positive, got D={D}")
    if n < w0 ** (2 * a) / D ** a:
        raise DomainError(
            f"n={n} below validity region n >= w0^(2a)/D^a = {w0 ** (2 * a) / D ** a}"
        )
    return (
        (n - 1)
        * w0 ** (2 * a)
        / (4.0 * D ** a)
        * (
            math.log(n) / (a + 1.0)
            - (a / (a + 1.0)) ** 2
            + 1.0
            + a * (math.log(D) - 2.0 * math.log(w0)) / (a + 1.0)
        )
    )


def directed_branch_boundary(pareto: ParetoParams, theta: float, alpha: float, beta: float) -> float:
    """Weight at which the two integration regimes of the directed P_e(w) meet.

    This is where max{w0, theta^(1/beta) / w^(alpha/beta)} switches:
    w* = (theta / w0^beta)^(1/alpha).
    """
    return (theta / pareto.w0 ** beta) ** (1.0 / alpha)


def p_edge_given_weight_directed(
    w: float,
    pareto: ParetoParams,
    theta: float,
    alpha: float,
    beta: float,
    printed_boundary: bool = False,
) -> float:
    """Out-edge probability of a node of weight w in the directed model.

    `printed_boundary` switches branches at (theta/w0^alpha)^(1/beta)
    instead of the limit-derived w* = (theta/w0^beta)^(1/alpha); the two
    agree only when alpha = beta.  It exists so the discrepancy can be
    arbitrated against Monte Carlo; the default boundary is the correct one.
    """
    _check_theta(theta)
    _check_weight(w, pareto)
    if not (alpha > 0 and beta > 0):
        raise DomainError(f"alpha and beta must be positive, got {alpha}, {beta}")
    a, w0 = pareto.a, pareto.w0
    if printed_boundary:
        boundary = (theta / w0 ** alpha) ** (1.0 / beta)
    else:
        boundary = directed_branch_boundary(pareto, theta, alpha, beta)
    if w > boundary:
        return 0.5 * (1.0 - a * theta / (w ** alpha * (a + beta) * w0 ** beta))
    return w ** (a * alpha / beta) * w0 ** a / (2.0 * theta ** (a / beta)) * beta / (a + beta)


def p_edge_directed(pareto: ParetoParams, theta: float, alpha: float, beta: float) -> float:
    """Arc probability for an ordered pair of independent random nodes.

    Integrates the directed P_e(w) against the weight density; closed form
    in both regimes of w*.
    """
    _check_theta(theta)
    if not (alpha > 0 and beta > 0):
        raise DomainError(f"alpha and beta must be positive, got {alpha}, {beta}")
    a, w0 = pareto.a, pareto.w0
    if theta == 0.0:
        return 0.5
    wstar = directed_branch_boundary(pareto, theta, alpha, beta)
    wc = max(w0, wstar)
    # upper branch: integral of f(w) * (1 - C / w^alpha) / 2 over [wc, inf)
    c = a * theta / ((a + beta) * w0 ** beta)
    surv = (w0 / wc) ** a
    upper = 0.5 * (surv - c * a * w0 ** a / (a + alpha) * wc ** -(a + alpha))
    if wstar <= w0:
        return upper
    # lower branch: integral of f(w) * K * w^(a*alpha/beta) over [w0, w*)
    k = w0 ** a * beta / (2.0 * theta ** (a / beta) * (a + beta))
    e = a * alpha / beta - a
    if e == 0.0:
        lower = k * a * w0 ** a * math.log(wstar / w0)
    else:
        lower = k * a * w0 ** a * (wstar ** e - w0 ** e) / e
    return upper + lower


def expected_arcs_directed(
    n: int, pareto: ParetoParams, theta: float, alpha: float, beta: float
) -> float:
    if n < 1:
        raise DomainError(f"node count must be >= 1, got {n}")
    return n * (n - 1) * p_edge_directed(pareto, theta, alpha, beta)


def calibrate_theta_directed(
    n: int, pareto: ParetoParams, target_arcs: float, alpha: float, beta: float
) -> float:
    """Threshold with expected arc count = target_arcs in the directed model."""
    ordered_pairs = float(n) * (n - 1)
    if not (0.0 < target_arcs < ordered_pairs / 2.0):
        raise FeasibilityError(
            f"target {target_arcs} infeasible for n={n}: must lie in (0, {ordered_pairs / 2.0})"
        )
    p = target_arcs / ordered_pairs
    hi = pareto.w0 ** (alpha + beta)
    while p_edge_directed(pareto, hi, alpha, beta) > p:
        hi *= 2.0
    return optimize.brentq(
        lambda t: p_edge_directed(pareto, t, alpha, beta) - p,
        0.0,
        hi,
        xtol=1e-300,
        rtol=8.9e-16,
        maxiter=200,
    )


def p_edge_given_weight_linkfn(
    w: float,
    pareto: ParetoParams,
    theta: float,
    alpha: float,
    beta: float,
    h: LinkFn,
    rel_tol: float = 1e-8,
) -> float:
    """Out-edge probability of a node of weight w under a link transform.

    The inner spherical integral reduces to a cap fraction in h^{-1};
    the outer weight integral is adaptive quadrature with the integrand's
    kinks (where theta/(w^a (w')^b) crosses h(1) and h(-1)) as panel
    boundaries.  Only strictly increasing links are supported.
    """
    _check_theta(theta)
    _check_weight(w, pareto)
    if not (alpha > 0 and beta > 0):
        raise DomainError(f"alpha and beta must be positive, got {alpha}, {beta}")
    if not h.strictly_increasing:
        raise UnsupportedAnalyticsError(
            "closed-form and quadrature analytics require a strictly increasing link"
        )
    a, w0 = pareto.a, pareto.w0
    q, r = h.hi, h.lo

    def cap_fraction(t: float) -> float:
        if t > q:
            return 0.0
        if t < r:
            return 1.0
        return 0.5 * (1.0 - h.inverse(t))

    if theta == 0.0:
        return cap_fraction(0.0)
    if q <= 0.0:
        return 0.0

    def integrand(wp: float) -> float:
        t = theta / (w ** alpha * wp ** beta)
        return a * w0 ** a * wp ** -(a + 1.0) * cap_fraction(t)

    w_q = (theta / (w ** alpha * q)) ** (1.0 / beta)  # below: cap is empty
    lo = max(w0, w_q)
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if r > 0.0:
                w_r = (theta / (w ** alpha * r)) ** (1.0 / beta)  # above: full sphere
                hi_lim = max(lo, w_r)
                if hi_lim > lo:
                    val, err = integrate.quad(integrand, lo, hi_lim, epsabs=1e-15, epsrel=rel_tol * 1e-2, limit=200)
                    total += val
                    _require_quad_tol(val, err, rel_tol)
                total += pareto.survival(hi_lim)
            else:
                val, err = integrate.quad(integrand, lo, np.inf, epsabs=1e-15, epsrel=rel_tol * 1e-2, limit=200)
                total += val
                _require_quad_tol(val, err, rel_tol)
        except integrate.IntegrationWarning as exc:
            raise NumericError(f"link-function quadrature did not converge: {exc}") from exc
    return float(total)


def _require_quad_tol(value: float, abserr: float, rel_tol: float) -> None:
    if abserr > max(abs(value) * rel_tol, 1e-13):
        raise NumericError(
            f"quadrature error estimate {abserr} exceeds tolerance for value {value}"
        )


def degree_pmf_reference(k, exponent: float):
    """Normalized discrete power-law pmf k^(-exponent) / zeta(exponent)."""
    if not (exponent > 1):
        raise DomainError(f"pmf exponent must exceed 1, got {exponent}")
    k_arr = np.asarray(k)
    if np.any(k_arr < 1):
        raise DomainError("degree values must be >= 1")
    out = k_arr.astype(float) ** -exponent / _hurwitz_zeta(exponent, 1)
    return out if out.ndim else float(out)


def hurwitz_zeta(s: float, x: float = 1.0) -> float:
    """Hurwitz zeta, the normalizer of discrete power-law tails."""
    if not (s > 1):
        raise DomainError(f"zeta argument must exceed 1, got {s}")
    return float(_hurwitz_zeta(s, x))


@dataclass(frozen=True)
class PowerLawSchedule:
    """theta(n) = D * n^(1/a)."""

    D: float
    kind: str = "powerlaw"

    def __post_init__(self):
        if not (self.D > 0):
            raise DomainError(f"schedule coefficient must be positive, got D={self.D}")

    def theta_for(self, n: int, pareto: ParetoParams) -> float:
        return theta_powerlaw_schedule(n, self.D, pareto.a)


@dataclass(frozen=True)
class CalibratedSchedule:
    """theta(n) solved so the expected edge count equals target(n)."""

    target: Callable[[int], float]
    kind: str = "calibrated"

    def theta_for(self, n: int, pareto: ParetoParams) -> float:
        return calibrate_theta(n, pareto, self.target(n))
