"""Perturbation bounds for Markov chains and their exact finite-space verifier.

Given an unperturbed kernel P with a geometric ergodicity certificate
tau(P^n) <= C rho^n and a perturbed kernel with a drift condition
(Pt V)(x) <= delta V(x) + L, the n-step Wasserstein distance between the
two chains is controlled by

    C (rho^n W(p0, pt0) + (1 - rho^n) gamma kappa / (1 - rho)),

where gamma measures the one-step perturbation relative to V and
kappa = max{pt0(V), L/(1-delta)}.  The variants differ in which metric
the distance is measured in (base metric, V-weighted norm, or total
variation) and in how gamma enters; the total-variation variant carries
the characteristic gamma*log(1/gamma) dependence and is only valid for
gamma below exp(-1).  All logarithms are natural.

``verify_on_finite`` closes the loop: it fits every constant exactly on
a finite instance, evolves both chains, and tabulates exact distance
against bound, step by step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import HypothesisViolation
from .kernels import (
    DriftEstimate,
    FiniteKernel,
    fit_drift_L,
    fit_geometric_constants,
    kernel_gamma_tv,
    kernel_gamma_vnorm,
    kernel_gamma_wasserstein,
    stationary_distribution,
    verify_drift,
)
from .otcore import (
    DiscreteDistribution,
    FiniteMetricSpace,
    WeightFunction,
    total_variation,
    vnorm_distance,
    wasserstein1_exact,
)

SLACK_TOL = 1e-9


def _pow(rho: float, n) -> float:
    """rho^n by repeated squaring; n may be math.inf (limit value 0)."""
    if rho < 0.0:
        raise ValueError("rho must be nonnegative")
    if n == math.inf:
        return 0.0 if rho < 1.0 else 1.0
    if n < 0 or int(n) != n:
        raise ValueError("n must be a nonnegative integer or math.inf")
    n = int(n)
    out = 1.0
    base = rho
    while n:
        if n & 1:
            out *= base
        base *= base
        n >>= 1
    return out


@dataclass(frozen=True)
class BoundInputs:
    """Constants feeding the n-step perturbation bound."""

    C: float
    rho: float
    delta: float
    L: float
    gamma: float
    kappa: float
    n: Union[int, float]  # nonnegative integer, or math.inf for the limit
    w0: float

    def __post_init__(self):
        if not (0.0 <= self.rho < 1.0):
            raise ValueError("rho must lie in [0, 1)")
        if not (0.0 <= self.delta < 1.0):
            raise ValueError("delta must lie in [0, 1)")
        for name in ("C", "L", "gamma", "kappa", "w0"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        if self.kappa < 1.0 - 1e-12:
            raise ValueError("kappa must be >= 1 (weight functions satisfy V >= 1)")
        if self.n != math.inf and (self.n < 0 or int(self.n) != self.n):
            raise ValueError("n must be a nonnegative integer or math.inf")


def kappa(p0_V: float, L: float, delta: float) -> float:
    """max{pt0(V), L/(1-delta)}: the mass scale entering every bound."""
    if not (0.0 <= delta < 1.0):
        raise ValueError(f"delta = {delta} outside [0, 1)")
    if p0_V < 1.0 - 1e-12:
        raise ValueError("p0_V must be >= 1 since V >= 1")
    if L < 0.0:
        raise ValueError("L must be nonnegative")
    return max(p0_V, L / (1.0 - delta))


def thm31_bound(inputs: BoundInputs) -> float:
    """n-step Wasserstein perturbation bound from (C, rho, gamma, kappa)."""
    rn = _pow(inputs.rho, inputs.n)
    return inputs.C * (rn * inputs.w0
                       + (1.0 - rn) * inputs.gamma * inputs.kappa / (1.0 - inputs.rho))


def stationary_wasserstein_bound(C: float, rho: float, gamma: float,
                                 L: float, delta: float) -> float:
    """W(pi, pit) <= gamma C/(1-rho) * L/(1-delta)."""
    if not (0.0 <= rho < 1.0):
        raise ValueError("rho must lie in [0, 1)")
    if not (0.0 <= delta < 1.0):
        raise ValueError("delta must lie in [0, 1)")
    return gamma * C / (1.0 - rho) * L / (1.0 - delta)


def geom2_bound(C: float, rho: float, n, w0: float, gamma: float,
                delta: float, L: float, p0_V: float) -> float:
    """Single-weight V-norm bound; needs the strengthened margin gamma + delta < 1."""
    if gamma + delta >= 1.0:
        raise HypothesisViolation(
            f"gamma + delta = {gamma + delta:.6f} >= 1; the single-weight "
            "corollary needs gamma + delta < 1"
        )
    k = max(p0_V, L / (1.0 - delta - gamma))
    return thm31_bound(BoundInputs(C=C, rho=rho, delta=delta, L=L,
                                   gamma=gamma, kappa=k, n=n, w0=w0))


_INV_E = math.exp(-1.0)


def _geom3_gamma_factor(C: float, L: float, gamma_tv: float) -> float:
    if not (0.0 < gamma_tv < _INV_E):
        raise HypothesisViolation(
            f"gamma_tv = {gamma_tv!r} outside (0, exp(-1)); the total-variation "
            "bound is only valid on that interval"
        )
    ln_inv = math.log(1.0 / gamma_tv)
    base = 2.0 * C * (L + 1.0)
    return base ** (1.0 / ln_inv) * gamma_tv * ln_inv


def geom3_bound(C: float, rho: float, n, w0_vnorm: float, gamma_tv: float,
                delta: float, L: float, kappa: float) -> float:
    """Total-variation perturbation bound with the gamma log(1/gamma) rate.

    Valid for gamma_tv in (0, exp(-1)); requires the double drift condition
    (perturbed kernel with delta, unperturbed with coefficient 1) which the
    caller certifies.  w0_vnorm is the initial distance in the V-norm.
    """
    if not (0.0 <= delta < 1.0):
        raise ValueError("delta must lie in [0, 1)")
    if not (0.0 <= rho < 1.0):
        raise ValueError("rho must lie in [0, 1)")
    factor = _geom3_gamma_factor(C, L, gamma_tv)
    return C * _pow(rho, n) * w0_vnorm + kappa * math.e / (1.0 - rho) * factor


def geom3_stationary_bound(C: float, rho: float, gamma_tv: float,
                           delta: float, L: float) -> float:
    """||pi - pit||_tv bound; equals geom3_bound with w0 = 0, kappa = L/(1-delta)."""
    if not (0.0 <= delta < 1.0):
        raise ValueError("delta must lie in [0, 1)")
    if not (0.0 <= rho < 1.0):
        raise ValueError("rho must lie in [0, 1)")
    factor = _geom3_gamma_factor(C, L, gamma_tv)
    return L / ((1.0 - delta) * (1.0 - rho)) * math.e * factor


def geom4_bound(base: float, rho: float, kappa: float, K: float, N: float) -> float:
    """Monte-Carlo budget form: bound when gamma <= K log(N)/N.

    ``base`` is the 2C(L+1) constant of the total-variation bound (callers
    with a different drift pair pass their own).  Requires N > 6 K^(3/2).
    """
    if K < 1.0:
        raise HypothesisViolation(f"K = {K} < 1; the budget constant must be >= 1")
    if N <= 6.0 * K ** 1.5:
        raise HypothesisViolation(
            f"N = {N} <= 6 K^(3/2) = {6.0 * K ** 1.5:.6g}; sample size too small "
            "for gamma to enter the valid range"
        )
    if base < 1.0:
        raise ValueError("base = 2C(L+1) must be >= 1")
    lnN = math.log(N)
    return 3.0 * kappa * base ** (2.0 / lnN) / (1.0 - rho) * K * lnN ** 2 / N


@dataclass
class PerturbationReport:
    """Per-step table of exact (or empirical) distance against a bound."""

    theorem: str
    ns: np.ndarray
    distances: np.ndarray
    bounds: np.ndarray
    constants: dict = field(default_factory=dict)
    # set when distances are Monte Carlo estimates; verified() then allows
    # a 3-sigma margin per row instead of the exact tolerance alone
    distance_se: Optional[np.ndarray] = None

    @property
    def slack(self) -> np.ndarray:
        return self.bounds - self.distances

    @property
    def min_slack(self) -> float:
        return float(self.slack.min())

    def verified(self, tol: float = SLACK_TOL) -> bool:
        margin = tol if self.distance_se is None else tol + 3.0 * self.distance_se
        return bool(np.all(self.slack >= -margin))

    def to_csv(self) -> str:
        # repr(float) is the shortest decimal that round-trips exactly
        if self.distance_se is None:
            lines = ["n,distance,bound,slack"]
            rows = zip(self.ns, self.distances, self.bounds, self.slack)
            for n, d, b, s in rows:
                lines.append(f"{int(n)},{float(d)!r},{float(b)!r},{float(s)!r}")
        else:
            lines = ["n,distance,bound,slack,distance_se"]
            rows = zip(self.ns, self.distances, self.bounds, self.slack,
                       self.distance_se)
            for n, d, b, s, se in rows:
                lines.append(f"{int(n)},{float(d)!r},{float(b)!r},"
                             f"{float(s)!r},{float(se)!r}")
        return "\n".join(lines) + "\n"


_WASSERSTEIN_WHICH = ("thm31", "v1", "stationary")
_VNORM_WHICH = ("geom1", "geom2")
_TV_WHICH = ("geom3", "geom3_stationary")
WHICH_CHOICES = _WASSERSTEIN_WHICH + _VNORM_WHICH + _TV_WHICH


def _distance_fn(which, metric, V):
    if which in _WASSERSTEIN_WHICH:
        return lambda p, q: wasserstein1_exact(p, q, metric)[0]
    if which in _VNORM_WHICH:
        return lambda p, q: vnorm_distance(p, q, V)
    return lambda p, q: total_variation(p, q)


def verify_on_finite(P: FiniteKernel, Pt: FiniteKernel,
                     metric: Union[FiniteMetricSpace, WeightFunction, None],
                     Vt: WeightFunction,
                     p0: DiscreteDistribution, pt0: DiscreteDistribution,
                     n_max: int, which: str,
                     *, delta: float = 0.5, m: int = 2) -> PerturbationReport:
    """Exact end-to-end check of one perturbation theorem on a finite pair.

    Every constant is fitted on the instance itself (ergodicity via
    fit_geometric_constants at horizon ``m``, drift L via fit_drift_L at
    the given ``delta``, gamma via the matching kernel_gamma_*), then the
    exact per-step distances are tabulated against the bound.  The
    ``metric`` slot selects the distance structure:

      * thm31 / v1 / stationary: a FiniteMetricSpace; distances are
        exact Wasserstein.  v1 forces the drift weight to 1 (kappa = 1).
      * geom1: a WeightFunction V; distances and gamma use the V-norm,
        drift uses Vt (two weights).
      * geom2 / geom3 / geom3_stationary: single-weight variants; the
        weight is Vt and ``metric`` must be None or that same Vt.

    Stationary variants emit a single row with n = -1.

    Raises HypothesisViolation (or a subclass) when the selected
    theorem's standing hypotheses fail on this instance.
    """
    if which not in WHICH_CHOICES:
        raise ValueError(f"unknown theorem selector {which!r}; pick from {WHICH_CHOICES}")
    if not P.space.same_points(Pt.space):
        raise HypothesisViolation("kernels must share one point set")
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")

    if which in _WASSERSTEIN_WHICH:
        if not isinstance(metric, FiniteMetricSpace):
            raise ValueError(f"{which} needs a FiniteMetricSpace in the metric slot")
        fit_arg = metric
    elif which == "geom1":
        if not isinstance(metric, WeightFunction):
            raise ValueError("geom1 needs the distance WeightFunction in the metric slot")
        fit_arg = metric
    else:
        if metric is not None and metric is not Vt:
            raise ValueError(f"{which} is a single-weight bound; pass metric=None")
        fit_arg = Vt

    if which == "v1":
        Vt = WeightFunction.ones(P.space)

    est = fit_geometric_constants(P, fit_arg, m=m, n_check=m)
    dist = _distance_fn(which, metric, fit_arg if which != "v1" else None)

    if which in ("thm31", "v1", "stationary"):
        gamma = kernel_gamma_wasserstein(P, Pt, metric, Vt)
    elif which == "geom1":
        gamma = kernel_gamma_vnorm(P, Pt, metric, Vt)
    elif which == "geom2":
        gamma = kernel_gamma_vnorm(P, Pt, Vt, Vt)
    else:
        gamma = kernel_gamma_tv(P, Pt, Vt)

    # drift: on the perturbed kernel, except geom2 (unperturbed) and geom3 (both)
    drift_kernel = P if which == "geom2" else Pt
    L = fit_drift_L(drift_kernel, Vt, delta)
    if which in _TV_WHICH:
        one_step_gap = float(np.max(P.apply_to_function(Vt.values) - Vt.values))
        L = max(L, one_step_gap, 1e-12)
    check = verify_drift(drift_kernel, DriftEstimate(Vt, delta, L))
    if not check.ok:
        raise HypothesisViolation(
            f"drift condition fails at index {check.worst_index} "
            f"(slack {check.worst_slack:.3e})"
        )

    p0_V = pt0.expectation(Vt.values)
    constants = {"C": est.C, "rho": est.rho, "delta": delta, "L": L,
                 "gamma": gamma, "p0_V": p0_V, "m": m,
                 "metric_tag": est.metric_tag}

    if which == "stationary":
        pi = stationary_distribution(P)
        pit = stationary_distribution(Pt)
        b = stationary_wasserstein_bound(est.C, est.rho, gamma, L, delta)
        d = dist(pi, pit)
        return PerturbationReport("stationary", np.array([-1]), np.array([d]),
                                  np.array([b]), constants)
    if which == "geom3_stationary":
        pi = stationary_distribution(P)
        pit = stationary_distribution(Pt)
        b = geom3_stationary_bound(est.C, est.rho, gamma, delta, L)
        d = dist(pi, pit)
        return PerturbationReport("geom3_stationary", np.array([-1]), np.array([d]),
                                  np.array([b]), constants)

    if which == "geom3":
        w0 = vnorm_distance(p0, pt0, Vt)
        k = kappa(p0_V, L, delta)
        bound_at = lambda n: geom3_bound(est.C, est.rho, n, w0, gamma, delta, L, k)
        # gamma range check happens on the first call; do it before evolving
        _geom3_gamma_factor(est.C, L, gamma)
    elif which == "geom2":
        w0 = dist(p0, pt0)
        if gamma + delta >= 1.0:
            raise HypothesisViolation(
                f"gamma + delta = {gamma + delta:.6f} >= 1 on this instance"
            )
        bound_at = lambda n: geom2_bound(est.C, est.rho, n, w0, gamma, delta, L, p0_V)
    else:
        w0 = dist(p0, pt0)
        k = kappa(p0_V, L, delta)
        bound_at = lambda n: thm31_bound(BoundInputs(
            C=est.C, rho=est.rho, delta=delta, L=L,
            gamma=gamma, kappa=k, n=n, w0=w0))

    ns = np.arange(n_max + 1)
    distances = np.empty(n_max + 1)
    bounds = np.empty(n_max + 1)
    p, q = p0, pt0
    for n in range(n_max + 1):
        if n > 0:
            p = P.push(p)
            q = Pt.push(q)
        distances[n] = dist(p, q)
        bounds[n] = bound_at(n)
    constants["w0"] = w0
    return PerturbationReport(which, ns, distances, bounds, constants)
