"""Finite Markov kernels: ergodicity coefficients and drift conditions.

The generalized ergodicity coefficient of a kernel P under a metric d is

    tau(P) = sup_{x != y} W(P(x, .), P(y, .)) / d(x, y),

computed exactly via optimal transport.  It is submultiplicative over
composition and contracts Wasserstein distances between distributions,
which is what turns one-step estimates into geometric (C, rho) rates.
Under the weighted metric d_V the coefficient has a transport-free
closed form, used as the fast route everywhere V-norm bounds appear.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NoContractionError, NonUniqueStationaryError, SpaceMismatchError
from .otcore import (
    DiscreteDistribution,
    FiniteMetricSpace,
    WeightFunction,
    _transport,
    dv_metric,
)

ROW_TOL = 1e-12
STATIONARY_RESIDUAL_TOL = 1e-10
DRIFT_SLACK_TOL = 1e-10
_EIG_ONE_TOL = 1e-8


class FiniteKernel:
    """Row-stochastic transition matrix on a finite metric space."""

    def __init__(self, space: FiniteMetricSpace, matrix) -> None:
        matrix = np.array(matrix, dtype=float)
        n = space.size
        if matrix.shape != (n, n):
            raise ValueError(f"kernel shape {matrix.shape} != ({n}, {n})")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("kernel entries must be finite")
        if np.min(matrix, initial=0.0) < 0.0:
            raise ValueError("kernel entries must be nonnegative")
        rowsums = matrix.sum(axis=1)
        if np.max(np.abs(rowsums - 1.0), initial=0.0) > ROW_TOL:
            worst = int(np.argmax(np.abs(rowsums - 1.0)))
            raise ValueError(f"row {worst} sums to {rowsums[worst]!r}, not 1")
        self.space = space
        self.matrix = matrix
        self.matrix.setflags(write=False)

    def row(self, i: int) -> DiscreteDistribution:
        return DiscreteDistribution(self.space, self.matrix[i])

    def apply_to_function(self, values) -> np.ndarray:
        """(P f)(x) = sum_y P(x, y) f(y)."""
        return self.matrix @ np.asarray(values, dtype=float)

    def push(self, p: DiscreteDistribution) -> DiscreteDistribution:
        """One step of the chain started from p."""
        if not p.space.same_points(self.space):
            raise SpaceMismatchError("distribution and kernel disagree on points")
        return DiscreteDistribution(self.space, p.weights @ self.matrix)

    def __repr__(self) -> str:
        return f"FiniteKernel(n={self.space.size})"


def compose(P: FiniteKernel, Q: FiniteKernel) -> FiniteKernel:
    """The kernel of 'one step of P then one step of Q'."""
    if not P.space.same_points(Q.space):
        raise SpaceMismatchError("kernels live on different point sets")
    return FiniteKernel(P.space, P.matrix @ Q.matrix)


def evolve(p0: DiscreteDistribution, P: FiniteKernel, n: int) -> DiscreteDistribution:
    """Distribution of the chain after n steps from p0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    w = p0.weights
    if not p0.space.same_points(P.space):
        raise SpaceMismatchError("distribution and kernel disagree on points")
    for _ in range(n):
        w = w @ P.matrix
    return DiscreteDistribution(P.space, w)


def trajectory(p0: DiscreteDistribution, P: FiniteKernel, n: int) -> list[DiscreteDistribution]:
    """[p0, p0 P, ..., p0 P^n]."""
    out = [p0]
    for _ in range(n):
        out.append(P.push(out[-1]))
    return out


def stationary_distribution(P: FiniteKernel) -> DiscreteDistribution:
    """The unique pi with pi P = pi.

    Uniqueness is certified first: the eigenvalue-1 space of the
    transpose must be one-dimensional (reducible chains, e.g. the
    identity kernel, are rejected).  The solve itself is least squares
    on the stationarity equations plus normalization, with the residual
    checked to STATIONARY_RESIDUAL_TOL.
    """
    n = P.space.size
    eigvals = np.linalg.eigvals(P.matrix.T)
    n_one = int(np.sum(np.abs(eigvals - 1.0) < _EIG_ONE_TOL))
    if n_one != 1:
        raise NonUniqueStationaryError(
            f"eigenvalue-1 space has dimension {n_one}; stationary distribution "
            "is not unique (chain reducible or nearly so)"
        )
    A = np.vstack([P.matrix.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    if np.min(pi) < -1e-10:
        raise NonUniqueStationaryError("stationary solve produced negative mass")
    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()
    residual = float(np.abs(pi @ P.matrix - pi).sum())
    if residual > STATIONARY_RESIDUAL_TOL:
        raise NonUniqueStationaryError(
            f"stationarity residual {residual:.3e} exceeds {STATIONARY_RESIDUAL_TOL:.0e}"
        )
    return DiscreteDistribution(P.space, pi)


def _w1_rows(wa: np.ndarray, wb: np.ndarray, dist: np.ndarray) -> float:
    """Exact W1 between two weight vectors under a metric matrix (hot path)."""
    if np.array_equal(wa, wb):
        return 0.0
    ia = np.flatnonzero(wa > 0.0)
    ib = np.flatnonzero(wb > 0.0)
    a = wa[ia]
    b = wb[ib]
    b = b * (a.sum() / b.sum())
    value, _, _, _ = _transport.solve(a, b, dist[np.ix_(ia, ib)])
    return value


def tau(P: FiniteKernel, metric: FiniteMetricSpace) -> float:
    """Generalized ergodicity coefficient under a metric: worst pairwise
    transport distance between rows relative to the points' distance."""
    if not P.space.same_points(metric):
        raise SpaceMismatchError("metric does not match the kernel's points")
    n = metric.size
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            w = _w1_rows(P.matrix[i], P.matrix[j], metric.dist) / metric.dist[i, j]
            if w > worst:
                worst = w
    return worst


def tau_v(P: FiniteKernel, V: WeightFunction) -> float:
    """tau under d_V, via the closed form max_{x!=y} ||P(x,.) - P(y,.)||_V / (V(x)+V(y))."""
    if not P.space.same_points(V.space):
        raise SpaceMismatchError("weight function does not match the kernel's points")
    M = P.matrix
    vals = V.values
    num = np.abs(M[:, None, :] - M[None, :, :]) @ vals
    den = vals[:, None] + vals[None, :]
    ratio = num / den
    np.fill_diagonal(ratio, 0.0)
    return float(ratio.max(initial=0.0))


@dataclass(frozen=True)
class ErgodicityEstimate:
    """Certificate tau(P^n) <= C rho^n, valid for all n by submultiplicativity."""

    C: float
    rho: float
    m: int
    metric_tag: str  # 'base' | 'd_V' | 'trivial'
    n_checked: int

    def __post_init__(self):
        if not (0.0 <= self.rho < 1.0):
            raise ValueError("rho must lie in [0, 1)")
        if self.C < 1.0 - 1e-12:
            raise ValueError("C must be >= 1 (tau of the identity is 1)")


@dataclass(frozen=True)
class DriftEstimate:
    """Certificate (P V)(x) <= delta V(x) + L at every point."""

    V: WeightFunction
    delta: float
    L: float

    def __post_init__(self):
        if not (0.0 <= self.delta < 1.0):
            raise ValueError("delta must lie in [0, 1)")
        if self.L <= 0.0:
            raise ValueError("L must be positive")


@dataclass(frozen=True)
class DriftCheck:
    ok: bool
    worst_slack: float
    worst_index: int  # lowest index attaining the worst slack


def verify_drift(P: FiniteKernel, est: DriftEstimate) -> DriftCheck:
    """Check (P V)(x) - delta V(x) - L <= 0 pointwise."""
    if not P.space.same_points(est.V.space):
        raise SpaceMismatchError("weight function does not match the kernel's points")
    slack = P.apply_to_function(est.V.values) - est.delta * est.V.values - est.L
    worst = int(np.argmax(slack))  # argmax returns the first (lowest) index
    return DriftCheck(ok=bool(slack[worst] <= DRIFT_SLACK_TOL),
                      worst_slack=float(slack[worst]), worst_index=worst)


def fit_drift_L(P: FiniteKernel, V: WeightFunction, delta: float) -> float:
    """Smallest positive L making the drift condition hold at every point."""
    if not (0.0 <= delta < 1.0):
        raise ValueError("delta must lie in [0, 1)")
    if not P.space.same_points(V.space):
        raise SpaceMismatchError("weight function does not match the kernel's points")
    gap = P.apply_to_function(V.values) - delta * V.values
    return max(1e-12, float(gap.max()))


def fit_geometric_constants(P: FiniteKernel,
                            metric: Union[FiniteMetricSpace, WeightFunction],
                            m: int = 8, n_check: int = 16) -> ErgodicityEstimate:
    """Fit (C, rho) with tau(P^n) <= C rho^n for all n >= 0.

    rho is read off the m-step coefficient, rho = tau(P^m)^(1/m), and
    C = max_{0 <= j < m} tau(P^j) / rho^j.  Submultiplicativity then
    extends the bound to every n; the first n_check powers are verified
    numerically anyway.  ``metric`` may be a FiniteMetricSpace (transport
    route) or a WeightFunction (d_V closed form).

    Raises NoContractionError when tau(P^m) >= 1.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if n_check < m:
        raise ValueError("n_check must be >= m")
    if isinstance(metric, WeightFunction):
        tag = "trivial" if np.all(metric.values == 1.0) else "d_V"
        coeff = lambda K: tau_v(K, metric)
    else:
        tag = "base"
        coeff = lambda K: tau(K, metric)
    taus = [1.0]
    power = np.eye(P.space.size)
    for _ in range(n_check):
        power = power @ P.matrix
        taus.append(coeff(FiniteKernel(P.space, power / power.sum(axis=1, keepdims=True))))
    if taus[m] >= 1.0:
        raise NoContractionError(
            f"tau(P^{m}) = {taus[m]:.6f} >= 1; no contraction at horizon m={m}"
        )
    rho = taus[m] ** (1.0 / m)
    if rho == 0.0:
        if any(t > 0.0 for t in taus[1:m]):
            raise NoContractionError(
                "tau vanishes at horizon m but not at smaller powers; decrease m"
            )
        C = 1.0
    else:
        C = max(taus[j] / rho ** j for j in range(m))
    C = max(C, 1.0)
    for n in range(n_check + 1):
        if taus[n] > C * rho ** n * (1.0 + 1e-9) + 1e-12:
            raise NoContractionError(
                f"certificate tau(P^n) <= C rho^n fails at n={n} "
                f"({taus[n]:.3e} > {C * rho ** n:.3e})"
            )
    return ErgodicityEstimate(C=float(C), rho=float(rho), m=m,
                              metric_tag=tag, n_checked=n_check)


def kernel_gamma_wasserstein(P: FiniteKernel, Pt: FiniteKernel,
                             metric: FiniteMetricSpace,
                             Vt: WeightFunction | None = None) -> float:
    """One-step perturbation size sup_x W(P(x,.), Pt(x,.)) / Vt(x)."""
    if not P.space.same_points(Pt.space):
        raise SpaceMismatchError("kernels live on different point sets")
    if not P.space.same_points(metric):
        raise SpaceMismatchError("metric does not match the kernels' points")
    vt = np.ones(P.space.size) if Vt is None else Vt.values
    worst = 0.0
    for i in range(P.space.size):
        w = _w1_rows(P.matrix[i], Pt.matrix[i], metric.dist) / vt[i]
        if w > worst:
            worst = w
    return worst


def kernel_gamma_tv(P: FiniteKernel, Pt: FiniteKernel,
                    Vt: WeightFunction | None = None) -> float:
    """One-step perturbation size in total variation, sup_x ||P(x,.) - Pt(x,.)||_tv / Vt(x)."""
    if not P.space.same_points(Pt.space):
        raise SpaceMismatchError("kernels live on different point sets")
    vt = np.ones(P.space.size) if Vt is None else Vt.values
    tv = np.abs(P.matrix - Pt.matrix).sum(axis=1)
    return float(np.max(tv / vt))


def kernel_gamma_vnorm(P: FiniteKernel, Pt: FiniteKernel, V: WeightFunction,
                       Vt: WeightFunction | None = None) -> float:
    """One-step perturbation size sup_x ||P(x,.) - Pt(x,.)||_V / Vt(x).

    With Vt = V this is the quantity entering the single-weight geometric
    corollary; by d_V duality it equals kernel_gamma_wasserstein under
    dv_metric(V).
    """
    if not P.space.same_points(Pt.space):
        raise SpaceMismatchError("kernels live on different point sets")
    if not P.space.same_points(V.space):
        raise SpaceMismatchError("weight function does not match the kernels' points")
    vt = np.ones(P.space.size) if Vt is None else Vt.values
    num = np.abs(P.matrix - Pt.matrix) @ V.values
    return float(np.max(num / vt))
