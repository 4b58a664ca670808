"""Metropolis-Hastings with perturbed acceptance probabilities.

Exact and approximate steppers on the real line, finite-space kernel
builders with exact detailed balance, and the constants (gamma, delta_V,
lambda) feeding the acceptance-perturbation bounds.  The central estimate
is that one step of two MH chains sharing a proposal kernel Q but using
acceptance probabilities alpha and alpha~ satisfies

    W(delta_x P_alpha, delta_x P_alpha~)
        <= integral of d(x,y) |alpha - alpha~|(x,y) Q(x,dy),

so every bound below is driven by the acceptance gap E(x,y), never by the
kernels themselves.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate

from ._rng import philox
from .bounds import PerturbationReport, _pow
from .errors import ConfigError, HypothesisViolation
from .kernels import ROW_TOL, FiniteKernel
from .otcore import FiniteMetricSpace, WeightFunction, empirical_w1_1d

# quadrature error estimates above this are treated as failures
_QUAD_ERR_CAP = 1e-6
# lambda integrals above this are reported as divergent
_LAMBDA_CAP = 1e12


# --------------------------------------------------------------------------
# problems


@dataclass(frozen=True)
class Proposal:
    """Proposal kernel Q(x, .) on the line: sampler plus optional density.

    ``support`` maps x to a compact interval carrying all of Q(x, .);
    the quadrature-based constants require it and fail without it.
    """

    sampler: Callable[[np.random.Generator, float], float]
    density: Optional[Callable[[float, float], float]] = None
    support: Optional[Callable[[float], Tuple[float, float]]] = None

    @classmethod
    def uniform_window(cls, half_width: float) -> "Proposal":
        if not half_width > 0:
            raise ValueError("half_width must be positive")
        h = float(half_width)
        return cls(
            sampler=lambda rng, x: x + h * (2.0 * rng.random() - 1.0),
            density=lambda x, y: 0.5 / h if abs(y - x) <= h else 0.0,
            support=lambda x: (x - h, x + h))


@dataclass(frozen=True)
class MhProblem:
    """MH target on the line, given through log r(x,y) = log pi(y)q(y,x)/pi(x)q(x,y).

    ``log_target_ratio`` may return -inf (proposal outside the support).
    """

    log_target_ratio: Callable[[float, float], float]
    proposal: Proposal

    def acceptance(self, x: float, y: float) -> float:
        lr = self.log_target_ratio(x, y)
        if lr >= 0.0:
            return 1.0
        return math.exp(lr)

    @classmethod
    def exponential_target(cls, half_width: float = 1.0) -> "MhProblem":
        """Density exp(-x) on [0, inf) with a symmetric uniform window."""
        def log_ratio(x: float, y: float) -> float:
            if y < 0.0:
                return -math.inf
            return x - y

        return cls(log_ratio, Proposal.uniform_window(half_width))

    @classmethod
    def gaussian_target(cls, half_width: float = 1.0,
                        sd: float = 1.0) -> "MhProblem":
        """Standard-normal-shaped density with a symmetric uniform window."""
        if not sd > 0:
            raise ValueError("sd must be positive")
        inv2 = 1.0 / (2.0 * sd * sd)
        return cls(lambda x, y: (x * x - y * y) * inv2,
                   Proposal.uniform_window(half_width))


@dataclass(frozen=True)
class FiniteMhProblem:
    """MH on a finite space: target pmf, proposal matrix and a metric.

    Perturbation predicates and ratio samplers receive state *indices*
    here, not points.
    """

    pi: np.ndarray
    Q: np.ndarray
    space: FiniteMetricSpace

    def __post_init__(self):
        pi = np.ascontiguousarray(np.asarray(self.pi, dtype=np.float64))
        Q = np.ascontiguousarray(np.asarray(self.Q, dtype=np.float64))
        if pi.ndim != 1 or Q.shape != (pi.size, pi.size):
            raise ValueError("pi must be a vector and Q a matching square matrix")
        if np.any(pi <= 0) or abs(pi.sum() - 1.0) > ROW_TOL:
            raise ValueError("pi must be a strictly positive pmf")
        if np.any(Q < 0) or np.max(np.abs(Q.sum(axis=1) - 1.0)) > ROW_TOL:
            raise ValueError("Q rows must be probability vectors")
        if self.space.size != pi.size:
            raise ValueError("metric space size does not match pi")
        pi.flags.writeable = False
        Q.flags.writeable = False
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "Q", Q)

    @property
    def n(self) -> int:
        return self.pi.size

    def acceptance(self) -> np.ndarray:
        return finite_mh_acceptance(self.pi, self.Q)

    def perturbed_acceptance(self, perturbation: "AcceptancePerturbation") -> np.ndarray:
        alpha = self.acceptance()
        out = np.empty_like(alpha)
        for i in range(self.n):
            for j in range(self.n):
                out[i, j] = perturbation.alpha_tilde(alpha[i, j], i, j)
        return out

    def kernel(self, alpha: Optional[np.ndarray] = None) -> FiniteKernel:
        if alpha is None:
            alpha = self.acceptance()
        return finite_mh_kernel(self.space, self.Q, alpha)


def finite_mh_acceptance(pi: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """alpha[i,j] = min{1, pi_j Q_ji / (pi_i Q_ij)}, zero where pi_i Q_ij = 0.

    Computed through the symmetric flux min(A, A^T) with A = diag(pi) Q, so
    the resulting kernel satisfies detailed balance to rounding error.
    """
    pi = np.asarray(pi, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    A = pi[:, None] * Q
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = np.where(A > 0.0, np.minimum(A, A.T) / A, 0.0)
    return alpha


def finite_mh_kernel(space: FiniteMetricSpace, Q: np.ndarray,
                     alpha: np.ndarray) -> FiniteKernel:
    """P(x,y) = Q(x,y) alpha(x,y) off the diagonal; rejection mass stays put."""
    Q = np.asarray(Q, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    if np.any(alpha < -1e-15) or np.any(alpha > 1.0 + 1e-15):
        raise ValueError("acceptance probabilities must lie in [0, 1]")
    P = Q * np.clip(alpha, 0.0, 1.0)
    np.fill_diagonal(P, 0.0)
    np.fill_diagonal(P, 1.0 - P.sum(axis=1))
    return FiniteKernel(space, P)


# --------------------------------------------------------------------------
# acceptance perturbations


def _clipped_uniform_mean(alpha: float, s: float) -> float:
    """E[clip(alpha + U, 0, 1)] for U ~ Unif[-s, s]."""
    if s == 0.0:
        return alpha

    def anti(t: float) -> float:
        # antiderivative of clip(., 0, 1)
        if t <= 0.0:
            return 0.0
        if t <= 1.0:
            return 0.5 * t * t
        return t - 0.5

    return (anti(alpha + s) - anti(alpha - s)) / (2.0 * s)


@dataclass(frozen=True)
class AcceptancePerturbation:
    """How the perturbed chain's acceptance differs from alpha.

    Modes:
      none             alpha~ = alpha
      uniform-noise    threshold clip(alpha + U, 0, 1), |U| <= s
      randomized-ratio threshold min{1, R} with R ~ ratio_sampler(rng, x, y, u);
                       constants need the mean acceptance alpha_tilde_fn
      indicator-set    alpha~ = min{1, alpha + 1_{in_set}(x)}
    """

    mode: str
    s: float = 0.0
    in_set: Optional[Callable] = None
    ratio_sampler: Optional[Callable] = None
    alpha_tilde_fn: Optional[Callable] = None

    _MODES = ("none", "uniform-noise", "randomized-ratio", "indicator-set")

    def __post_init__(self):
        if self.mode not in self._MODES:
            raise ConfigError(f"unknown perturbation mode {self.mode!r}")
        if self.s < 0:
            raise ValueError("s must be non-negative")

    @classmethod
    def none(cls) -> "AcceptancePerturbation":
        return cls("none")

    @classmethod
    def uniform_noise(cls, s: float) -> "AcceptancePerturbation":
        return cls("uniform-noise", s=s)

    @classmethod
    def randomized_ratio(cls, sampler: Callable,
                         alpha_tilde: Optional[Callable] = None
                         ) -> "AcceptancePerturbation":
        return cls("randomized-ratio", ratio_sampler=sampler,
                   alpha_tilde_fn=alpha_tilde)

    @classmethod
    def indicator_set(cls, predicate: Callable) -> "AcceptancePerturbation":
        return cls("indicator-set", in_set=predicate)

    def alpha_tilde(self, alpha: float, x, y) -> float:
        """Mean perturbed acceptance probability at (x, y)."""
        if self.mode == "none":
            return alpha
        if self.mode == "uniform-noise":
            return _clipped_uniform_mean(alpha, self.s)
        if self.mode == "indicator-set":
            return min(1.0, alpha + (1.0 if self.in_set(x) else 0.0))
        if self.alpha_tilde_fn is None:
            raise ConfigError(
                "randomized-ratio constants need an alpha_tilde function")
        return float(self.alpha_tilde_fn(x, y))

    def eps(self, alpha: float, x, y) -> float:
        """E(x,y) = |alpha - alpha~|(x,y)."""
        return abs(self.alpha_tilde(alpha, x, y) - alpha)

    def realized_threshold(self, alpha: float, x, y, u: float,
                           rng: np.random.Generator) -> float:
        """The acceptance threshold one perturbed step actually uses."""
        if self.mode == "none":
            return alpha
        if self.mode == "uniform-noise":
            if self.s == 0.0:
                return alpha  # draw nothing: keeps streams aligned with mh_step
            return min(1.0, max(0.0, alpha + rng.uniform(-self.s, self.s)))
        if self.mode == "indicator-set":
            return min(1.0, alpha + (1.0 if self.in_set(x) else 0.0))
        r = float(self.ratio_sampler(rng, x, y, u))
        if r < 0.0:
            raise ValueError("ratio sampler returned a negative value")
        return min(1.0, r)


# --------------------------------------------------------------------------
# steppers


def mh_step(problem: MhProblem, x: float, rng: np.random.Generator) -> float:
    y = problem.proposal.sampler(rng, x)
    u = rng.random()
    return y if u < problem.acceptance(x, y) else x


def approx_mh_step(problem: MhProblem, perturbation: AcceptancePerturbation,
                   x: float, rng: np.random.Generator) -> float:
    y = problem.proposal.sampler(rng, x)
    u = rng.random()
    thr = perturbation.realized_threshold(problem.acceptance(x, y), x, y, u, rng)
    if not 0.0 <= thr <= 1.0:
        raise RuntimeError(f"acceptance threshold {thr} outside [0, 1]")
    return y if u < thr else x


# --------------------------------------------------------------------------
# constants: gamma, delta_V, lambda


def _quad(f, lo: float, hi: float, tol: float, kinks=()) -> float:
    pts = sorted(p for p in kinks if lo < p < hi)
    val, err = integrate.quad(f, lo, hi, epsabs=tol, limit=200,
                              points=pts or None)
    # error cap scales with the value so huge-but-converged integrals
    # (the divergence guard's food) are not misreported as quad failures
    if err > max(10.0 * tol, _QUAD_ERR_CAP) * max(1.0, abs(val)):
        raise RuntimeError(
            f"quadrature error estimate {err:.3e} too large on [{lo}, {hi}]")
    return val


def _line_support(problem: MhProblem, x: float) -> Tuple[float, float]:
    prop = problem.proposal
    if prop.density is None or prop.support is None:
        raise HypothesisViolation(
            "quadrature constants need a proposal density with compact support")
    lo, hi = prop.support(x)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise HypothesisViolation("proposal support must be a bounded interval")
    return lo, hi


def _weight_values(V, problem: FiniteMhProblem) -> np.ndarray:
    if V is None:
        return np.ones(problem.n)
    if isinstance(V, WeightFunction):
        return V.values
    return np.asarray(V, dtype=np.float64)


def _finite_eps(problem: FiniteMhProblem,
                perturbation: AcceptancePerturbation) -> np.ndarray:
    alpha = problem.acceptance()
    return np.abs(problem.perturbed_acceptance(perturbation) - alpha)


def gamma_from_acceptance(problem, perturbation: AcceptancePerturbation,
                          Vt=None, x_grid=None,
                          quad_tol: float = 1e-8) -> float:
    """sup_x of [integral d(x,y) E(x,y) Q(x,dy)] / Vt(x).

    Exact sums on a FiniteMhProblem (its metric space supplies d; x_grid is
    ignored).  On the line d(x,y) = |x - y| and the sup runs over x_grid,
    so the result is a lower bound of the true sup there.
    """
    if isinstance(problem, FiniteMhProblem):
        E = _finite_eps(problem, perturbation)
        v = _weight_values(Vt, problem)
        per_x = (problem.space.dist * E * problem.Q).sum(axis=1) / v
        return float(per_x.max())

    if x_grid is None or len(x_grid) == 0:
        raise ConfigError("line gamma needs a non-empty x_grid")
    vt = Vt if Vt is not None else (lambda x: 1.0)
    best = 0.0
    for x in x_grid:
        x = float(x)
        lo, hi = _line_support(problem, x)
        q = problem.proposal.density

        def integrand(y: float) -> float:
            a = problem.acceptance(x, y)
            return abs(y - x) * perturbation.eps(a, x, y) * q(x, y)

        val = _quad(integrand, lo, hi, quad_tol, kinks=(x,))
        best = max(best, val / float(vt(x)))
    return best


def delta_v_transfer(problem, perturbation: AcceptancePerturbation,
                     V=None, x_grid=None, quad_tol: float = 1e-8) -> float:
    """sup_z of integral (V(y)/V(z) + 1) E(z,y) Q(z,dy).

    Transfers a Lyapunov pair (delta, L) of the exact chain to the
    perturbed one: P~V <= (delta + delta_V) V + L, usable when
    delta + delta_V < 1.
    """
    if isinstance(problem, FiniteMhProblem):
        E = _finite_eps(problem, perturbation)
        v = _weight_values(V, problem)
        ratio = v[None, :] / v[:, None] + 1.0
        return float((ratio * E * problem.Q).sum(axis=1).max())

    if x_grid is None or len(x_grid) == 0:
        raise ConfigError("line delta_V needs a non-empty x_grid")
    vf = V if V is not None else (lambda x: 1.0)
    best = 0.0
    for z in x_grid:
        z = float(z)
        lo, hi = _line_support(problem, z)
        q = problem.proposal.density
        vz = float(vf(z))

        def integrand(y: float) -> float:
            a = problem.acceptance(z, y)
            return (float(vf(y)) / vz + 1.0) * perturbation.eps(a, z, y) * q(z, y)

        best = max(best, _quad(integrand, lo, hi, quad_tol, kinks=(z,)))
    return best


def lambda_constant(problem, V=None, x_grid=None,
                    quad_tol: float = 1e-8) -> float:
    """1 + sup_x of integral V(y)/V(x) Q(x,dy); invariant to scaling V."""
    if isinstance(problem, FiniteMhProblem):
        v = _weight_values(V, problem)
        val = float(((v[None, :] / v[:, None]) * problem.Q).sum(axis=1).max())
    else:
        if x_grid is None or len(x_grid) == 0:
            raise ConfigError("line lambda needs a non-empty x_grid")
        vf = V if V is not None else (lambda x: 1.0)
        val = 0.0
        for x in x_grid:
            x = float(x)
            lo, hi = _line_support(problem, x)
            q = problem.proposal.density
            vx = float(vf(x))
            val = max(val, _quad(
                lambda y: float(vf(y)) / vx * q(x, y), lo, hi, quad_tol))
    if not val < _LAMBDA_CAP:
        raise HypothesisViolation("lambda integral appears divergent")
    return 1.0 + val


# --------------------------------------------------------------------------
# bounds


def metro_geom_bound(C: float, rho: float, n, s: float, lam: float,
                     delta: float, L: float, p0_V: float) -> float:
    """V-norm gap of exact vs perturbed MH after n steps, |alpha-alpha~| <= s.

    Requires s < (1 - delta)/lam; kappa = max{p0_V, L/(1-delta-lam s)}.
    """
    if not C > 0:
        raise ValueError("C must be positive")
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    if not 0.0 <= delta < 1.0:
        raise ValueError("delta must lie in [0, 1)")
    if not L > 0:
        raise ValueError("L must be positive")
    if not lam >= 1.0:
        raise ValueError("lam must be at least 1")
    if not p0_V >= 1.0 - 1e-12:
        raise ValueError("p0_V must be at least 1")
    if s < 0:
        raise ValueError("s must be non-negative")
    if s == 0.0:
        return 0.0
    if s >= (1.0 - delta) / lam:
        raise HypothesisViolation(
            f"need s < (1 - delta)/lam = {(1.0 - delta) / lam:.6g}, got {s:.6g}")
    kap = max(p0_V, L / (1.0 - delta - lam * s))
    return lam * s * kap * C * (1.0 - _pow(rho, n)) / (1.0 - rho)


def independent_mh_perturbation_bound(C: float, rho: float, mu_Gt: float,
                                      D_Gt: float) -> float:
    """Limit bound for an independence sampler accepting blindly on a set.

    The proposal is a fixed measure mu; the perturbed chain accepts every
    proposal launched from the set; mu_Gt is the set's mu-mass and D_Gt the
    sup over the set of the mean distance to a mu-draw.
    """
    if not C > 0:
        raise ValueError("C must be positive")
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    if not 0.0 <= mu_Gt <= 1.0:
        raise ValueError("mu_Gt must lie in [0, 1]")
    if not (D_Gt >= 0 and math.isfinite(D_Gt)):
        raise ValueError("D_Gt must be finite and non-negative")
    return C * mu_Gt * D_Gt / (1.0 - rho)


# --------------------------------------------------------------------------
# end-to-end report


@dataclass(frozen=True)
class MetroGeomConstants:
    """User-certified inputs to metro_geom_bound plus the start point."""

    C: float
    rho: float
    delta: float
    L: float
    lam: float
    s: float
    p0_V: float = 1.0
    x0: float = 0.0

    def __post_init__(self):
        # range checks live in metro_geom_bound; fail early on the ones
        # that would otherwise surface mid-simulation
        metro_geom_bound(self.C, self.rho, 1, self.s, self.lam, self.delta,
                         self.L, self.p0_V)


def _simulate_pair(problem: MhProblem, perturbation: AcceptancePerturbation,
                   x0: float, n: int, replicas: int, seed: int):
    """Coupled paths: per (replica, step) both chains read one stream."""
    xs = np.empty((n, replicas))
    xts = np.empty((n, replicas))
    for r in range(replicas):
        x = xt = float(x0)
        for k in range(n):
            x = mh_step(problem, x, philox(seed, r, k))
            xt = approx_mh_step(problem, perturbation, xt, philox(seed, r, k))
            xs[k, r] = x
            xts[k, r] = xt
    return xs, xts


def mh_metro_geom_report(problem: MhProblem,
                         perturbation: AcceptancePerturbation,
                         constants: MetroGeomConstants, n: int,
                         samples: int, seed: int) -> PerturbationReport:
    """Empirical W1 between exact and perturbed chains against the bound.

    Plain |x - y| Wasserstein per step; whenever V(x) >= |x| the V-norm
    bound dominates it, so the comparison is sound for the usual
    exponential-type weights.  distance_se is a scale proxy for the
    empirical-W1 fluctuation (cloud spreads over sqrt(samples)).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if samples < 2:
        raise ValueError("samples must be at least 2")
    xs, xts = _simulate_pair(problem, perturbation, constants.x0, n,
                             samples, seed)
    ns = np.arange(1, n + 1)
    dists = np.empty(n)
    ses = np.empty(n)
    bounds_arr = np.empty(n)
    root = math.sqrt(samples)
    for i, step in enumerate(ns):
        dists[i] = empirical_w1_1d(np.sort(xs[i]), np.sort(xts[i]))
        ses[i] = (xs[i].std(ddof=1) + xts[i].std(ddof=1)) / root
        bounds_arr[i] = metro_geom_bound(
            constants.C, constants.rho, int(step), constants.s,
            constants.lam, constants.delta, constants.L, constants.p0_V)
    meta = {"C": constants.C, "rho": constants.rho, "delta": constants.delta,
            "L": constants.L, "lam": constants.lam, "s": constants.s,
            "p0_V": constants.p0_V, "x0": constants.x0,
            "replicas": float(samples), "seed": float(seed)}
    return PerturbationReport("metro_geom", ns, dists, bounds_arr, meta,
                              distance_se=ses)
