"""Finite metric spaces, distributions, and exact Wasserstein-1 distances.

Everything here is exact in the linear-programming sense: Wasserstein
distances come from a certified min-cost transport solve, total variation
and weighted-norm distances from closed forms.  The weighted norm
``sum_x V(x) |mu(x) - nu(x)|`` coincides with the Wasserstein distance
under the metric ``d_V(x, y) = (V(x) + V(y)) 1{x != y}``, which is how the
two routes cross-check each other in the test suite.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from . import _transport
from .errors import SpaceMismatchError

MASS_TOL = 1e-12
METRIC_TOL = 1e-12


class FiniteMetricSpace:
    """A finite point set together with a validated metric matrix.

    Args:
        points: hashable labels, one per state.
        dist: (n, n) array; must be symmetric, zero-diagonal, positive
            off the diagonal and satisfy the triangle inequality (all up
            to ``METRIC_TOL``).
    """

    def __init__(self, points: Sequence, dist) -> None:
        points = list(points)
        n = len(points)
        dist = np.array(dist, dtype=float)
        if dist.shape != (n, n):
            raise ValueError(f"distance matrix shape {dist.shape} != ({n}, {n})")
        if not np.all(np.isfinite(dist)):
            raise ValueError("distances must be finite")
        if n and np.max(np.abs(np.diagonal(dist))) > METRIC_TOL:
            raise ValueError("metric diagonal must be zero")
        if np.max(np.abs(dist - dist.T), initial=0.0) > METRIC_TOL:
            raise ValueError("metric must be symmetric")
        if n > 1:
            off = dist[~np.eye(n, dtype=bool)]
            if np.min(off) <= 0.0:
                raise ValueError("off-diagonal distances must be positive")
        # triangle inequality, checked one intermediate point at a time to
        # avoid materialising an (n, n, n) tensor
        for j in range(n):
            slack = dist - (dist[:, j][:, None] + dist[j, :][None, :])
            if np.max(slack) > METRIC_TOL:
                raise ValueError("triangle inequality fails")
        self.points = points
        self.dist = dist
        self.dist.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={len(self.points)})"

    def same_points(self, other: "FiniteMetricSpace") -> bool:
        return self is other or self.points == other.points


def trivial_metric(points: Sequence) -> FiniteMetricSpace:
    """The metric d(x, y) = 2 for x != y, under which W1 equals total variation."""
    n = len(list(points))
    return FiniteMetricSpace(points, 2.0 * (1.0 - np.eye(n)))


def line_metric(xs: Sequence[float], points: Optional[Sequence] = None) -> FiniteMetricSpace:
    """Distinct real locations with |x - y| as the metric; labels default to the xs."""
    xs = np.asarray(xs, dtype=float)
    dist = np.abs(xs[:, None] - xs[None, :])
    return FiniteMetricSpace(list(xs) if points is None else points, dist)


class WeightFunction:
    """Pointwise weights V >= 1 on a finite space."""

    def __init__(self, space: FiniteMetricSpace, values) -> None:
        values = np.array(values, dtype=float)
        if values.shape != (space.size,):
            raise ValueError("one weight per point required")
        if not np.all(np.isfinite(values)):
            raise ValueError("weights must be finite")
        if np.min(values, initial=np.inf) < 1.0 - 1e-12:
            raise ValueError("weight functions must satisfy V >= 1")
        self.space = space
        self.values = values
        self.values.setflags(write=False)

    @classmethod
    def ones(cls, space: FiniteMetricSpace) -> "WeightFunction":
        return cls(space, np.ones(space.size))

    def __repr__(self) -> str:
        return f"WeightFunction(min={self.values.min():.3g}, max={self.values.max():.3g})"


def dv_metric(V: WeightFunction) -> FiniteMetricSpace:
    """The metric (V(x) + V(y)) 1{x != y} induced by a weight function."""
    vals = V.values
    dist = vals[:, None] + vals[None, :]
    np.fill_diagonal(dist, 0.0)
    return FiniteMetricSpace(V.space.points, dist)


class DiscreteDistribution:
    """Probability weights on a finite space (normalized within MASS_TOL)."""

    def __init__(self, space: FiniteMetricSpace, weights) -> None:
        w = np.array(weights, dtype=float)
        if w.shape != (space.size,):
            raise ValueError("one weight per point required")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.min(w, initial=0.0) < 0.0:
            raise ValueError("weights must be nonnegative")
        if abs(float(w.sum()) - 1.0) > MASS_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        self.space = space
        self.weights = w
        self.weights.setflags(write=False)

    def expectation(self, values) -> float:
        """Mean of a pointwise function, e.g. p(V) for a weight function."""
        values = np.asarray(values, dtype=float)
        return float(self.weights @ values)

    def __repr__(self) -> str:
        return f"DiscreteDistribution(n={self.space.size})"


def point_mass(space: FiniteMetricSpace, index: int) -> DiscreteDistribution:
    w = np.zeros(space.size)
    w[index] = 1.0
    return DiscreteDistribution(space, w)


class Coupling:
    """A joint distribution on space x space, stored as a dense matrix."""

    def __init__(self, space: FiniteMetricSpace, joint) -> None:
        joint = np.array(joint, dtype=float)
        n = space.size
        if joint.shape != (n, n):
            raise ValueError("coupling must be square on the space")
        if np.min(joint, initial=0.0) < -1e-15:
            raise ValueError("coupling entries must be nonnegative")
        if abs(float(joint.sum()) - 1.0) > MASS_TOL:
            raise ValueError("coupling mass must be 1")
        self.space = space
        self.joint = joint
        self.joint.setflags(write=False)

    def marginals(self) -> tuple[np.ndarray, np.ndarray]:
        return self.joint.sum(axis=1), self.joint.sum(axis=0)

    def cost(self) -> float:
        """Transport cost of this coupling under the space's own metric."""
        return float(np.sum(self.joint * self.space.dist))


def _require_same_points(mu: DiscreteDistribution, nu: DiscreteDistribution,
                         space: Optional[FiniteMetricSpace] = None) -> None:
    if not mu.space.same_points(nu.space):
        raise SpaceMismatchError("distributions live on different point sets")
    if space is not None and not mu.space.same_points(space):
        raise SpaceMismatchError("metric space does not match the distributions")


def wasserstein1_exact(mu: DiscreteDistribution, nu: DiscreteDistribution,
                       space: Optional[FiniteMetricSpace] = None,
                       ) -> tuple[float, Coupling]:
    """Exact Wasserstein-1 distance and an optimal coupling.

    ``space`` defaults to ``mu.space``; passing a different space with the
    same point set evaluates the distance under that metric instead (used
    for d_V and trivial-metric comparisons).  Zero-weight points are
    pruned before the solve; the returned plan is re-embedded full size.
    """
    if space is None:
        space = mu.space
    _require_same_points(mu, nu, space)
    n = space.size
    if np.array_equal(mu.weights, nu.weights):
        return 0.0, Coupling(space, np.diag(mu.weights))
    ia = np.flatnonzero(mu.weights > 0.0)
    ib = np.flatnonzero(nu.weights > 0.0)
    a = mu.weights[ia]
    b = nu.weights[ib]
    b = b * (a.sum() / b.sum())  # balance to float precision
    cost = space.dist[np.ix_(ia, ib)]
    value, plan, _, _ = _transport.solve(a, b, cost)
    full = np.zeros((n, n))
    full[np.ix_(ia, ib)] = plan
    return value, Coupling(space, full)


def total_variation(mu: DiscreteDistribution, nu: DiscreteDistribution) -> float:
    """sum_x |mu(x) - nu(x)|; disjoint supports give 2.

    Equals ``wasserstein1_exact`` under the trivial metric.
    """
    _require_same_points(mu, nu)
    return float(np.abs(mu.weights - nu.weights).sum())


def vnorm_distance(mu: DiscreteDistribution, nu: DiscreteDistribution,
                   V: WeightFunction) -> float:
    """sum_x V(x) |mu(x) - nu(x)|, the V-weighted norm of mu - nu.

    Equals ``wasserstein1_exact`` under ``dv_metric(V)``; the extremal
    dual function is f = sign(mu - nu) * V.
    """
    _require_same_points(mu, nu)
    if not V.space.same_points(mu.space):
        raise SpaceMismatchError("weight function lives on a different point set")
    return float(V.values @ np.abs(mu.weights - nu.weights))


def empirical_w1_1d(xs, ys) -> float:
    """W1 between two equal-size empirical measures on the real line.

    Both samples must be sorted ascending; the optimal matching then
    pairs order statistics, so the distance is mean |x_(i) - y_(i)|.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or ys.ndim != 1:
        raise ValueError("samples must be one-dimensional")
    if xs.size == 0:
        raise ValueError("samples must be nonempty")
    if xs.size != ys.size:
        raise ValueError(f"sample sizes differ: {xs.size} vs {ys.size}")
    if np.any(np.diff(xs) < 0) or np.any(np.diff(ys) < 0):
        raise ValueError("samples must be sorted ascending")
    return float(np.mean(np.abs(xs - ys)))
