"""Kernel machinery against independent oracles.

Stationary distributions are cross-checked against the GTH elimination
algorithm (state reduction), which shares no code with the least-squares
route.  Ergodicity coefficients get a dual route too: the d_V closed
form versus exact transport under dv_metric.
"""
import numpy as np
import pytest

from wperturb.errors import NoContractionError, NonUniqueStationaryError
from wperturb.kernels import (
    DriftCheck,
    DriftEstimate,
    ErgodicityEstimate,
    FiniteKernel,
    compose,
    evolve,
    fit_drift_L,
    fit_geometric_constants,
    kernel_gamma_tv,
    kernel_gamma_vnorm,
    kernel_gamma_wasserstein,
    stationary_distribution,
    tau,
    tau_v,
    trajectory,
    verify_drift,
)
from wperturb.otcore import (
    DiscreteDistribution,
    WeightFunction,
    dv_metric,
    point_mass,
    trivial_metric,
    wasserstein1_exact,
)


def gth_stationary(matrix):
    """Oracle: Grassmann-Taksar-Heyman state reduction, no linear solve."""
    A = np.array(matrix, dtype=float)
    n = A.shape[0]
    for k in range(n - 1):
        s = A[k, k + 1:].sum()
        assert s > 0, "reducible chain handed to GTH oracle"
        A[k + 1:, k + 1:] += np.outer(A[k + 1:, k], A[k, k + 1:]) / s
    pi = np.zeros(n)
    pi[n - 1] = 1.0
    for k in range(n - 2, -1, -1):
        s = A[k, k + 1:].sum()
        pi[k] = (pi[k + 1:] @ A[k + 1:, k]) / s
    return pi / pi.sum()


def random_kernel(rng, n, mix=0.4):
    """Row-stochastic matrix mixed toward a common row: tau <= 1 - mix roughly."""
    raw = rng.dirichlet(np.ones(n), size=n)
    common = rng.dirichlet(np.ones(n))
    return (1.0 - mix) * raw + mix * common[None, :]


def test_kernel_validation():
    sp = trivial_metric(range(2))
    with pytest.raises(ValueError, match="sums to"):
        FiniteKernel(sp, [[0.5, 0.4], [0.5, 0.5]])
    with pytest.raises(ValueError, match="nonnegative"):
        FiniteKernel(sp, [[1.1, -0.1], [0.5, 0.5]])
    with pytest.raises(ValueError, match="shape"):
        FiniteKernel(sp, [[1.0, 0.0]])


def test_compose_matches_matrix_product_and_stays_stochastic():
    rng = np.random.default_rng(0)
    sp = trivial_metric(range(3))
    P = FiniteKernel(sp, random_kernel(rng, 3))
    Q = FiniteKernel(sp, random_kernel(rng, 3))
    PQ = compose(P, Q)
    np.testing.assert_allclose(PQ.matrix, P.matrix @ Q.matrix)
    np.testing.assert_allclose(PQ.matrix.sum(axis=1), 1.0, atol=1e-12)


def test_evolve_and_trajectory():
    sp = trivial_metric(range(3))
    P = FiniteKernel(sp, np.eye(3))
    p = DiscreteDistribution(sp, [0.2, 0.3, 0.5])
    for n in range(4):
        np.testing.assert_array_equal(evolve(p, P, n).weights, p.weights)
    rng = np.random.default_rng(1)
    P = FiniteKernel(sp, random_kernel(rng, 3))
    traj = trajectory(p, P, 5)
    assert len(traj) == 6
    np.testing.assert_allclose(traj[5].weights, evolve(p, P, 5).weights, atol=1e-14)
    with pytest.raises(ValueError):
        evolve(p, P, -1)


@pytest.mark.parametrize("seed", range(20))
def test_stationary_matches_gth_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 12))
    M = random_kernel(rng, n, mix=float(rng.uniform(0.2, 0.7)))
    P = FiniteKernel(trivial_metric(range(n)), M)
    pi = stationary_distribution(P)
    np.testing.assert_allclose(pi.weights, gth_stationary(M), atol=1e-10)
    assert np.abs(pi.weights @ M - pi.weights).sum() <= 1e-10


def test_stationary_rejects_identity_and_reducible():
    sp = trivial_metric(range(3))
    with pytest.raises(NonUniqueStationaryError):
        stationary_distribution(FiniteKernel(sp, np.eye(3)))
    block = [[0.5, 0.5, 0.0], [0.5, 0.5, 0.0], [0.0, 0.0, 1.0]]
    with pytest.raises(NonUniqueStationaryError):
        stationary_distribution(FiniteKernel(sp, block))


def test_stationary_accepts_periodic_irreducible():
    sp = trivial_metric(range(2))
    P = FiniteKernel(sp, [[0.0, 1.0], [1.0, 0.0]])
    pi = stationary_distribution(P)
    np.testing.assert_allclose(pi.weights, [0.5, 0.5], atol=1e-12)


def test_tau_hand_value_two_states():
    # rows (0.7, 0.3) and (0.6, 0.4): tv = 0.2, trivial distance 2 -> 0.1
    sp = trivial_metric(range(2))
    P = FiniteKernel(sp, [[0.7, 0.3], [0.6, 0.4]])
    assert tau(P, sp) == pytest.approx(0.1, abs=1e-12)
    assert tau_v(P, WeightFunction.ones(sp)) == pytest.approx(0.1, abs=1e-12)


def test_tau_identity_is_one_and_rank_one_is_zero():
    sp = trivial_metric(range(4))
    assert tau(FiniteKernel(sp, np.eye(4)), sp) == pytest.approx(1.0, abs=1e-9)
    row = np.array([0.1, 0.2, 0.3, 0.4])
    P = FiniteKernel(sp, np.tile(row, (4, 1)))
    assert tau(P, sp) == 0.0
    assert tau_v(P, WeightFunction.ones(sp)) == 0.0


@pytest.mark.parametrize("seed", range(15))
def test_tau_v_equals_tau_under_dv_metric(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(2, 9))
    sp = trivial_metric(range(n))
    P = FiniteKernel(sp, random_kernel(rng, n, mix=0.2))
    V = WeightFunction(sp, 1.0 + rng.gamma(2.0, 1.5, size=n))
    assert tau_v(P, V) == pytest.approx(tau(P, dv_metric(V)), abs=1e-9)


@pytest.mark.parametrize("seed", range(15))
def test_tau_submultiplicative_and_contracts(seed):
    rng = np.random.default_rng(200 + seed)
    n = int(rng.integers(2, 8))
    pts = rng.normal(size=(n, 2))
    dist = np.linalg.norm(pts[:, None] - pts[None, :], axis=-1)
    if n > 1 and np.min(dist[~np.eye(n, dtype=bool)]) <= 0:
        return
    from wperturb.otcore import FiniteMetricSpace
    sp = FiniteMetricSpace(range(n), dist)
    P = FiniteKernel(sp, random_kernel(rng, n, mix=0.3))
    Q = FiniteKernel(sp, random_kernel(rng, n, mix=0.3))
    assert tau(compose(P, Q), sp) <= tau(P, sp) * tau(Q, sp) + 1e-9
    mu = DiscreteDistribution(sp, rng.dirichlet(np.ones(n)))
    nu = DiscreteDistribution(sp, rng.dirichlet(np.ones(n)))
    lhs, _ = wasserstein1_exact(P.push(mu), P.push(nu), sp)
    rhs, _ = wasserstein1_exact(mu, nu, sp)
    assert lhs <= tau(P, sp) * rhs + 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_tau_bounds_convergence_to_stationarity(seed):
    # sup_x W(delta_x P, pi) / W(delta_x, pi) <= tau(P)
    rng = np.random.default_rng(300 + seed)
    n = int(rng.integers(3, 8))
    sp = trivial_metric(range(n))
    P = FiniteKernel(sp, random_kernel(rng, n, mix=0.3))
    pi = stationary_distribution(P)
    t = tau(P, sp)
    for x in range(n):
        num, _ = wasserstein1_exact(P.row(x), pi, sp)
        den, _ = wasserstein1_exact(point_mass(sp, x), pi, sp)
        assert num <= t * den + 1e-9


def test_drift_estimate_validation():
    sp = trivial_metric(range(2))
    V = WeightFunction(sp, [1.0, 3.0])
    with pytest.raises(ValueError, match="delta"):
        DriftEstimate(V, 1.0, 0.5)
    with pytest.raises(ValueError, match="L"):
        DriftEstimate(V, 0.5, 0.0)
    DriftEstimate(V, 0.0, 0.5)  # delta = 0 is legitimate (e.g. alpha = 0 AR chains)


@pytest.mark.parametrize("seed", range(10))
def test_fit_drift_L_round_trip(seed):
    rng = np.random.default_rng(400 + seed)
    n = int(rng.integers(2, 10))
    sp = trivial_metric(range(n))
    P = FiniteKernel(sp, random_kernel(rng, n))
    V = WeightFunction(sp, 1.0 + rng.gamma(2.0, 3.0, size=n))
    delta = float(rng.uniform(0.1, 0.9))
    L = fit_drift_L(P, V, delta)
    check = verify_drift(P, DriftEstimate(V, delta, L))
    assert check.ok
    assert check.worst_slack <= 1e-10
    # halving L must break the condition unless the fit hit the 1e-12 floor
    if L > 1e-10:
        assert not verify_drift(P, DriftEstimate(V, delta, L / 2)).ok


def test_verify_drift_picks_lowest_worst_index():
    sp = trivial_metric(range(2))
    V = WeightFunction(sp, [2.0, 2.0])
    P = FiniteKernel(sp, np.eye(2))
    check = verify_drift(P, DriftEstimate(V, 0.5, 0.1))
    assert isinstance(check, DriftCheck)
    assert not check.ok
    assert check.worst_index == 0  # both states tie; lowest index reported


def test_fit_geometric_constants_hand_example():
    sp = trivial_metric(range(2))
    P = FiniteKernel(sp, [[0.7, 0.3], [0.6, 0.4]])
    est = fit_geometric_constants(P, WeightFunction.ones(sp), m=1, n_check=8)
    assert est.rho == pytest.approx(0.1, abs=1e-12)
    assert est.C == pytest.approx(1.0, abs=1e-12)
    assert est.metric_tag == "trivial"
    assert est.n_checked == 8


@pytest.mark.parametrize("seed", range(10))
def test_fit_geometric_constants_certificate(seed):
    rng = np.random.default_rng(500 + seed)
    n = int(rng.integers(2, 9))
    sp = trivial_metric(range(n))
    P = FiniteKernel(sp, random_kernel(rng, n, mix=0.3))
    V = WeightFunction(sp, 1.0 + rng.gamma(2.0, 1.0, size=n))
    est = fit_geometric_constants(P, V, m=3, n_check=9)
    assert est.metric_tag == "d_V"
    power = np.eye(n)
    for k in range(10):
        if k > 0:
            power = power @ P.matrix
        t = tau_v(FiniteKernel(sp, power / power.sum(1, keepdims=True)), V)
        assert t <= est.C * est.rho ** k + 1e-9


def test_fit_geometric_constants_rejects_no_contraction():
    sp = trivial_metric(range(2))
    swap = FiniteKernel(sp, [[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(NoContractionError):
        fit_geometric_constants(swap, WeightFunction.ones(sp), m=3, n_check=3)


def test_ergodicity_estimate_validation():
    with pytest.raises(ValueError):
        ErgodicityEstimate(C=1.0, rho=1.0, m=1, metric_tag="base", n_checked=1)
    with pytest.raises(ValueError):
        ErgodicityEstimate(C=0.5, rho=0.5, m=1, metric_tag="base", n_checked=1)


def test_gamma_zero_for_identical_kernels():
    rng = np.random.default_rng(7)
    sp = trivial_metric(range(4))
    P = FiniteKernel(sp, random_kernel(rng, 4))
    V = WeightFunction(sp, 1.0 + rng.gamma(2.0, 1.0, size=4))
    assert kernel_gamma_wasserstein(P, P, sp, V) == 0.0
    assert kernel_gamma_tv(P, P, V) == 0.0
    assert kernel_gamma_vnorm(P, P, V, V) == 0.0


def test_gamma_hand_value_two_states():
    sp = trivial_metric(range(2))
    P = FiniteKernel(sp, [[0.7, 0.3], [0.6, 0.4]])
    Pt = FiniteKernel(sp, [[0.6, 0.4], [0.6, 0.4]])
    V = WeightFunction(sp, [1.0, 2.0])
    # row 0 differs by 0.1 in each entry: tv = 0.2, vnorm = 0.1*1 + 0.1*2 = 0.3
    assert kernel_gamma_tv(P, Pt) == pytest.approx(0.2, abs=1e-12)
    assert kernel_gamma_tv(P, Pt, V) == pytest.approx(0.2, abs=1e-12)  # worst at x=0, V=1
    assert kernel_gamma_vnorm(P, Pt, V) == pytest.approx(0.3, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_gamma_vnorm_equals_gamma_wasserstein_under_dv(seed):
    rng = np.random.default_rng(600 + seed)
    n = int(rng.integers(2, 8))
    sp = trivial_metric(range(n))
    P = FiniteKernel(sp, random_kernel(rng, n))
    Pt = FiniteKernel(sp, random_kernel(rng, n))
    V = WeightFunction(sp, 1.0 + rng.gamma(2.0, 1.0, size=n))
    Vt = WeightFunction(sp, 1.0 + rng.gamma(2.0, 1.0, size=n))
    lhs = kernel_gamma_vnorm(P, Pt, V, Vt)
    rhs = kernel_gamma_wasserstein(P, Pt, dv_metric(V), Vt)
    assert lhs == pytest.approx(rhs, abs=1e-9)
