import numpy as np
import pytest
from numpy.polynomial import chebyshev as C

from modules import chebyshev, oracle, zolotarev
from modules.shared_utils import ParameterRangeError, sigma_n


def exact_endpoint(n, k, sigma):
    return zolotarev.zolotarev_deriv_at(zolotarev.solve_zolotarev(n, sigma), k, 1.0)


def test_cheb_grid_nests_and_contains_endpoints():
    coarse = oracle.cheb_grid(101)
    fine = oracle.cheb_grid(201)
    assert coarse[0] == 1.0 and coarse[-1] == pytest.approx(-1.0)
    assert fine[::2] == pytest.approx(coarse, abs=1e-15)


def test_derivative_functional_evaluates_derivative():
    rng = np.random.default_rng(7)
    coeffs = rng.normal(size=6)
    for k in range(0, 6):
        row = oracle._derivative_functional(5, k, 0.37)
        assert row @ coeffs == pytest.approx(C.chebval(0.37, C.chebder(coeffs, k)), abs=1e-10)


def test_unconstrained_endpoint_is_markov():
    for n in (2, 3, 4):
        for k in range(1, n + 1):
            solution = oracle.lp_pointwise(n, k, 1.0)
            assert solution.sigma == oracle.UNCONSTRAINED
            assert solution.objective == pytest.approx(chebyshev.endpoint_value(n, k), rel=1e-5)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_full_sigma_gives_chebyshev_endpoint(n):
    for k in range(1, n):
        solution = oracle.lp_pointwise(n, k, 1.0, float(sigma_n(n)))
        assert solution.objective == pytest.approx(chebyshev.endpoint_value(n, k), rel=1e-5)


def test_zero_sigma_drops_to_lower_degree():
    solution = oracle.lp_pointwise(4, 2, 1.0, 0.0)
    assert solution.objective == pytest.approx(chebyshev.endpoint_value(3, 2), rel=1e-5)
    assert abs(solution.coeffs[4]) <= 1e-9


def test_solution_brackets_exact_value():
    n, k, sigma = 4, 1, 60.0
    solution = oracle.lp_pointwise(n, k, 1.0, sigma, grid_size=1001, refine=False)
    exact = exact_endpoint(n, k, sigma)
    assert solution.certified_lower <= exact * (1 + 1e-9)
    assert exact <= solution.objective * (1 + 1e-9)


def test_optimal_polynomial_alternates():
    solution = oracle.lp_pointwise(5, 1, 1.0, 100.0)
    assert solution.alternation_count >= 4
    assert solution.grid_size >= 1001


@pytest.mark.parametrize("n", [2, 3, 4])
def test_oracle_matches_zolotarev(n):
    for sigma in np.linspace(0.0, float(sigma_n(n)), 11):
        for k in range(1, n):
            lp = oracle.lp_pointwise(n, k, 1.0, float(sigma)).objective
            exact = exact_endpoint(n, k, float(sigma))
            assert lp == pytest.approx(exact, rel=1e-5, abs=1e-5), (n, k, sigma)


@pytest.mark.slow
@pytest.mark.parametrize("n", [5, 6])
def test_oracle_matches_zolotarev_higher_degree(n):
    for sigma in np.linspace(0.0, float(sigma_n(n)), 11):
        for k in range(1, n):
            lp = oracle.lp_pointwise(n, k, 1.0, float(sigma)).objective
            exact = exact_endpoint(n, k, float(sigma))
            assert lp == pytest.approx(exact, rel=1e-5, abs=1e-5), (n, k, sigma)


def test_oracle_argument_checks():
    with pytest.raises(ParameterRangeError):
        oracle.lp_pointwise(9, 1, 1.0)
    with pytest.raises(ParameterRangeError):
        oracle.lp_pointwise(4, 1, 1.5)
    with pytest.raises(ParameterRangeError):
        oracle.lp_pointwise(4, 1, 1.0, grid_size=50)
    with pytest.raises(ParameterRangeError):
        oracle.lp_pointwise(4, 1, 1.0, sigma=-1.0)
    with pytest.raises(ParameterRangeError):
        oracle.lp_schur(4, 4, 1.0)


def test_karlin_profile_peaks_at_endpoint():
    profile = oracle.karlin_profile(4, 1, float(sigma_n(4)) / 2)
    assert profile.max_at_endpoint
    assert len(profile.points) >= oracle.PROFILE_POINTS


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_karlin_profile_all_orders(n):
    s = float(sigma_n(n))
    for k in range(1, n):
        for fraction in (0.25, 0.5, 0.75, 1.0):
            assert oracle.karlin_profile(n, k, fraction * s).max_at_endpoint, (n, k, fraction)


def test_karlin_profile_needs_enough_points():
    with pytest.raises(ParameterRangeError):
        oracle.karlin_profile(4, 1, 10.0, X=[0.0, 0.5, 1.0])


def test_concavity_in_sigma():
    s = float(sigma_n(3))
    assert oracle.concavity_in_sigma(3, 1, 1.0, np.linspace(0.0, s, 7))


def test_schur_constant_below_half():
    for n in range(3, 9):
        assert oracle.schur_constant_ratio(n) < 0.5


@pytest.mark.slow
def test_schur_constant_in_classical_corridor():
    low, high = oracle.SCHUR_CORRIDOR
    for n in range(3, 13):
        ratio = oracle.schur_constant_ratio(n)
        assert ratio < 0.5
        if n >= 5:
            assert low <= ratio <= high


@pytest.mark.parametrize("n, k", [(4, 1), (5, 1)])
def test_schur_lp_brackets_zolotarev_value(n, k):
    w = chebyshev.omega(n, k)
    for x0 in [w + f * (1.0 - w) for f in (0.25, 0.5, 0.75)] + ([0.7785] if n == 5 else []):
        _, z = zolotarev.theta_for_interior(n, k, x0)
        zval = abs(zolotarev.zolotarev_deriv_at(z, k, x0))
        solution = oracle.lp_schur(n, k, x0)
        assert solution.certified_lower <= zval * (1 + 1e-9), (n, k, x0)
        assert zval <= solution.objective * (1 + 1e-9), (n, k, x0)
        assert solution.objective <= zval * (1 + 1e-6), (n, k, x0)


def test_schur_profile_interior_maximum_for_cubic():
    profile = oracle.schur_profile(3, 1)
    values = dict(profile.points)
    assert values[0.0] >= profile.max_value * (1 - 1e-6)
    assert profile.relative_gap <= 1e-4


@pytest.mark.slow
@pytest.mark.parametrize("n", [4, 5, 6])
def test_schur_profile_matches_extremal_candidates(n):
    for k in range(1, n - 1):
        assert oracle.schur_profile(n, k).relative_gap <= 1e-4, (n, k)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_last_derivative_case(n):
    s = float(sigma_n(n))
    for sigma in np.linspace(0.0, s, 9):
        report = oracle.last_derivative_case(n, float(sigma))
        assert report.d_value > 0.0
        assert report.c1 <= report.c2 + 1e-10
        assert report.oracle_relative_error <= 1e-5
        if report.c1_closed is not None:
            assert report.c1 == pytest.approx(report.c1_closed, abs=1e-10)
            assert report.c2 == pytest.approx(report.c2_closed, abs=1e-10)


@pytest.mark.slow
@pytest.mark.parametrize("n", [5, 6])
def test_last_derivative_case_higher_degree(n):
    s = float(sigma_n(n))
    for sigma in np.linspace(0.0, s, 9):
        report = oracle.last_derivative_case(n, float(sigma))
        assert report.d_value > 0.0
        assert report.c1_le_c2
        assert report.oracle_relative_error <= 1e-5


def test_last_derivative_quadratic_equality():
    report = oracle.last_derivative_case(2, 3.0, with_oracle=False)
    assert report.oracle_value is None
    assert report.c1 == pytest.approx(report.c2, abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_interpolation_identity(n):
    s = float(sigma_n(n))
    for sigma in (0.2 * s, 0.6 * s, s):
        assert oracle.interpolation_identity_residual(n, sigma) <= 1e-9


def test_trig_sum_bound():
    for n in range(2, 40):
        assert oracle.trig_sum_bound(n).holds
