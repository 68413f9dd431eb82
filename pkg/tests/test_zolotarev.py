import numpy as np
import pytest
from numpy.polynomial import chebyshev as C

from modules import bounds, chebyshev, zolotarev
from modules.shared_utils import ConvergenceError, ParameterRangeError, sigma_n


def theta_grid(n, points=41):
    s = float(sigma_n(n))
    return np.linspace(-s, s, points)


def test_theta_zero_gives_lower_chebyshev():
    z = zolotarev.solve_zolotarev(5, 0.0)
    assert z.regime == zolotarev.REGIME_CHEB_LOWER
    assert list(z.coeffs) == pytest.approx([0.0, 0.0, 0.0, 0.0, 1.0, 0.0], abs=1e-12)
    monomial = C.cheb2poly(z.coeffs)
    assert list(monomial[:5]) == pytest.approx([1.0, 0.0, -8.0, 0.0, 8.0], abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 6, 12])
def test_full_theta_recovers_chebyshev(n):
    s = float(sigma_n(n))
    top = zolotarev.solve_zolotarev(n, s)
    bottom = zolotarev.solve_zolotarev(n, -s)
    expected = np.eye(n + 1)[n]
    assert top.coeffs == pytest.approx(expected, abs=1e-10)
    assert bottom.coeffs == pytest.approx(-expected, abs=1e-10)
    assert top.regime == zolotarev.REGIME_CHEBYSHEV


def test_coefficients_are_read_only():
    z = zolotarev.solve_zolotarev(4, -50.0)
    with pytest.raises(ValueError):
        z.coeffs[0] = 1.0


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_equioscillation_on_theta_grid(n):
    for z in zolotarev.zolotarev_family(n, theta_grid(n)):
        assert z.equioscillation_residual() <= 1e-10
        assert z.max_abs_on_grid() <= 1.0 + 1e-9
        assert zolotarev.zolotarev_deriv_at(z, n, 0.3) == z.theta
        assert float(C.chebder(z.coeffs, n)[0]) == pytest.approx(z.theta, rel=1e-9, abs=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize("n", [7, 8, 9, 10, 11, 12])
def test_equioscillation_on_theta_grid_higher_degree(n):
    for z in zolotarev.zolotarev_family(n, theta_grid(n)):
        assert z.equioscillation_residual() <= 1e-10
        assert z.max_abs_on_grid() <= 1.0 + 1e-9


def test_family_matches_individual_solves():
    thetas = [-30.0, 10.0, -5.0, 0.0, 47.0]
    family = zolotarev.zolotarev_family(4, thetas)
    assert [z.theta for z in family] == thetas
    for z, theta in zip(family, thetas):
        single = zolotarev.solve_zolotarev(4, theta)
        assert z.coeffs == pytest.approx(single.coeffs, abs=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_reflection_identity(n):
    s = float(sigma_n(n))
    xs = np.linspace(-1.0, 1.0, 201)
    for fraction in (0.2, 0.5, 0.9):
        plus = zolotarev.solve_zolotarev(n, fraction * s)
        minus = zolotarev.solve_zolotarev(n, -fraction * s)
        assert plus(xs) == pytest.approx((-1) ** (n + 1) * minus(-xs), abs=1e-10)


def test_regimes_follow_boundary():
    n = 3
    boundary = zolotarev.boundary_theta(n)
    assert boundary == pytest.approx(-24 * 0.75 ** 3)
    assert zolotarev.solve_zolotarev(n, -5.0).regime == zolotarev.REGIME_PROPER
    assert zolotarev.solve_zolotarev(n, -15.0).regime == zolotarev.REGIME_STRETCHED
    assert zolotarev.solve_zolotarev(n, 15.0).regime == zolotarev.REGIME_STRETCHED


def test_proper_regime_has_exterior_stationary_point():
    z = zolotarev.solve_zolotarev(4, -40.0)
    assert z.regime == zolotarev.REGIME_PROPER
    assert z.alternation[0] == -1.0 and z.alternation[-1] == 1.0
    assert z.beta is not None and abs(z.beta) > 1.0
    assert float(C.chebval(z.beta, C.chebder(z.coeffs))) == pytest.approx(0.0, abs=1e-8)


def test_positive_theta_stretched_form():
    n = 4
    s = float(sigma_n(n))
    theta = 0.95 * s
    a, t = zolotarev.stretched_parameter(n, theta)
    assert t == pytest.approx(1.0 / a - 1.0)
    z = zolotarev.solve_zolotarev(n, theta)
    xs = np.linspace(-1.0, 1.0, 101)
    expected = C.chebval(a * xs + 1.0 - a, np.eye(n + 1)[n])
    assert z(xs) == pytest.approx(expected, abs=1e-10)


def test_stretched_parameter_rejects_proper_range():
    with pytest.raises(ParameterRangeError):
        zolotarev.stretched_parameter(4, -1.0)


def test_theta_outside_range_is_rejected():
    with pytest.raises(ParameterRangeError):
        zolotarev.solve_zolotarev(3, 25.0)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_boundary_continuity(n):
    boundary = zolotarev.boundary_theta(n)
    tracker = zolotarev.ZolotarevContinuation(n, seed_boundary=False)
    near = tracker.solve(boundary * (1.0 - 1e-6))
    edge = zolotarev.solve_zolotarev(n, boundary)
    assert near.regime == zolotarev.REGIME_PROPER
    assert near.coeffs == pytest.approx(edge.coeffs, abs=1e-4)


def test_zolotarev_deriv_past_degree_vanishes():
    z = zolotarev.solve_zolotarev(3, -5.0)
    assert zolotarev.zolotarev_deriv_at(z, 4, 0.1) == 0.0


@pytest.mark.parametrize("n, k", [(3, 1), (4, 1), (4, 2), (5, 2), (6, 3)])
def test_theta_for_endpoint_zeroes_next_derivative(n, k):
    theta, z = zolotarev.theta_for_endpoint(n, k)
    assert -float(sigma_n(n)) < theta < 0.0
    scale = chebyshev.endpoint_value(n, k + 1)
    assert abs(zolotarev.zolotarev_deriv_at(z, k + 1, 1.0)) <= 1e-8 * scale


def test_theta_for_interior():
    n, k = 5, 1
    w = chebyshev.omega(n, k)
    x0 = (w + 1.0) / 2.0
    theta, z = zolotarev.theta_for_interior(n, k, x0)
    theta_k, _ = zolotarev.theta_for_endpoint(n, k)
    assert -float(sigma_n(n)) < theta < theta_k
    assert abs(zolotarev.zolotarev_deriv_at(z, k + 1, x0)) <= 1e-8 * chebyshev.endpoint_value(n, k + 1)


@pytest.mark.parametrize("n", [n if n <= 10 else pytest.param(n, marks=pytest.mark.slow) for n in range(3, 16)])
def test_endpoint_theta_dominates_eta(n):
    s = float(sigma_n(n))
    for k in range(1, n - 1):
        theta_k, _ = zolotarev.theta_for_endpoint(n, k)
        assert -s < theta_k < 0.0
        assert abs(theta_k) >= bounds.eta(n, k) * s * (1.0 - 1e-9), (n, k)


@pytest.mark.parametrize("n, k", [(3, 1), (5, 2), pytest.param(8, 3, marks=pytest.mark.slow)])
def test_theta_for_interior_is_monotone_between_its_limits(n, k):
    s = float(sigma_n(n))
    w = chebyshev.omega(n, k)
    theta_k, _ = zolotarev.theta_for_endpoint(n, k)
    xs = np.linspace(w, 1.0, 52)[1:-1]
    thetas = np.array([zolotarev.theta_for_interior(n, k, x0)[0] for x0 in xs])
    assert np.all(np.diff(thetas) > 0.0)
    assert np.all((thetas > -s) & (thetas < theta_k))

    near_omega, _ = zolotarev.theta_for_interior(n, k, w + 1e-5 * (1.0 - w))
    near_one, _ = zolotarev.theta_for_interior(n, k, 1.0 - 1e-5 * (1.0 - w))
    assert near_omega == pytest.approx(-s, abs=1e-3 * s)
    assert near_one == pytest.approx(theta_k, abs=1e-3 * s)


@pytest.mark.parametrize("n", [4, 6, 9])
def test_continuation_steps_stay_on_one_branch(n):
    tracker = zolotarev.ZolotarevContinuation(n, seed_boundary=False)
    target = 0.95 * zolotarev.boundary_theta(n)
    z = tracker.solve(target)
    assert z.regime == zolotarev.REGIME_PROPER
    assert z.equioscillation_residual() <= 1e-9

    # the states visited from theta = 0 out to the target, in path order
    path = [tracker._states[t] for t in sorted(tracker._states, key=abs)]
    jumps = [float(np.linalg.norm(b - a)) for a, b in zip(path, path[1:])]
    assert len(jumps) >= zolotarev.INITIAL_SUBDIVISIONS // 2
    for before, after in zip(jumps, jumps[1:]):
        assert after <= zolotarev.MAX_JUMP_RATIO * before


def test_theta_for_interior_rejects_points_left_of_omega():
    with pytest.raises(ParameterRangeError):
        zolotarev.theta_for_interior(5, 1, 0.1)


@pytest.mark.parametrize("n", [5, 6])
def test_interlacing_with_lower_chebyshev(n):
    s = float(sigma_n(n))
    for m in range(1, n - 1):
        for fraction in (-1.0, -0.6, -0.2, 0.3, 0.8, 1.0):
            report = zolotarev.verify_interlacing(n, m, fraction * s)
            assert report.status == "true"
            assert len(report.z_zeros) == len(report.t_zeros) + 1


def test_interlacing_is_degenerate_at_zero():
    assert zolotarev.verify_interlacing(5, 2, 0.0).status == "degenerate"


def test_interlacing_rejects_order_out_of_range():
    with pytest.raises(ParameterRangeError):
        zolotarev.verify_interlacing(5, 4, -10.0)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_schur_endpoint_constants(n):
    for k in range(1, n - 1):
        constants = zolotarev.schur_endpoint_constants(n, k)
        value = constants["value"]
        for name in ("p1", "p2a", "p2b", "p3"):
            if constants[name] is not None:
                assert value <= constants[name] * (1 + 1e-9), name


@pytest.mark.slow
@pytest.mark.parametrize("n", range(8, 16))
def test_schur_endpoint_constants_higher_degree(n):
    for k in (1, 2, n - 2):
        constants = zolotarev.schur_endpoint_constants(n, k)
        for name in ("p1", "p2a", "p2b", "p3"):
            if constants[name] is not None:
                assert constants["value"] <= constants[name] * (1 + 1e-9), name


def test_convergence_error_carries_diagnostics():
    error = ConvergenceError("no root", residual=0.5, iterations=3)
    assert error.residual == 0.5 and error.iterations == 3
    assert isinstance(error, ArithmeticError)
