# modules/zolotarev.py
# This module builds Zolotarev polynomials Z_n(., theta), the degree-n polynomials with
# n equioscillations on [-1, 1] parametrized by the value theta of their n-th derivative.
# It also solves for the special parameters theta_k and theta_{x0} used by the Schur-type
# endpoint estimates.

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy import optimize

from modules import chebyshev
from modules.shared_utils import ConvergenceError, ParameterRangeError, require, sigma_n

logger = logging.getLogger(__name__)

# ====================================================================================================
# SECTION 1: MODULE-SPECIFIC CONSTANTS
# ====================================================================================================

# 1.1 Regime tags
REGIME_CHEBYSHEV = "chebyshev"    # |theta| = sigma_n, Z = +-T_n
REGIME_STRETCHED = "stretched"    # Z = +-T_n(ax + b), one endpoint in the alternation set
REGIME_PROPER = "proper"          # both endpoints in the alternation set, exterior stationary point beta
REGIME_CHEB_LOWER = "cheb_lower"  # theta = 0, Z = T_{n-1}

# 1.2 Newton settings for the proper regime
NEWTON_MAX_ITER = 100
NEWTON_TOL = 1e-12
NEWTON_FLOOR = 1e-11      # accepted when the line search can no longer reduce the residual
MIN_DAMPING = 2.0 ** -30

# 1.3 Continuation in theta
INITIAL_SUBDIVISIONS = 8
STEP_GROWTH = 1.5
MIN_RELATIVE_STEP = 1e-9
MAX_JUMP_RATIO = 2.5       # an accepted step may move u at most this factor further than the step before it

# 1.4 Tolerances
THETA_SLACK = 1e-12       # |theta| may exceed sigma_n by this relative amount
BOUNDARY_SLACK = 1e-9     # within this relative band of the boundary the closed form is used
ROOT_IMAG_TOL = 1e-8
THETA_XTOL = 1e-12        # relative to sigma_n, for the bracketed theta searches


# ====================================================================================================
# SECTION 2: DOMAIN TYPES
# ====================================================================================================

@dataclass(frozen=True, eq=False)
class ZolotarevPoly:
    """
    A solved Zolotarev polynomial in the Chebyshev basis.

    Attributes:
        n (int): Degree.
        theta (float): Value of the n-th derivative.
        coeffs (np.ndarray): Read-only Chebyshev coefficients c_0..c_n.
        alternation (Tuple[float, ...]): Points tau_1 < ... < tau_n with (-1)^(n-i) Z(tau_i) = 1.
        regime (str): One of the REGIME_* tags.
        beta (Optional[float]): Exterior stationary point, set only in the proper regime.
    """

    n: int
    theta: float
    coeffs: np.ndarray = field(repr=False)
    alternation: Tuple[float, ...]
    regime: str
    beta: Optional[float] = None

    def __call__(self, x):
        return C.chebval(x, self.coeffs)

    def deriv_coeffs(self, k: int) -> np.ndarray:
        return C.chebder(self.coeffs, k) if k > 0 else np.array(self.coeffs)

    def equioscillation_residual(self) -> float:
        """max_i |(-1)^(n-i) Z(tau_i) - 1|."""
        tau = np.asarray(self.alternation)
        signs = (-1.0) ** (self.n - np.arange(1, self.n + 1))
        return float(np.max(np.abs(signs * C.chebval(tau, self.coeffs) - 1.0)))

    def max_abs_on_grid(self, points: int = 4001) -> float:
        return float(np.max(np.abs(C.chebval(np.linspace(-1.0, 1.0, points), self.coeffs))))


@dataclass(frozen=True)
class InterlacingReport:
    """Zeros of Z_n^(m)(., theta) against zeros of T_{n-1}^(m)."""

    n: int
    m: int
    theta: float
    z_zeros: Tuple[float, ...]
    t_zeros: Tuple[float, ...]
    interlaced: bool
    degenerate: bool

    @property
    def status(self) -> str:
        if self.degenerate:
            return "degenerate"
        return "true" if self.interlaced else "false"


# ====================================================================================================
# SECTION 3: CLOSED-FORM REGIMES AND REFLECTION
# ====================================================================================================

def _freeze(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


def boundary_theta(n: int) -> float:
    """Signed boundary -sigma_n * cos^(2n)(pi/2n) between the stretched and proper regimes."""
    return -sigma_n(n) * math.cos(math.pi / (2 * n)) ** (2 * n)


def stretched_parameter(n: int, theta: float) -> Tuple[float, float]:
    """
    Returns (a, t) of the stretched family: a = (|theta|/sigma_n)^(1/n) and t = 1/a - 1.

    Raises:
        ParameterRangeError: If theta lies in the proper or lower-Chebyshev range.
    """
    require(n >= 2, f"stretched_parameter needs n >= 2, got {n}.")
    sigma = float(sigma_n(n))
    magnitude = abs(theta)
    require(magnitude <= sigma * (1.0 + THETA_SLACK), f"|theta| = {magnitude} exceeds sigma_{n} = {sigma}.")
    if magnitude < abs(boundary_theta(n)) * (1.0 - BOUNDARY_SLACK):
        raise ParameterRangeError(f"theta = {theta} is not in the stretched range for n = {n}.")
    a = min(1.0, (magnitude / sigma) ** (1.0 / n))
    return a, 1.0 / a - 1.0


def _stretched_negative(n: int, theta: float) -> ZolotarevPoly:
    """Z = -T_n(ax + a - 1) for theta <= boundary_theta(n); anchored at x = -1."""
    sigma = float(sigma_n(n))
    a, _ = stretched_parameter(n, theta)
    # T_n on the domain [-1, 2/a - 1] is T_n(ax + a - 1) on the standard window.
    series = C.Chebyshev.basis(n, domain=[-1.0, 2.0 / a - 1.0]).convert(domain=[-1.0, 1.0])
    coeffs = -np.pad(series.coef, (0, n + 1 - len(series.coef)))
    coeffs[n] = theta / sigma
    nodes = np.cos((n - np.arange(1, n + 1) + 1) * math.pi / n)
    tau = (nodes + 1.0) / a - 1.0
    tau[0] = -1.0
    regime = REGIME_CHEBYSHEV if a == 1.0 else REGIME_STRETCHED
    return ZolotarevPoly(n=n, theta=float(theta), coeffs=_freeze(coeffs),
                         alternation=tuple(float(t) for t in tau), regime=regime)


def _cheb_lower(n: int) -> ZolotarevPoly:
    coeffs = np.zeros(n + 1)
    coeffs[n - 1] = 1.0
    tau = np.cos((n - np.arange(1, n + 1)) * math.pi / (n - 1))
    return ZolotarevPoly(n=n, theta=0.0, coeffs=_freeze(coeffs),
                         alternation=tuple(float(t) for t in tau), regime=REGIME_CHEB_LOWER)


def _reflect(z: ZolotarevPoly) -> ZolotarevPoly:
    """Z_n(x, theta) = (-1)^(n+1) Z_n(-x, -theta); preserves the sign of the n-th derivative."""
    n = z.n
    signs = (-1.0) ** (n + 1 + np.arange(n + 1))
    beta = None if z.beta is None else -z.beta
    return ZolotarevPoly(n=n, theta=-z.theta, coeffs=_freeze(signs * z.coeffs),
                         alternation=tuple(-t for t in reversed(z.alternation)),
                         regime=z.regime, beta=beta)


def _exterior_stationary_point(coeffs: np.ndarray) -> Optional[float]:
    roots = C.chebroots(C.chebder(coeffs))
    real = roots[np.abs(roots.imag) <= ROOT_IMAG_TOL * np.maximum(1.0, np.abs(roots))].real
    outside = real[np.abs(real) > 1.0]
    if outside.size == 0:
        logger.warning("No real stationary point outside [-1, 1]; beta left unset.")
        return None
    return float(outside[np.argmax(np.abs(outside))])


# ====================================================================================================
# SECTION 4: PROPER REGIME
# Square system in u = (c_0..c_{n-1}, tau_2..tau_{n-1}); tau_1 = -1, tau_n = 1 and
# c_n = theta/sigma_n stay fixed. Derivative rows are scaled by 1/(n-1)^2.
# ====================================================================================================

@lru_cache(maxsize=None)
def _diff_matrix(n: int) -> np.ndarray:
    """Column j holds the Chebyshev coefficients of T_j'."""
    return np.column_stack([C.chebder(e) for e in np.eye(n + 1)])


def _interior_ordered(interior: np.ndarray) -> bool:
    nodes = np.concatenate(([-1.0], interior, [1.0]))
    return bool(np.all(np.diff(nodes) > 0.0))


def _newton_proper(n: int, theta: float, u0: np.ndarray) -> np.ndarray:
    """
    Damped Newton for the proper-regime alternation system.

    Args:
        n (int): Degree.
        theta (float): Target n-th derivative value.
        u0 (np.ndarray): Starting vector (c_0..c_{n-1}, tau_2..tau_{n-1}).

    Returns:
        np.ndarray: The converged unknown vector.
    """
    c_top = theta / sigma_n(n)
    targets = (-1.0) ** (n - np.arange(1, n + 1))
    scale = 1.0 / (n - 1) ** 2
    diff = _diff_matrix(n)

    def unpack(u):
        return np.append(u[:n], c_top), np.concatenate(([-1.0], u[n:], [1.0]))

    def residual(u):
        c, tau = unpack(u)
        values = C.chebval(tau, c) - targets
        slopes = C.chebval(tau[1:-1], C.chebder(c)) * scale
        return np.concatenate((values, slopes))

    def jacobian(u):
        c, tau = unpack(u)
        inner = tau[1:-1]
        jac = np.zeros((2 * n - 2, 2 * n - 2))
        jac[:n, :n] = C.chebvander(tau, n)[:, :n]
        jac[1:n - 1, n:] = np.diag(C.chebval(inner, C.chebder(c)))
        jac[n:, :n] = (C.chebvander(inner, n - 1) @ diff)[:, :n] * scale
        jac[n:, n:] = np.diag(C.chebval(inner, C.chebder(c, 2))) * scale
        return jac

    u = np.array(u0, dtype=float)
    res = residual(u)
    norm = float(np.max(np.abs(res)))
    for iteration in range(1, NEWTON_MAX_ITER + 1):
        if norm <= NEWTON_TOL:
            return u
        try:
            step = np.linalg.solve(jacobian(u), -res)
        except np.linalg.LinAlgError as e:
            raise ConvergenceError(f"Singular Newton system at theta={theta}: {e}",
                                   residual=norm, iterations=iteration) from e

        damping = 1.0
        accepted = False
        while damping >= MIN_DAMPING:
            trial = u + damping * step
            if _interior_ordered(trial[n:]):
                trial_res = residual(trial)
                trial_norm = float(np.max(np.abs(trial_res)))
                if trial_norm < norm:
                    accepted = True
                    break
            damping /= 2.0
        if not accepted:
            if norm <= NEWTON_FLOOR:
                return u
            raise ConvergenceError(f"Damped Newton stalled for n={n}, theta={theta}",
                                   residual=norm, iterations=iteration)
        u, res, norm = trial, trial_res, trial_norm
        logger.debug(f"Newton n={n} theta={theta:.6g} iter={iteration} residual={norm:.3e} damping={damping}")

    if norm <= NEWTON_FLOOR:
        return u
    raise ConvergenceError(f"Newton did not converge for n={n}, theta={theta}",
                           residual=norm, iterations=NEWTON_MAX_ITER)


class ZolotarevContinuation:
    """
    Solves Z_n(., theta) for any theta in [-sigma_n, sigma_n], continuing the proper
    regime in theta from the nearest solved state. Instances keep their own state,
    so separate instances never share anything.
    """

    def __init__(self, n: int, seed_boundary: bool = True):
        require(n >= 2, f"Zolotarev polynomials need n >= 2, got {n}.")
        self.n = n
        self.sigma = float(sigma_n(n))
        self.boundary = boundary_theta(n)
        self._states: Dict[float, np.ndarray] = {}

        lower = _cheb_lower(n)
        self._states[0.0] = np.concatenate((lower.coeffs[:n], lower.alternation[1:-1]))
        if seed_boundary:
            edge = _stretched_negative(n, self.boundary)
            self._states[self.boundary] = np.concatenate((edge.coeffs[:n], edge.alternation[1:-1]))

    def solve(self, theta: float) -> ZolotarevPoly:
        theta = float(theta)
        if abs(theta) > self.sigma * (1.0 + THETA_SLACK):
            raise ParameterRangeError(f"|theta| = {abs(theta)} exceeds sigma_{self.n} = {self.sigma}.")
        if theta > 0.0:
            return _reflect(self._solve_nonpositive(-theta))
        return self._solve_nonpositive(theta)

    def _solve_nonpositive(self, theta: float) -> ZolotarevPoly:
        if theta == 0.0:
            return _cheb_lower(self.n)
        if abs(theta) >= abs(self.boundary) * (1.0 - BOUNDARY_SLACK):
            return _stretched_negative(self.n, max(theta, -self.sigma))

        u = self._continue_to(theta)
        n = self.n
        coeffs = np.append(u[:n], theta / self.sigma)
        tau = np.concatenate(([-1.0], u[n:], [1.0]))
        return ZolotarevPoly(n=n, theta=theta, coeffs=_freeze(coeffs),
                             alternation=tuple(float(t) for t in tau), regime=REGIME_PROPER,
                             beta=_exterior_stationary_point(coeffs))

    def _continue_to(self, theta: float) -> np.ndarray:
        start = min(self._states, key=lambda known: abs(known - theta))
        current, u = start, self._states[start]
        step = (theta - start) / INITIAL_SUBDIVISIONS
        min_step = MIN_RELATIVE_STEP * self.sigma
        last_jump = 0.0
        while current != theta:
            target = theta if abs(theta - current) <= abs(step) else current + step
            try:
                trial = _newton_proper(self.n, target, u)
            except ConvergenceError:
                step /= 2.0
                if abs(step) < min_step:
                    raise
                logger.debug(f"Continuation step halved to {step:.3e} near theta={current:.6g}")
                continue
            jump = float(np.linalg.norm(trial - u))
            if last_jump > 0.0 and jump > MAX_JUMP_RATIO * last_jump:
                step /= 2.0
                if abs(step) < min_step:
                    raise ConvergenceError(f"Continuation jumped branches near theta={current:.6g} for n={self.n}",
                                           residual=jump)
                logger.debug(f"Jump {jump:.3e} after {last_jump:.3e}; step halved to {step:.3e} near theta={current:.6g}")
                continue
            u, current, last_jump = trial, target, jump
            self._states[current] = u
            step *= STEP_GROWTH
        return u


# ====================================================================================================
# SECTION 5: PUBLIC SOLVERS
# ====================================================================================================

@lru_cache(maxsize=4096)
def solve_zolotarev(n: int, theta: float) -> ZolotarevPoly:
    """
    The unique Zolotarev polynomial of degree n whose n-th derivative equals theta.

    Args:
        n (int): Degree, n >= 2.
        theta (float): n-th derivative value with |theta| <= sigma_n.

    Returns:
        ZolotarevPoly: Coefficients, alternation points and regime.
    """
    return ZolotarevContinuation(n).solve(theta)


def zolotarev_family(n: int, thetas: Iterable[float]) -> List[ZolotarevPoly]:
    """Solves a whole theta-grid with one continuation; results follow the input order."""
    thetas = [float(t) for t in thetas]
    tracker = ZolotarevContinuation(n)
    solved = {t: tracker.solve(t) for t in sorted(set(thetas), key=abs)}
    return [solved[t] for t in thetas]


def zolotarev_deriv_at(z: ZolotarevPoly, k: int, x: float) -> float:
    """k-th derivative of Z at x; exactly theta for k = n and zero past it."""
    require(k >= 0, f"Derivative order must be non-negative, got {k}.")
    if k > z.n:
        return 0.0
    if k == z.n:
        return z.theta
    return float(C.chebval(x, z.deriv_coeffs(k)))


def _bracketed_theta(tracker: ZolotarevContinuation, k: int, x: float, lo: float, hi: float) -> float:
    def f(theta: float) -> float:
        return zolotarev_deriv_at(tracker.solve(theta), k + 1, x)

    f_lo, f_hi = f(lo), f(hi)
    if f_lo * f_hi > 0.0:
        raise ConvergenceError(
            f"Z^({k + 1})({x}, theta) does not change sign on [{lo:.6g}, {hi:.6g}]",
            residual=min(abs(f_lo), abs(f_hi)))
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    return optimize.brentq(f, lo, hi, xtol=THETA_XTOL * tracker.sigma)


@lru_cache(maxsize=None)
def theta_for_endpoint(n: int, k: int) -> Tuple[float, ZolotarevPoly]:
    """
    Finds theta_k in (-sigma_n, 0) with Z_n^(k+1)(1, theta_k) = 0.

    The rightmost zero of Z_n^(k+1)(., theta) moves monotonically from omega_k to past 1
    as theta runs from -sigma_n to 0, so the endpoint derivative changes sign exactly once.
    """
    require(n >= 3 and 1 <= k <= n - 2, f"theta_for_endpoint needs 1 <= k <= n-2, got (n={n}, k={k}).")
    tracker = ZolotarevContinuation(n)
    theta = _bracketed_theta(tracker, k, 1.0, -tracker.sigma, 0.0)
    z = tracker.solve(theta)
    logger.info(f"theta_{k} for n={n}: {theta:.10g} ({theta / tracker.sigma:.6f} sigma_n, {z.regime})")
    return theta, z


def theta_for_interior(n: int, k: int, x0: float) -> Tuple[float, ZolotarevPoly]:
    """Finds theta_{x0} in (-sigma_n, theta_k) with Z_n^(k+1)(x0, theta_{x0}) = 0, for omega_k < x0 < 1."""
    w = chebyshev.omega(n, k)
    if not w < x0 < 1.0:
        raise ParameterRangeError(f"x0 = {x0} must lie in (omega_{k} = {w:.12g}, 1) for n = {n}.")
    theta_k, _ = theta_for_endpoint(n, k)
    tracker = ZolotarevContinuation(n)
    theta = _bracketed_theta(tracker, k, x0, -tracker.sigma, theta_k)
    return theta, tracker.solve(theta)


def _real_roots(coeffs: np.ndarray) -> Tuple[Tuple[float, ...], bool]:
    roots = C.chebroots(coeffs)
    is_real = np.abs(roots.imag) <= ROOT_IMAG_TOL * np.maximum(1.0, np.abs(roots))
    return tuple(sorted(float(r) for r in roots[is_real].real)), bool(np.all(is_real))


def verify_interlacing(n: int, m: int, theta: float) -> InterlacingReport:
    """
    Checks tau_1 < alpha_1 < tau_2 < ... < alpha_{M-1} < tau_M for the zeros tau of
    Z_n^(m)(., theta) and alpha of T_{n-1}^(m).
    """
    require(n >= 3 and 1 <= m <= n - 2, f"verify_interlacing needs 1 <= m <= n-2, got (n={n}, m={m}).")
    z = solve_zolotarev(n, theta)
    z_zeros, all_real = _real_roots(z.deriv_coeffs(m))
    t_zeros = chebyshev.deriv_zeros(n - 1, m - 1)

    if z.regime == REGIME_CHEB_LOWER:
        return InterlacingReport(n=n, m=m, theta=theta, z_zeros=t_zeros, t_zeros=t_zeros,
                                 interlaced=False, degenerate=True)

    interlaced = all_real and len(z_zeros) == len(t_zeros) + 1
    if interlaced:
        merged = [None] * (2 * len(z_zeros) - 1)
        merged[0::2], merged[1::2] = z_zeros, t_zeros
        interlaced = bool(np.all(np.diff(merged) > 0.0))
    return InterlacingReport(n=n, m=m, theta=theta, z_zeros=z_zeros, t_zeros=t_zeros,
                             interlaced=interlaced, degenerate=False)


# ====================================================================================================
# SECTION 6: ENDPOINT ESTIMATES
# ====================================================================================================

def schur_endpoint_constants(n: int, k: int) -> Dict[str, Optional[float]]:
    """
    |Z_n^(k)(1, theta_k)| next to the closed-form upper estimates it must respect.

    Returns:
        Dict: keys value, p1, p2a, p2b and p3 (p3 is None for k >= 3).
    """
    theta, z = theta_for_endpoint(n, k)
    top = float(chebyshev.endpoint_value(n, k))
    p3 = None
    if k == 1:
        p3 = top / 3.0
    elif k == 2:
        p3 = 0.23 * top
    return {
        "theta": theta,
        "value": abs(zolotarev_deriv_at(z, k, 1.0)),
        "p1": top / (k + 1),
        "p2a": float(chebyshev.endpoint_value(n - 1, k)),
        "p2b": top * (n - 1) / ((k + 1) * (n - 1 + k)),
        "p3": p3,
    }
