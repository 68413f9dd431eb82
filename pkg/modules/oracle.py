# modules/oracle.py
# This module is the brute-force side of the Extremal Polynomial Suite. Pointwise extremal
# values over degree-n polynomials bounded by 1 on [-1, 1] are computed as linear programs
# on a Chebyshev grid, independently of every closed form, and compared with them.

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.optimize import linprog

from modules import chebyshev, zolotarev
from modules.shared_utils import (
    DEFAULT_LP_GRID, ConvergenceError, leq_with_slack, max_lp_grid, require, sigma_n, thread_count,
)

logger = logging.getLogger(__name__)

# ====================================================================================================
# SECTION 1: MODULE-SPECIFIC CONSTANTS
# ====================================================================================================

UNCONSTRAINED = "unconstrained"

MAX_ORACLE_DEGREE = 8
MAX_SCHUR_DEGREE = 12        # lp_schur degree cap
MIN_GRID = 101
PROFILE_GRID = 4001          # fixed grid for x- and x0-profiles
PROFILE_POINTS = 101
REFINE_TOL = 1e-7            # stop doubling the grid once the objective moves less than this
ACTIVE_TOL = 1e-9
PROFILE_SLACK = 1e-7
CONCAVITY_TOL = 1e-7

LP_METHOD = "highs-ds"
LP_OPTIONS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}

SCHUR_CORRIDOR = (0.217, 0.465)


# ====================================================================================================
# SECTION 2: DOMAIN TYPES
# ====================================================================================================

@dataclass(frozen=True, eq=False)
class ExtremalLPSolution:
    """
    Optimal polynomial of one LP solve, in the Chebyshev basis.

    Attributes:
        objective (float): Optimal p^(k)(x) on the grid; an upper bound for the true extremum.
        certified_lower (float): objective / max(1, max|p| on [-1, 1]); a feasible lower bound.
        active (Tuple[int, ...]): Grid indices with |p(t_j)| >= 1 - 1e-9.
    """

    n: int
    k: int
    x: float
    sigma: Union[float, str]
    grid: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)
    objective: float
    certified_lower: float
    active: Tuple[int, ...] = field(repr=False)
    refinements: int = 0

    @property
    def grid_size(self) -> int:
        return len(self.grid)

    @property
    def alternation_count(self) -> int:
        """Number of sign runs among the active grid points."""
        if not self.active:
            return 0
        signs = np.sign(C.chebval(self.grid[list(self.active)], self.coeffs))
        return 1 + int(np.count_nonzero(np.diff(signs)))


@dataclass(frozen=True)
class KarlinProfile:
    n: int
    k: int
    sigma: Union[float, str]
    points: Tuple[Tuple[float, float], ...]
    argmax: float
    max_at_endpoint: bool


@dataclass(frozen=True)
class SchurProfile:
    n: int
    k: int
    points: Tuple[Tuple[float, float], ...]
    argmax: float
    max_value: float
    expected: float

    @property
    def relative_gap(self) -> float:
        return abs(self.max_value - self.expected) / self.expected


@dataclass(frozen=True)
class LastDerivativeReport:
    """Interpolation quantities of the k = n-1 case at one sigma."""

    n: int
    sigma: float
    regime: str
    d_value: float
    omega_value: float
    c1: float
    c2: float
    zolotarev_value: float
    oracle_value: Optional[float]
    stretch_t: Optional[float] = None
    c1_closed: Optional[float] = None
    c2_closed: Optional[float] = None

    @property
    def c1_le_c2(self) -> bool:
        return leq_with_slack(self.c1, self.c2, 1e-10)

    @property
    def oracle_relative_error(self) -> Optional[float]:
        if self.oracle_value is None:
            return None
        return abs(self.oracle_value - self.zolotarev_value) / max(1.0, abs(self.zolotarev_value))


@dataclass(frozen=True)
class TrigSumReport:
    n: int
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return leq_with_slack(self.lhs, self.rhs)


# ====================================================================================================
# SECTION 3: LP CORE
# maximize d . c  subject to  -1 <= V c <= 1 on the grid, |c_n| <= sigma/sigma_n, and
# optionally e . c = 0. The equality is removed by solving for the coordinate with the
# largest |e_j|, which keeps a plain LP in the remaining n coordinates.
# ====================================================================================================

def cheb_grid(size: int) -> np.ndarray:
    """cos(j pi/(G-1)), j = 0..G-1; includes both endpoints and nests under G -> 2G-1."""
    return np.cos(np.arange(size) * math.pi / (size - 1))


def _derivative_functional(n: int, k: int, x: float) -> np.ndarray:
    """Row d with d . c = p^(k)(x) for p = sum c_j T_j."""
    return np.array([C.chebval(x, C.chebder(e, k)) if j >= k else 0.0
                     for j, e in enumerate(np.eye(n + 1))])


def _elimination(n: int, equality: Optional[np.ndarray]) -> Tuple[np.ndarray, Optional[int]]:
    if equality is None or not np.any(equality):
        return np.eye(n + 1), None
    pivot = int(np.argmax(np.abs(equality)))
    free = [j for j in range(n + 1) if j != pivot]
    basis = np.zeros((n + 1, n))
    for col, j in enumerate(free):
        basis[j, col] = 1.0
        basis[pivot, col] = -equality[j] / equality[pivot]
    return basis, pivot


def _sup_norm(coeffs: np.ndarray) -> float:
    slope = C.chebder(coeffs)
    slope = C.chebtrim(slope, tol=1e-14 * max(1.0, float(np.max(np.abs(slope)))))
    roots = C.chebroots(slope) if len(slope) > 1 else np.array([])
    real = roots[np.abs(np.imag(roots)) < 1e-10].real if roots.size else np.array([])
    candidates = np.concatenate(([-1.0, 1.0], real[np.abs(real) <= 1.0]))
    return float(np.max(np.abs(C.chebval(candidates, coeffs))))


def _solve_on_grid(n: int, objective: np.ndarray, grid: np.ndarray, sigma: Optional[float],
                   equality: Optional[np.ndarray]) -> Tuple[np.ndarray, float]:
    basis, pivot = _elimination(n, equality)
    vander = C.chebvander(grid, n) @ basis
    a_ub = np.vstack((vander, -vander))
    b_ub = np.ones(2 * len(grid))

    bounds = [(None, None)] * basis.shape[1]
    if sigma is not None:
        cap = sigma / sigma_n(n)
        if pivot == n:
            a_ub = np.vstack((a_ub, basis[n], -basis[n]))
            b_ub = np.concatenate((b_ub, [cap, cap]))
        else:
            col = n if pivot is None else n - 1
            bounds[col] = (-cap, cap)

    reduced = basis.T @ objective
    scale = float(np.max(np.abs(reduced))) or 1.0
    result = linprog(-reduced / scale, A_ub=a_ub, b_ub=b_ub, bounds=bounds,
                     method=LP_METHOD, options=LP_OPTIONS)
    if result.status != 0:
        raise ConvergenceError(f"LP solve failed for n={n} on {len(grid)} points: {result.message}",
                               iterations=int(getattr(result, "nit", 0)))
    coeffs = basis @ result.x
    return coeffs, float(objective @ coeffs)


def _solve_refined(n: int, k: int, x: float, objective: np.ndarray, sigma: Optional[float],
                   equality: Optional[np.ndarray], grid_size: int, refine: bool) -> ExtremalLPSolution:
    size = grid_size
    grid = cheb_grid(size)
    coeffs, value = _solve_on_grid(n, objective, grid, sigma, equality)
    refinements = 0
    while refine and 2 * size - 1 <= max_lp_grid():
        size = 2 * size - 1
        grid = cheb_grid(size)
        new_coeffs, new_value = _solve_on_grid(n, objective, grid, sigma, equality)
        change = abs(new_value - value)
        coeffs, value = new_coeffs, new_value
        refinements += 1
        logger.debug(f"LP n={n} k={k} x={x:.6g}: grid {size}, objective {value:.12g}, change {change:.3e}")
        if change <= REFINE_TOL * max(1.0, abs(value)):
            break

    values = C.chebval(grid, coeffs)
    active = tuple(int(j) for j in np.flatnonzero(np.abs(values) >= 1.0 - ACTIVE_TOL))
    coeffs = np.array(coeffs)
    coeffs.setflags(write=False)
    return ExtremalLPSolution(
        n=n, k=k, x=float(x), sigma=UNCONSTRAINED if sigma is None else float(sigma),
        grid=grid, coeffs=coeffs, objective=value,
        certified_lower=value / max(1.0, _sup_norm(coeffs)), active=active, refinements=refinements,
    )


# ====================================================================================================
# SECTION 4: POINTWISE AND SCHUR PROBLEMS
# ====================================================================================================

def _check_oracle_args(n: int, k: int, x: float, grid_size: int, max_degree: int = MAX_ORACLE_DEGREE) -> None:
    require(1 <= n <= max_degree, f"The LP oracle covers 1 <= n <= {max_degree}, got {n}.")
    require(0 <= k <= n, f"Derivative order must satisfy 0 <= k <= n, got k={k}.")
    require(-1.0 <= x <= 1.0, f"x must lie in [-1, 1], got {x}.")
    require(grid_size >= MIN_GRID, f"grid_size must be at least {MIN_GRID}, got {grid_size}.")


def lp_pointwise(n: int, k: int, x: float, sigma: Optional[float] = None,
                 grid_size: int = DEFAULT_LP_GRID, refine: bool = True) -> ExtremalLPSolution:
    """
    sup p^(k)(x) over degree-n polynomials with |p| <= 1 on the grid and |p^(n)| <= sigma.

    Args:
        n (int): Degree, at most 8.
        k (int): Derivative order.
        x (float): Evaluation point.
        sigma (Optional[float]): Bound on the n-th derivative; None leaves it free.
        grid_size (int): Initial grid size G.
        refine (bool): Double G (nested) until the objective settles or the grid cap is hit.

    Returns:
        ExtremalLPSolution: The optimal polynomial and objective.
    """
    _check_oracle_args(n, k, x, grid_size)
    if sigma is not None:
        sig = float(sigma_n(n))
        require(0.0 <= sigma <= sig * (1.0 + 1e-12), f"sigma must lie in [0, {sig}], got {sigma}.")
        sigma = min(float(sigma), sig)
    return _solve_refined(n, k, x, _derivative_functional(n, k, x), sigma, None, grid_size, refine)


def lp_schur(n: int, k: int, x0: float, grid_size: int = DEFAULT_LP_GRID,
             refine: bool = True) -> ExtremalLPSolution:
    """sup p^(k)(x0) over the unit ball subject to p^(k+1)(x0) = 0."""
    _check_oracle_args(n, k, x0, grid_size, MAX_SCHUR_DEGREE)
    require(1 <= k <= n - 1, f"lp_schur needs 1 <= k <= n-1, got (n={n}, k={k}).")
    equality = _derivative_functional(n, k + 1, x0)
    return _solve_refined(n, k, x0, _derivative_functional(n, k, x0), None, equality, grid_size, refine)


def _parallel_map(func, items: Sequence) -> List:
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        return list(pool.map(func, items))


def karlin_profile(n: int, k: int, sigma: Optional[float], X: Optional[Sequence[float]] = None,
                   grid_size: int = PROFILE_GRID) -> KarlinProfile:
    """
    LP values of m_k(x, sigma) over an x-grid in [0, 1] on one fixed constraint grid,
    and whether their maximum sits at x = 1.
    """
    xs = np.linspace(0.0, 1.0, PROFILE_POINTS) if X is None else np.asarray(X, dtype=float)
    require(len(xs) >= PROFILE_POINTS, f"karlin_profile needs at least {PROFILE_POINTS} points, got {len(xs)}.")
    require(np.all((xs >= 0.0) & (xs <= 1.0)), "karlin_profile uses x in [0, 1] (even symmetry).")
    if not np.any(xs == 1.0):
        xs = np.append(xs, 1.0)

    solutions = _parallel_map(lambda x: lp_pointwise(n, k, float(x), sigma, grid_size, refine=False), xs)
    points = tuple((float(x), s.objective) for x, s in zip(xs, solutions))
    best_x, best = max(points, key=lambda p: p[1])
    at_one = max(v for x, v in points if x == 1.0)
    profile = KarlinProfile(n=n, k=k, sigma=UNCONSTRAINED if sigma is None else float(sigma),
                            points=points, argmax=best_x,
                            max_at_endpoint=leq_with_slack(best, at_one, PROFILE_SLACK))
    if not profile.max_at_endpoint:
        logger.warning(f"Karlin profile (n={n}, k={k}, sigma={sigma}) peaks at x = {best_x}, not at 1.")
    return profile


def concavity_in_sigma(n: int, k: int, x: float, sigma_grid: Sequence[float],
                       grid_size: int = DEFAULT_LP_GRID) -> bool:
    """True iff every LP value on the sigma-grid lies on or above the chord of its neighbours."""
    sigmas = np.sort(np.asarray(sigma_grid, dtype=float))
    require(len(sigmas) >= 5, f"concavity_in_sigma needs at least 5 sigma values, got {len(sigmas)}.")
    values = np.array(_parallel_map(lambda s: lp_pointwise(n, k, x, float(s), grid_size).objective, sigmas))
    weights = (sigmas[1:-1] - sigmas[:-2]) / (sigmas[2:] - sigmas[:-2])
    chord = (1.0 - weights) * values[:-2] + weights * values[2:]
    violation = float(np.max(chord - values[1:-1]))
    tolerance = CONCAVITY_TOL * max(1.0, float(np.max(np.abs(values))))
    logger.debug(f"Concavity (n={n}, k={k}, x={x}): worst chord excess {violation:.3e}")
    return violation <= tolerance


def schur_profile(n: int, k: int, X: Optional[Sequence[float]] = None,
                  grid_size: int = PROFILE_GRID) -> SchurProfile:
    """
    lp_schur over an x0-grid in [0, 1], always including x0 = 1 and the zeros of T_n^(k+1)
    in [0, 1]. The expected maximum is max(|T_n^(k)(omega_k)|, |Z_n^(k)(1, theta_k)|).
    """
    require(n >= 3 and 1 <= k <= n - 2, f"schur_profile needs 1 <= k <= n-2, got (n={n}, k={k}).")
    xs = np.linspace(0.0, 1.0, PROFILE_POINTS) if X is None else np.asarray(X, dtype=float)
    zeros = [z for z in chebyshev.deriv_zeros(n, k) if 0.0 <= z <= 1.0]
    xs = np.unique(np.concatenate((xs, zeros, [1.0])))

    solutions = _parallel_map(lambda x0: lp_schur(n, k, float(x0), grid_size, refine=False), xs)
    points = tuple((float(x0), s.objective) for x0, s in zip(xs, solutions))
    best_x, best = max(points, key=lambda p: p[1])

    _, z = zolotarev.theta_for_endpoint(n, k)
    expected = max(chebyshev.abs_deriv_at_omega(n, k), abs(zolotarev.zolotarev_deriv_at(z, k, 1.0)))
    return SchurProfile(n=n, k=k, points=points, argmax=best_x, max_value=best, expected=expected)


def schur_constant_ratio(n: int, grid_size: int = DEFAULT_LP_GRID) -> float:
    """lp_schur(n, 1, 1) / n^2, to compare with the classical corridor (0.217, 0.465)."""
    return lp_schur(n, 1, 1.0, grid_size).objective / n ** 2


# ====================================================================================================
# SECTION 5: THE LAST DERIVATIVE (k = n-1)
# ====================================================================================================

def _stretched_closed_forms(n: int, t: float) -> Tuple[Optional[float], Optional[float]]:
    if n == 2:
        return (1.0 + t) / 2.0, (1.0 + t) / 2.0
    if n == 3:
        return (2.0 + t) / 3.0, (2.0 + 2.0 * t) / 3.0
    if n == 4:
        return (math.sqrt(2.0) + 1.0) * (1.0 + t) / 4.0, (3.0 + 3.0 * t) / 4.0
    return None, None


def last_derivative_case(n: int, sigma: float, with_oracle: bool = True,
                         grid_size: int = DEFAULT_LP_GRID) -> LastDerivativeReport:
    """
    With tau the alternation points of Z_n(., sigma) and w(x) = prod (x - tau_i):
    D = Z^(n-1)(1) - (sigma/n!) w^(n-1)(1), Omega = |w^(n-1)(1)|/n!,
    c1 = mean |tau_i| and c2 = 1 - mean tau_i.
    """
    require(2 <= n <= 6, f"last_derivative_case covers 2 <= n <= 6, got {n}.")
    sig = float(sigma_n(n))
    require(0.0 <= sigma <= sig * (1.0 + 1e-12), f"sigma must lie in [0, {sig}], got {sigma}.")
    sigma = min(float(sigma), sig)

    z = zolotarev.solve_zolotarev(n, sigma)
    tau = np.asarray(z.alternation)
    w = C.chebfromroots(tau)
    w_top = float(C.chebval(1.0, C.chebder(w, n - 1)))
    z_top = zolotarev.zolotarev_deriv_at(z, n - 1, 1.0)
    n_factorial = math.factorial(n)

    stretch_t = c1_closed = c2_closed = None
    if z.regime in (zolotarev.REGIME_STRETCHED, zolotarev.REGIME_CHEBYSHEV):
        _, stretch_t = zolotarev.stretched_parameter(n, sigma)
        c1_closed, c2_closed = _stretched_closed_forms(n, stretch_t)

    oracle_value = lp_pointwise(n, n - 1, 1.0, sigma, grid_size).objective if with_oracle else None
    return LastDerivativeReport(
        n=n, sigma=sigma, regime=z.regime,
        d_value=z_top - sigma / n_factorial * w_top,
        omega_value=abs(w_top) / n_factorial,
        c1=float(np.mean(np.abs(tau))), c2=float(1.0 - np.mean(tau)),
        zolotarev_value=z_top, oracle_value=oracle_value,
        stretch_t=stretch_t, c1_closed=c1_closed, c2_closed=c2_closed,
    )


def interpolation_identity_residual(n: int, sigma: float) -> float:
    """
    Max coefficient difference between the degree-(n-1) interpolant of Z_n(., sigma) at its
    alternation points and Z_n - (sigma/n!) w.
    """
    z = zolotarev.solve_zolotarev(n, sigma)
    tau = np.asarray(z.alternation)
    interpolant = C.chebfit(tau, z(tau), n - 1)
    difference = C.chebsub(z.coeffs, C.chebfromroots(tau) * (sigma / math.factorial(n)))
    difference = np.pad(difference, (0, n + 1 - len(difference)))
    return float(max(np.max(np.abs(difference[:n] - interpolant)), abs(difference[n])))


def trig_sum_bound(n: int) -> TrigSumReport:
    """sum_{i<m} cos(i x) <= 1/2 + 1/(2 sin(pi/(2n))) for m = floor(n/2), x in {pi/n, pi/(n-1)}."""
    require(n >= 2, f"trig_sum_bound needs n >= 2, got {n}.")
    m = n // 2
    lhs = max(float(np.sum(np.cos(np.arange(m) * x))) for x in (math.pi / n, math.pi / (n - 1)))
    return TrigSumReport(n=n, lhs=lhs, rhs=0.5 + 0.5 / math.sin(math.pi / (2 * n)))
