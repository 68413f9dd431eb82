# modules/cli.py
# This module is the command-line front end of the Extremal Polynomial Suite.
# Each subcommand runs one sweep over (n, k, sigma) tuples, collects the rows into a
# pandas DataFrame with a fixed schema, and maps the verdicts to a process exit code.

import argparse
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from dotenv import dotenv_values

from modules import bounds, chebyshev, halfline, oracle, zolotarev
from modules.shared_utils import (
    MSG_INCONCLUSIVE,
    MSG_NUMERIC_FAILURE,
    MSG_USAGE,
    MSG_VERDICT_FAILED,
    ConvergenceError,
    ParameterRangeError,
    WitnessError,
    leq_with_slack,
    require,
    sigma_n,
    thread_count,
    truncate_2dp,
)

logger = logging.getLogger(__name__)

# ====================================================================================================
# SECTION 1: CONSTANTS
# ====================================================================================================

# 1.1 Exit codes
EXIT_OK = 0
EXIT_FALSIFIED = 2
EXIT_USAGE = 64
EXIT_NUMERIC = 70

# 1.2 Report schema
BASE_COLUMNS = ["n", "k", "sigma_or_m", "value", "bound_kind", "verdict", "provenance"]
SORT_COLUMNS = ["n", "k", "sigma_or_m", "bound_kind"]
FLOAT_FORMAT = "%.6g"
JSON_PRECISION = 6

PROVENANCE_CLOSED_FORM = "closed-form"
PROVENANCE_LP = "lp-oracle"
PROVENANCE_WITNESS = "witness-verified"
PROVENANCE_NEWTON = "newton"

FORMATS = ("csv", "json", "pretty")

# 1.3 Per-command defaults
DEFAULT_N_RANGE = {
    "tables-gamma": "4..15",
    "tables-alpha": "4..15",
    "tables-theorem2": "4..30",
    "verify-karlin": "4..8",
    "zolotarev": "2..8",
    "schur": "3..12",
    "halfline": "3..15",
    "oracle": "2..6",
    "chebyshev": "2..15",
}
DEFAULT_SIGMA_POINTS = {"verify-karlin": 21, "oracle": 11, "zolotarev": 41}
DEFAULT_TOLERANCE = {"zolotarev": 1e-10, "schur": 1e-4, "oracle": 1e-5}
KARLIN_PROFILE_FRACTIONS = (0.25, 0.5, 0.75, 1.0)
KARLIN_PROFILE_MAX_N = 6
SCHUR_PROFILE_MAX_N = 8
WIDE_COMMANDS = ("tables-gamma", "tables-alpha")

CONFIG_HELP = """
config file:
  --config PATH reads a flat key=value file; keys are the long flag names with
  dashes or underscores, for example

      n=4..15
      k=1,2
      sigma_points=21
      format=pretty

  Flags given on the command line win over the file, the file wins over defaults.

environment:
  EXTREMAL_POLY_THREADS    caps worker threads for sweeps
  EXTREMAL_POLY_LOG_LEVEL  root log level (default INFO)
  EXTREMAL_POLY_MAX_GRID   largest LP grid reached by refinement (default 16001)

exit codes: 0 ok, 2 falsified verdict, 64 usage error, 70 numeric failure
"""


# ====================================================================================================
# SECTION 2: RUN CONFIGURATION
# ====================================================================================================

@dataclass(frozen=True)
class RunConfig:
    """Validated options of one CLI invocation."""

    command: str
    n_range: Tuple[int, ...]
    k_range: Optional[Tuple[int, ...]] = None
    sigma_points: Optional[int] = None
    grid_size: Optional[int] = None
    tolerance: Optional[float] = None
    output: Optional[str] = None
    format: str = "csv"
    threads: Optional[int] = None
    wide: bool = False
    theta: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        require(self.command in COMMANDS, f"Unknown command {self.command!r}.")
        require(len(self.n_range) > 0, "--n selects no degrees.")
        require(self.k_range is None or len(self.k_range) > 0, "--k selects no orders.")
        require(self.tolerance is None or self.tolerance > 0.0, f"--tolerance must be positive, got {self.tolerance}.")
        require(self.grid_size is None or self.grid_size >= oracle.MIN_GRID,
                f"--grid-size must be at least {oracle.MIN_GRID}, got {self.grid_size}.")
        require(self.sigma_points is None or self.sigma_points >= 2,
                f"--sigma-points must be at least 2, got {self.sigma_points}.")
        require(self.threads is None or self.threads >= 1, f"--threads must be positive, got {self.threads}.")
        require(self.format in FORMATS, f"--format must be one of {FORMATS}, got {self.format!r}.")

    def sigma_count(self) -> int:
        return self.sigma_points or DEFAULT_SIGMA_POINTS.get(self.command, 21)

    def tol(self) -> float:
        return self.tolerance or DEFAULT_TOLERANCE.get(self.command, 1e-10)

    def workers(self) -> int:
        return self.threads or thread_count()

    def selects_k(self, k: int) -> bool:
        return self.k_range is None or k in self.k_range


def parse_int_range(text: str) -> Tuple[int, ...]:
    """Parses "4..15", "4" or "4,5,7" into a sorted tuple of integers."""
    items = set()
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                low, high = part.split("..", 1)
                items.update(range(int(low), int(high) + 1))
            else:
                items.add(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid integer range {text!r}")
    return tuple(sorted(items))


def parse_float_list(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in str(text).split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list {text!r}")


# ====================================================================================================
# SECTION 3: ARGUMENT PARSING
# ====================================================================================================

class UsageExitParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = UsageExitParser(
        prog="extremal-poly",
        description="Extremal polynomials: tables, bound verification and an LP oracle.",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="Sweep to run.")
    parser.add_argument("--n", dest="n_range", type=parse_int_range, default=None,
                        help='Degrees, e.g. "4..15", "4" or "4,5" (default depends on the command).')
    parser.add_argument("--k", dest="k_range", type=parse_int_range, default=None,
                        help="Derivative orders (default: every valid order).")
    parser.add_argument("--sigma-points", dest="sigma_points", type=int, default=None,
                        help="Points of the sigma (or theta) grid.")
    parser.add_argument("--grid-size", dest="grid_size", type=int, default=None,
                        help="LP constraint grid size (at least 101).")
    parser.add_argument("--tolerance", type=float, default=None, help="Relative tolerance of the verdicts.")
    parser.add_argument("--theta", type=parse_float_list, default=None,
                        help="Comma-separated theta values for the zolotarev command.")
    parser.add_argument("--output", default=None, help="Output file (default: stdout).")
    parser.add_argument("--format", choices=FORMATS, default="csv", help="Output format.")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads for the sweeps.")
    parser.add_argument("--wide", action="store_true", help="k x n grid layout for the table commands.")
    parser.add_argument("--config", default=None, help="key=value file with defaults for these flags.")
    return parser


def _config_defaults(path: str, parser: argparse.ArgumentParser) -> Dict[str, Any]:
    if not os.path.isfile(path):
        parser.error(f"config file {path!r} not found")
    known = {action.dest for action in parser._actions} - {"help", "command", "config"}
    aliases = {"n": "n_range", "k": "k_range"}
    defaults = {}
    for key, value in dotenv_values(path).items():
        dest = key.strip().lower().replace("-", "_")
        dest = aliases.get(dest, dest)
        if dest not in known:
            parser.error(f"unknown key {key!r} in config file {path!r}")
        if value is None:
            continue
        if dest == "wide":
            defaults[dest] = value.strip().lower() in ("1", "true", "yes", "on")
        else:
            defaults[dest] = value
    logger.debug(f"Config file {path} supplies {sorted(defaults)}")
    return defaults


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """
    Builds a RunConfig from argv. A --config file only replaces defaults, so flags on the
    command line take precedence.

    Raises:
        SystemExit: With code 64 on any usage error.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()

    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config:
        # argparse applies each flag's type to string defaults
        parser.set_defaults(**_config_defaults(known.config, parser))

    args = parser.parse_args(argv)
    n_range = args.n_range if args.n_range is not None else parse_int_range(DEFAULT_N_RANGE[args.command])
    try:
        return RunConfig(
            command=args.command, n_range=n_range, k_range=args.k_range,
            sigma_points=args.sigma_points, grid_size=args.grid_size, tolerance=args.tolerance,
            output=args.output, format=args.format, threads=args.threads, wide=bool(args.wide),
            theta=args.theta,
        )
    except ParameterRangeError as e:
        parser.error(str(e))


# ====================================================================================================
# SECTION 4: ROW HELPERS
# ====================================================================================================

def _row(n: int, k: int, sigma_or_m: float, value: float, bound_kind: str, verdict: str,
         provenance: str, **extras) -> Dict[str, Any]:
    row = {"n": int(n), "k": int(k), "sigma_or_m": float(sigma_or_m), "value": float(value),
           "bound_kind": bound_kind, "verdict": verdict, "provenance": provenance}
    row.update(extras)
    return row


def _label(flag: bool) -> str:
    return "true" if flag else "false"


def _sweep(config: RunConfig, func: Callable, tasks: Sequence) -> List[Dict[str, Any]]:
    """Runs func over the tasks on a thread pool and flattens the returned row lists."""
    with ThreadPoolExecutor(max_workers=config.workers()) as pool:
        results = list(pool.map(func, tasks))
    return [row for rows in results for row in rows]


def _orders(config: RunConfig, n: int, highest: int) -> List[int]:
    return [k for k in range(1, highest + 1) if config.selects_k(k)]


# ====================================================================================================
# SECTION 5: COMMANDS
# ====================================================================================================

def cmd_tables_gamma(config: RunConfig) -> List[Dict[str, Any]]:
    """gamma_{n,k} from the certified half-line witnesses, with the proven (alpha <= gamma) column."""
    rows = []
    for entry in halfline.gamma_table(config.n_range):
        if not config.selects_k(entry.k):
            continue
        proven = entry.status == halfline.STATUS_TRUE and leq_with_slack(bounds.alpha_table(entry.n, entry.k), entry.gamma)
        rows.append(_row(entry.n, entry.k, entry.m, entry.gamma, "gamma", entry.status, PROVENANCE_WITNESS,
                         printed=truncate_2dp(entry.gamma), floor=entry.floor, proven=proven))
    return rows


def cmd_tables_alpha(config: RunConfig) -> List[Dict[str, Any]]:
    """alpha_{n,k}; cells claimed proven must satisfy alpha <= gamma, the others are labelled unproven."""
    rows = []
    for n in config.n_range:
        require(n >= 4, f"tables-alpha needs n >= 4, got {n}.")
        for k in _orders(config, n, n - 2):
            alpha = bounds.alpha_table(n, k)
            gamma, _ = bounds.spline_gamma(n, k)
            proven = leq_with_slack(alpha, gamma)
            claimed = bounds.in_theorem3_range(n, k) or (n == 4 and k <= 2)
            verdict = "true" if proven else ("false" if claimed else bounds.VERDICT_UNPROVEN)
            rows.append(_row(n, k, 0, alpha, "alpha", verdict, PROVENANCE_CLOSED_FORM,
                             printed=truncate_2dp(alpha), gamma=gamma, proven=proven))
    return rows


def cmd_tables_theorem2(config: RunConfig) -> List[Dict[str, Any]]:
    """
    The k = 2 spline comparison per degree: max(alpha_{n,2}, beta_{n,2}) against gamma_{n,2}.
    beta is reported as NaN for n = 4, where only the near-endpoint estimate applies.
    """
    rows = []
    for entry in bounds.theorem2_table(config.n_range):
        beta = entry["beta"]
        value = max(entry["alpha"], beta if beta is not None else 0.0)
        rows.append(_row(entry["n"], 2, 0, value, "theorem2", _label(entry["verdict"]), entry["provenance"],
                         alpha=entry["alpha"], beta=beta if beta is not None else math.nan, gamma=entry["gamma"]))
    return rows


def _report_row(report: bounds.BoundReport, sigma_value: float, bound_kind: str) -> Dict[str, Any]:
    provenance = PROVENANCE_WITNESS if report.sigma == bounds.SPLINE_CASE and report.n <= 15 else PROVENANCE_CLOSED_FORM
    return _row(report.n, report.k, sigma_value, max(report.A, report.Astar), bound_kind,
                report.verdict_label, provenance, A=report.A, Astar=report.Astar, B=report.B,
                interior_kind=report.interior_kind)


def cmd_verify_karlin(config: RunConfig) -> List[Dict[str, Any]]:
    """
    Polynomial-case comparisons on a sigma-grid, the spline-case comparison at sigma_n,
    and for n <= 6 the LP profile of m_k(., sigma) at four sigma levels.
    """
    tasks = []
    for n in config.n_range:
        require(n >= 4, f"verify-karlin needs n >= 4, got {n}.")
        tasks.extend(("bounds", n, k) for k in _orders(config, n, n - 2))
        if n <= KARLIN_PROFILE_MAX_N:
            tasks.extend(("profile", n, k) for k in _orders(config, n, n - 1))
    grid_size = config.grid_size or oracle.PROFILE_GRID

    def run_task(task) -> List[Dict[str, Any]]:
        kind, n, k = task
        sig = float(sigma_n(n))
        if kind == "bounds":
            sigmas = np.linspace(0.0, sig, config.sigma_count())
            rows = [_report_row(r, r.sigma, "polynomial") for r in bounds.karlin_polynomial_check(n, k, sigmas)]
            rows.append(_report_row(bounds.karlin_spline_check(n, k), sig, "spline"))
            return rows
        rows = []
        for fraction in KARLIN_PROFILE_FRACTIONS:
            profile = oracle.karlin_profile(n, k, fraction * sig, grid_size=grid_size)
            best = max(v for _, v in profile.points)
            rows.append(_row(n, k, fraction * sig, best, "lp-profile", _label(profile.max_at_endpoint),
                             PROVENANCE_LP, argmax=profile.argmax))
        return rows

    return _sweep(config, run_task, tasks)


def cmd_zolotarev(config: RunConfig) -> List[Dict[str, Any]]:
    """Monomial coefficients of Z_n(., theta), one row per power, with the equioscillation check."""
    rows = []
    for n in config.n_range:
        require(n >= 2, f"zolotarev needs n >= 2, got {n}.")
        sig = float(sigma_n(n))
        thetas = config.theta if config.theta is not None else tuple(np.linspace(-sig, sig, config.sigma_count()))
        for z in zolotarev.zolotarev_family(n, thetas):
            residual = z.equioscillation_residual()
            ok = residual <= config.tol() and z.max_abs_on_grid() <= 1.0 + 1e-9
            provenance = PROVENANCE_NEWTON if z.regime == zolotarev.REGIME_PROPER else PROVENANCE_CLOSED_FORM
            monomial = np.pad(np.polynomial.chebyshev.cheb2poly(z.coeffs), (0, n + 1))[: n + 1]
            for power, coefficient in enumerate(monomial):
                rows.append(_row(n, power, z.theta, coefficient, "monomial-coefficient", _label(ok), provenance,
                                 regime=z.regime, residual=residual))
    return rows


def cmd_schur(config: RunConfig) -> List[Dict[str, Any]]:
    """
    Endpoint constants of Z_n^(k)(1, theta_k) against their closed-form estimates, the
    n^2/2 bound for k = 1 and, for n <= 8, the x0-profile of the Schur-constrained LP.
    """
    grid_size = config.grid_size or oracle.PROFILE_GRID
    tasks = [(n, k) for n in config.n_range for k in _orders(config, n, n - 2)]
    for n, _ in tasks:
        require(n >= 3, f"schur needs n >= 3, got {n}.")

    def run_task(task) -> List[Dict[str, Any]]:
        n, k = task
        rows = []
        constants = zolotarev.schur_endpoint_constants(n, k)
        value = constants["value"]
        for name in ("p1", "p2a", "p2b", "p3"):
            bound = constants[name]
            if bound is None:
                continue
            rows.append(_row(n, k, constants["theta"], value, f"schur-{name}", _label(leq_with_slack(value, bound, 1e-9)),
                             PROVENANCE_CLOSED_FORM, bound=bound))
        if k == 1 and n <= oracle.MAX_SCHUR_DEGREE:
            ratio = oracle.schur_constant_ratio(n, config.grid_size or oracle.DEFAULT_LP_GRID)
            low, high = oracle.SCHUR_CORRIDOR
            rows.append(_row(n, k, 0, ratio, "schur-half", _label(ratio < 0.5), PROVENANCE_LP,
                             in_corridor=low <= ratio <= high))
        if n > SCHUR_PROFILE_MAX_N:
            return rows
        profile = oracle.schur_profile(n, k, grid_size=grid_size)
        rows.append(_row(n, k, 0, profile.max_value, "schur-profile", _label(profile.relative_gap <= config.tol()),
                         PROVENANCE_LP, argmax=profile.argmax, expected=profile.expected))
        return rows

    return _sweep(config, run_task, tasks)


def cmd_halfline(config: RunConfig) -> List[Dict[str, Any]]:
    """Endpoint-maximum certificates of the witnesses and the gamma floors for k = 1, 2."""
    rows = []
    for n in config.n_range:
        if 3 <= n <= 15:
            m = halfline.witness_degree_excess(n)
            certificate = halfline.certificate_for(n, m)
            rows.append(_row(n, n, m, certificate.margin, "endpoint-max", certificate.status, PROVENANCE_WITNESS,
                             endpoint_value=certificate.endpoint_value, best_interior=certificate.best_interior,
                             best_interior_x=certificate.best_interior_x, error_bound=certificate.error_bound,
                             near_zone=certificate.near_zone))
        for k in _orders(config, n, min(2, n - 1)):
            floor = halfline.gamma_floor(n, k)
            rows.append(_row(n, k, 0, floor, "gamma-floor", _label(floor > (2.0 / math.e) ** (2 * k)),
                             PROVENANCE_CLOSED_FORM))
    return rows


def cmd_oracle(config: RunConfig) -> List[Dict[str, Any]]:
    """lp_pointwise(n, k, 1, sigma) against Z_n^(k)(1, sigma), plus the k = n-1 interpolation quantities."""
    grid_size = config.grid_size or oracle.DEFAULT_LP_GRID
    tasks = []
    for n in config.n_range:
        require(2 <= n <= oracle.MAX_ORACLE_DEGREE, f"oracle covers 2 <= n <= {oracle.MAX_ORACLE_DEGREE}, got {n}.")
        sig = float(sigma_n(n))
        for sigma in np.linspace(0.0, sig, config.sigma_count()):
            tasks.extend(("pointwise", n, k, float(sigma)) for k in _orders(config, n, n - 1))
            if n <= 6 and config.selects_k(n - 1):
                tasks.append(("last", n, n - 1, float(sigma)))

    def run_task(task) -> List[Dict[str, Any]]:
        kind, n, k, sigma = task
        if kind == "pointwise":
            solution = oracle.lp_pointwise(n, k, 1.0, sigma, grid_size)
            exact = zolotarev.zolotarev_deriv_at(zolotarev.solve_zolotarev(n, sigma), k, 1.0)
            error = abs(solution.objective - exact) / max(1.0, abs(exact))
            return [_row(n, k, sigma, solution.objective, "lp-vs-zolotarev", _label(error <= config.tol()),
                         PROVENANCE_LP, zolotarev=exact, rel_error=error, n_active=len(solution.active),
                         grid=solution.grid_size)]
        report = oracle.last_derivative_case(n, sigma, with_oracle=False)
        ok = report.d_value > 0.0 and report.c1_le_c2
        return [_row(n, k, sigma, report.d_value, "last-derivative", _label(ok), PROVENANCE_CLOSED_FORM,
                     c1=report.c1, c2=report.c2, omega=report.omega_value, regime=report.regime)]

    return _sweep(config, run_task, tasks)


def cmd_chebyshev(config: RunConfig) -> List[Dict[str, Any]]:
    """Exact endpoint derivatives and the Eriksson and Erdos-Szego estimates at omega_k."""
    rows = []
    for n in config.n_range:
        require(n >= 2, f"chebyshev needs n >= 2, got {n}.")
        for k in _orders(config, n, n):
            rows.append(_row(n, k, 0, float(chebyshev.endpoint_deriv(n, k)), "endpoint", "true",
                             PROVENANCE_CLOSED_FORM, exact=str(chebyshev.endpoint_value(n, k))))
            if k > n - 2:
                continue
            w = chebyshev.omega(n, k)
            ratio = chebyshev.abs_deriv_at_omega(n, k) / chebyshev.endpoint_value(n, k)
            bound = 1.0 / (2 * k + 1)
            refined = chebyshev.eriksson_weight(k, w) * bound
            rows.append(_row(n, k, 0, ratio, "eriksson", _label(leq_with_slack(ratio, bound, 1e-9)),
                             PROVENANCE_CLOSED_FORM, omega=w, bound=bound,
                             refined_holds=leq_with_slack(ratio, refined, 1e-9)))
            if (k == 1 and n >= 5) or (k == 2 and n >= 10):
                limit = chebyshev.ERDOS_SZEGO_RATIO if k == 1 else chebyshev.SECOND_DERIVATIVE_RATIO
                rows.append(_row(n, k, 0, ratio, "erdos-szego", _label(leq_with_slack(ratio, limit, 1e-12)),
                                 PROVENANCE_CLOSED_FORM, omega=w, bound=limit))
    return rows


COMMANDS: Dict[str, Callable[[RunConfig], List[Dict[str, Any]]]] = {
    "tables-gamma": cmd_tables_gamma,
    "tables-alpha": cmd_tables_alpha,
    "tables-theorem2": cmd_tables_theorem2,
    "verify-karlin": cmd_verify_karlin,
    "zolotarev": cmd_zolotarev,
    "schur": cmd_schur,
    "halfline": cmd_halfline,
    "oracle": cmd_oracle,
    "chebyshev": cmd_chebyshev,
}


# ====================================================================================================
# SECTION 6: REPORTING AND DISPATCH
# ====================================================================================================

def build_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    """Rows in the fixed schema, extra columns on the right, sorted independently of scheduling."""
    frame = pd.DataFrame(rows)
    if frame.empty:
        return pd.DataFrame(columns=BASE_COLUMNS)
    extras = [c for c in frame.columns if c not in BASE_COLUMNS]
    frame = frame[BASE_COLUMNS + extras]
    return frame.sort_values(SORT_COLUMNS, kind="mergesort").reset_index(drop=True)


def widen(frame: pd.DataFrame) -> pd.DataFrame:
    """k x n grid of the printed (truncated) values."""
    grid = frame.pivot(index="k", columns="n", values="printed").fillna("")
    grid.columns = [str(c) for c in grid.columns]
    return grid


def render(frame: pd.DataFrame, fmt: str, wide: bool = False) -> str:
    if wide:
        if fmt == "json":
            return frame.reset_index().to_json(orient="records")
        if fmt == "pretty":
            return frame.to_string() + "\n"
        return frame.to_csv(index=True)
    if fmt == "json":
        return frame.to_json(orient="records", double_precision=JSON_PRECISION) + "\n"
    if fmt == "pretty":
        return frame.to_string(index=False) + "\n"
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT)


def exit_status(frame: pd.DataFrame) -> int:
    """2 when any verdict is falsified, else 70 when a certificate was inconclusive, else 0."""
    if frame.empty:
        return EXIT_OK
    if (frame["verdict"] == "false").any():
        return EXIT_FALSIFIED
    if (frame["verdict"] == halfline.STATUS_INCONCLUSIVE).any():
        return EXIT_NUMERIC
    return EXIT_OK


def run(config: RunConfig) -> Tuple[int, pd.DataFrame]:
    """
    Runs the configured command, emits the report and returns the exit status with the frame.

    Returns:
        Tuple[int, pd.DataFrame]: 0 when every verdict holds or is explicitly unproven, 2 when one
        is falsified, 70 when a certificate came back inconclusive.
    """
    logger.info(f"Running {config.command} for n in {list(config.n_range)}")
    frame = build_frame(COMMANDS[config.command](config))
    status = exit_status(frame)

    shown = frame
    wide = config.wide and config.command in WIDE_COMMANDS and not frame.empty
    if config.wide and not wide:
        logger.warning(f"--wide has no effect for {config.command}; writing the long format.")
    if wide:
        shown = widen(frame)
    text = render(shown, config.format, wide)

    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info(f"Wrote {len(frame)} rows to {config.output}")
    else:
        sys.stdout.write(text)

    if status == EXIT_FALSIFIED:
        logger.warning(MSG_VERDICT_FAILED)
    elif status == EXIT_NUMERIC:
        logger.warning(MSG_INCONCLUSIVE)
    logger.info(f"{config.command} finished with {len(frame)} rows, exit status {status}")
    return status, frame


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parses argv, runs the command and maps library errors to exit codes."""
    config = parse_config(argv)
    try:
        status, _ = run(config)
        return status
    except ParameterRangeError as e:
        logger.error(f"Parameter out of range in {config.command}: {e}", exc_info=True)
        print(MSG_USAGE, file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, WitnessError, ArithmeticError, np.linalg.LinAlgError) as e:
        diagnostics = getattr(e, "diagnostics", None)
        logger.error(f"Numeric failure in {config.command}: {e} {diagnostics or ''}", exc_info=True)
        print(MSG_NUMERIC_FAILURE, file=sys.stderr)
        return EXIT_NUMERIC
