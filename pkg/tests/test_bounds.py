import math

import numpy as np
import pytest

from modules import bounds, chebyshev
from modules.shared_utils import ParameterRangeError, sigma_n

# Printed two-decimal rows of the alpha table: row k lists n = max(4, k + 2) .. 15.
ALPHA_ROWS = {
    1: [0.58, 0.55, 0.54, 0.53, 0.53, 0.52, 0.52, 0.52, 0.51, 0.51, 0.51, 0.51],
    2: [0.63, 0.48, 0.43, 0.40, 0.39, 0.38, 0.37, 0.36, 0.36, 0.36, 0.35, 0.35],
    3: [0.63, 0.44, 0.37, 0.34, 0.32, 0.30, 0.30, 0.29, 0.28, 0.28, 0.28],
    4: [0.64, 0.42, 0.34, 0.30, 0.28, 0.26, 0.25, 0.24, 0.24, 0.23],
    5: [0.65, 0.40, 0.32, 0.28, 0.25, 0.24, 0.22, 0.22, 0.21],
    6: [0.67, 0.40, 0.31, 0.26, 0.24, 0.22, 0.21, 0.20],
    7: [0.68, 0.40, 0.30, 0.25, 0.22, 0.20, 0.19],
    8: [0.69, 0.39, 0.29, 0.24, 0.21, 0.19],
    9: [0.70, 0.39, 0.29, 0.24, 0.21],
    10: [0.71, 0.39, 0.29, 0.23],
    11: [0.72, 0.39, 0.28],
    12: [0.73, 0.39],
    13: [0.74],
}
ALPHA_PRINTED = {
    (n, k): value
    for k, row in ALPHA_ROWS.items()
    for n, value in enumerate(row, start=max(4, k + 2))
}

# Largest k of each column for which alpha_{n,k} <= gamma_{n,k}.
PROVEN_UP_TO = {4: 2, 5: 3, 6: 4, 7: 4, 8: 5, 9: 6, 10: 6, 11: 6, 12: 7, 13: 7, 14: 8, 15: 8}


def matches_printed(value, printed):
    # printed tables truncate; accept rounding as well, and cells sitting on a truncation edge
    return printed - 0.005 <= value <= printed + 0.01 + 1e-4


def test_eta_and_lambda():
    assert bounds.eta(4, 1) == pytest.approx(1 / 6)
    assert bounds.lam(4, 1) == pytest.approx(3 / 8)
    assert bounds.beta_ratio(4, 1) == pytest.approx(9 / 16)


def test_lower_b_interpolates_endpoint_values():
    n, k = 6, 2
    s = float(sigma_n(n))
    assert bounds.lower_B(n, k, 0.0) == pytest.approx(chebyshev.endpoint_value(n - 1, k))
    assert bounds.lower_B(n, k, s) == pytest.approx(chebyshev.endpoint_value(n, k))
    assert bounds.lower_B(n, k, s / 2) == pytest.approx(
        (chebyshev.endpoint_value(n - 1, k) + chebyshev.endpoint_value(n, k)) / 2)


def test_lower_b_rejects_sigma_out_of_range():
    with pytest.raises(ParameterRangeError):
        bounds.lower_B(4, 1, -1.0)
    with pytest.raises(ParameterRangeError):
        bounds.lower_B(4, 1, 2.0 * sigma_n(4))


def test_upper_astar_at_sigma_n():
    assert bounds.upper_Astar(4, 1, float(sigma_n(4))) == pytest.approx(6 * 6 ** 0.25)


def test_upper_astar_flat_below_eta():
    n, k = 7, 3
    s = float(sigma_n(n))
    value = bounds.upper_Astar(n, k, 0.5 * bounds.eta(n, k) * s)
    assert value == pytest.approx(chebyshev.endpoint_value(n - 1, k))


def test_upper_astar_unavailable_for_last_order():
    with pytest.raises(ParameterRangeError):
        bounds.upper_Astar(5, 4, 1.0)


def test_upper_aa_worked_examples():
    assert bounds.upper_AA(4, 1) == pytest.approx((1 / (1 - 1 / math.sqrt(6))) * 32 / (3 * math.sqrt(6)), rel=1e-10)
    assert bounds.upper_AA(4, 1) < 0.46 * 16
    expected = 0.25 * 25 / (1 - 0.5 * math.sqrt(3 / 8))
    assert bounds.upper_AA(5, 1) == pytest.approx(expected, rel=1e-10)
    assert bounds.upper_AA(5, 1) < 0.361 * 25


def test_upper_aa_closed_form_first_derivative():
    for n in range(6, 31):
        value = bounds.upper_AA(n, 1, closed_form=True)
        assert value <= chebyshev.endpoint_value(n, 1) / 2


def test_upper_aa_falls_back_to_closed_form_for_single_zero():
    n, k = 6, 4
    expected = chebyshev.abs_deriv_at_omega(n, k) / (1 - math.sin(math.pi * (k + 1) / (2 * n))) ** k
    assert bounds.upper_AA(n, k) == pytest.approx(expected)


@pytest.mark.parametrize("n", range(4, 16))
def test_tangent_line_check(n):
    for k in range(1, n - 1):
        assert bounds.tangent_line_check(n, k).holds


@pytest.mark.parametrize("n", range(4, 16))
def test_polynomial_case_comparison(n):
    sigmas = np.linspace(0.0, float(sigma_n(n)), 21)
    for k in range(1, n - 1):
        reports = bounds.karlin_polynomial_check(n, k, sigmas)
        assert len(reports) == 21
        assert all(r.verdict_label == "true" for r in reports), (n, k)


def test_polynomial_case_uses_interior_aa_for_first_derivative():
    reports = bounds.karlin_polynomial_check(4, 1, [0.0])
    assert reports[0].interior_kind == bounds.INTERIOR_AA
    assert reports[0].A == pytest.approx(bounds.upper_AA(4, 1))


def test_polynomial_case_needs_degree_four():
    with pytest.raises(ParameterRangeError):
        bounds.karlin_polynomial_check(3, 1, [0.0])


@pytest.mark.parametrize("cell, printed", sorted(ALPHA_PRINTED.items()))
def test_alpha_table_matches_printed(cell, printed):
    assert matches_printed(bounds.alpha_table(*cell), printed)


def test_alpha_table_exact_first_cell():
    assert bounds.alpha_table(4, 1) == pytest.approx(3 / 8 * 6 ** 0.25)


def test_alpha_schur_constants():
    assert bounds.alpha_schur(4, 1) == pytest.approx(6 ** 0.25 / 3)
    assert bounds.alpha_schur(4, 1) < 0.522
    assert bounds.alpha_schur(4, 2) == pytest.approx(0.72, abs=0.01)
    assert chebyshev.SCHUR_P3_LIMIT == pytest.approx(0.229265, abs=1e-6)
    assert bounds.alpha_schur(5, 2) == pytest.approx(0.4995, abs=1e-3)
    for n in range(5, 16):
        assert bounds.alpha_schur(n, 2) <= 0.50
    with pytest.raises(ParameterRangeError):
        bounds.alpha_schur(6, 3)


def test_beta_interior():
    assert bounds.beta_interior(10) == 0.6
    assert bounds.beta_interior(16) == pytest.approx(0.288, abs=0.01)
    values = [bounds.beta_interior(n) for n in range(16, 31)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert max(values) < 0.293


def test_stechkin_constants():
    n, k = 6, 2
    first = math.factorial(k) / math.factorial(2 * k) * (math.factorial(2 * n) / math.factorial(n)) ** (k / n)
    second = math.factorial(2 * n) ** (1 - k / n) / math.factorial(n - k)
    assert bounds.stechkin_lower_C(n, k) == pytest.approx(max(first, second), rel=1e-12)
    assert bounds.stechkin_growth(10, 7) == (3, pytest.approx((10 / 3) ** 3))


def test_theorem3_ranges():
    assert bounds.in_theorem3_range(5, 3)
    assert not bounds.in_theorem3_range(7, 5)
    assert bounds.in_theorem3_range(11, 6)
    assert not bounds.in_theorem3_range(12, 1)


@pytest.mark.parametrize("n", range(4, 16))
def test_proven_cells_match_shading(n):
    for k in range(1, n - 1):
        assert bounds.proven_table_cell(n, k) == (k <= PROVEN_UP_TO[n]), (n, k)


def test_proven_cells_cover_theorem3_range():
    for n in range(5, 12):
        for k in range(1, n - 1):
            if bounds.in_theorem3_range(n, k):
                assert bounds.proven_table_cell(n, k)


@pytest.mark.parametrize("n", range(4, 16))
def test_spline_case_holds_in_proven_range(n):
    for k in range(1, n - 1):
        report = bounds.karlin_spline_check(n, k)
        assert report.sigma == bounds.SPLINE_CASE
        if k <= 2 or bounds.in_theorem3_range(n, k):
            assert report.verdict_label == "true", (n, k)
        else:
            assert report.verdict_label in ("true", "false", "unproven")


def test_spline_case_outside_range_is_unproven_not_false():
    assert bounds.karlin_spline_check(15, 12).verdict_label in ("true", "unproven")


@pytest.mark.parametrize("n, k", [(3, 1), (3, 2), (2, 1), (4, 3), (9, 8), (15, 14)])
def test_spline_case_without_estimate_is_unproven(n, k):
    report = bounds.karlin_spline_check(n, k)
    assert report.verdict_label == "unproven"
    assert not report.in_proven_range
    assert math.isnan(report.B)


def test_spline_case_rejects_orders_outside_degree():
    with pytest.raises(ParameterRangeError):
        bounds.karlin_spline_check(5, 0)
    with pytest.raises(ParameterRangeError):
        bounds.karlin_spline_check(5, 5)


def test_printed_tables_cover_every_cell():
    assert len(ALPHA_PRINTED) == sum(n - 2 for n in range(4, 16))
    assert max(n for n, _ in ALPHA_PRINTED) == 15


def test_theorem2_table():
    rows = {row["n"]: row for row in bounds.theorem2_table(range(4, 31))}
    assert rows[4]["alpha"] == pytest.approx(0.72, abs=0.01)
    assert rows[4]["gamma"] == pytest.approx(0.79, abs=0.01)
    assert rows[4]["beta"] is None
    for n in range(5, 16):
        assert rows[n]["alpha"] <= 0.50
        assert rows[n]["gamma"] >= 0.63
        assert rows[n]["provenance"] == "witness-verified"
    for n in range(16, 31):
        assert rows[n]["beta"] < 0.293 <= rows[n]["gamma"]
        assert rows[n]["provenance"] == "closed-form"
    assert all(row["verdict"] for row in rows.values())
