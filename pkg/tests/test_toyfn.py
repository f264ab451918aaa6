import csv

import numpy as np
import pytest

from lrdopt.gradcheck import central_difference, max_relative_gradient_error, relative_error
from lrdopt.rng import Rng
from lrdopt.toyfn import (
    DOMAIN,
    REFERENCE_OPTIMUM,
    GridReport,
    Trajectory,
    toy_gradient,
    toy_value,
    verify_reference_optimum,
)


def substitution_oracle(x, y):
    """Direct evaluation of the three squared residuals, term by term."""
    t1 = (1.5 - x ** 2 + x * y) ** 2
    t2 = (2.25 - x ** 2 + x * y ** 2) ** 2
    t3 = (2.625 - x ** 2 + x * y ** 3) ** 2
    return t1 + t2 + t3


def test_value_at_origin():
    # x = 0 kills every x-term: 1.5^2 + 2.25^2 + 2.625^2
    assert toy_value(0.0, 0.0) == 14.203125


def test_value_independent_of_y_at_x_zero():
    assert toy_value(0.0, 7.3) == 14.203125
    assert toy_value(0.0, -1.9) == 14.203125


def test_value_at_reference_matches_substitution_oracle():
    x, y = REFERENCE_OPTIMUM
    expected = substitution_oracle(x, y)
    assert toy_value(x, y) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.0726869456, rel=1e-9)


def test_value_nonnegative_everywhere():
    rng = Rng(3).child_named("nonneg")
    (x_lo, x_hi), (y_lo, y_hi) = DOMAIN
    xs = rng.uniform(x_lo, x_hi, (500,))
    ys = rng.uniform(y_lo, y_hi, (500,))
    assert np.all(toy_value(xs, ys) >= 0.0)


def test_gradient_dy_exactly_zero_at_x_zero():
    assert toy_gradient(0.0, 1.0)[1] == 0.0
    assert toy_gradient(0.0, -2.3)[1] == 0.0


def test_gradient_matches_central_differences():
    err = max_relative_gradient_error(Rng(17).child_named("fd"), samples=1000, h=1e-6)
    assert err <= 1e-6


def test_gradient_single_point_fd():
    point = (-1.3, 0.7)
    analytic = np.array(toy_gradient(*point))
    numeric = central_difference(lambda p: toy_value(p[0], p[1]), point, 1e-6)
    assert relative_error(analytic, numeric).max() <= 1e-6


def test_gradient_near_zero_at_grid_minimum():
    # the in-domain minimizer found by the dense scan has a ~0 gradient
    report = verify_reference_optimum(resolution=500)
    gx, gy = toy_gradient(*report.argmin_point)
    assert np.hypot(gx, gy) < 0.5  # coarse: grid spacing limits how exact this is


def test_grid_scan_locates_reference_optimum():
    report = verify_reference_optimum(resolution=400)
    assert isinstance(report, GridReport)
    assert report.within(0.05)
    assert report.argmin_value < 0.1


def test_coarse_grid_argmin_unique_lowest_index():
    report = verify_reference_optimum(resolution=10)
    xs = np.linspace(DOMAIN[0][0], DOMAIN[0][1], 10)
    ys = np.linspace(DOMAIN[1][0], DOMAIN[1][1], 10)
    values = toy_value(xs[:, None], ys[None, :])
    flat = values.ravel()
    best = flat.min()
    first = int(np.flatnonzero(flat == best)[0])
    i, j = divmod(first, 10)
    assert report.argmin_point == (float(xs[i]), float(ys[j]))


def test_shrunken_domain_argmin_on_boundary():
    # exclude the minimizer; the argmin of a continuous function on the
    # remaining box sits on its boundary
    domain = ((-4.0, -2.0), (-2.0, -1.0))
    report = verify_reference_optimum(resolution=200, domain=domain)
    x, y = report.argmin_point
    on_edge = (
        x in (domain[0][0], domain[0][1]) or y in (domain[1][0], domain[1][1])
    )
    assert on_edge


def test_trajectory_contract(tmp_path):
    traj = Trajectory()
    traj.append(0, -2.0, 1.0, toy_value(-2.0, 1.0))
    traj.append(1, -1.9, 1.1, toy_value(-1.9, 1.1))
    with pytest.raises(ValueError):
        traj.append(1, 0.0, 0.0, 0.0)
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["step", "x", "y", "f"]
    assert len(rows) == 3
    assert float(rows[1][1]) == -2.0


def test_trajectory_must_start_at_zero():
    traj = Trajectory()
    with pytest.raises(ValueError):
        traj.append(3, 0.0, 0.0, 0.0)
