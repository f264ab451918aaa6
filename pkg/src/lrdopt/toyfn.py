"""Two-dimensional nonconvex benchmark objective with exact gradients.

The surface is a sum of three squared residuals,

    f(x, y) = (1.5 - x^2 + x*y)^2 + (2.25 - x^2 + x*y^2)^2
              + (2.625 - x^2 + x*y^3)^2,

studied on the box x in [-4, 0], y in [-2, 3]. It has two local minima on
that box; the better one sits near (-0.74, 1.40) (coordinates known to two
decimals), which is the reference target for optimizer path experiments.
A brute-force grid scan (``verify_reference_optimum``) cross-checks that
reference point rather than trusting it.
"""

from dataclasses import dataclass, field

import numpy as np

from .ioutil import write_csv

DOMAIN = ((-4.0, 0.0), (-2.0, 3.0))
REFERENCE_OPTIMUM = (-0.74, 1.40)
DEFAULT_SUCCESS_RADIUS = 0.05


def toy_value(x, y):
    """Objective value; accepts scalars or broadcastable arrays."""
    r1 = 1.5 - x * x + x * y
    r2 = 2.25 - x * x + x * (y * y)
    r3 = 2.625 - x * x + x * (y * y * y)
    return r1 * r1 + r2 * r2 + r3 * r3


def toy_gradient(x, y):
    """Exact partial derivatives (df/dx, df/dy)."""
    y2 = y * y
    y3 = y2 * y
    r1 = 1.5 - x * x + x * y
    r2 = 2.25 - x * x + x * y2
    r3 = 2.625 - x * x + x * y3
    dx = 2.0 * r1 * (y - 2.0 * x) + 2.0 * r2 * (y2 - 2.0 * x) + 2.0 * r3 * (y3 - 2.0 * x)
    # every y-term carries a factor x, so df/dy vanishes identically at x = 0
    dy = 2.0 * r1 * x + 2.0 * r2 * (2.0 * x * y) + 2.0 * r3 * (3.0 * x * y2)
    return dx, dy


@dataclass(frozen=True)
class GridReport:
    """Result of a brute-force scan over a rectangular grid."""

    resolution: tuple
    domain: tuple
    argmin_point: tuple
    argmin_value: float
    reference: tuple
    distance_to_reference: float

    def within(self, radius):
        return self.distance_to_reference <= radius


def verify_reference_optimum(resolution=2000, domain=DOMAIN,
                             reference=REFERENCE_OPTIMUM):
    """Scan an evenly spaced grid and report the argmin.

    Ties break to the lowest flat index (x-major). The grid includes both
    domain endpoints, so a minimizer outside the box shows up as a boundary
    argmin.
    """
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    (x_lo, x_hi), (y_lo, y_hi) = domain
    xs = np.linspace(x_lo, x_hi, resolution[0])
    ys = np.linspace(y_lo, y_hi, resolution[1])
    values = toy_value(xs[:, None], ys[None, :])
    flat = int(np.argmin(values))
    i, j = divmod(flat, resolution[1])
    point = (float(xs[i]), float(ys[j]))
    dist = float(np.hypot(point[0] - reference[0], point[1] - reference[1]))
    return GridReport(
        resolution=tuple(resolution),
        domain=tuple(domain),
        argmin_point=point,
        argmin_value=float(values[i, j]),
        reference=tuple(reference),
        distance_to_reference=dist,
    )


@dataclass
class Trajectory:
    """Recorded descent path: (step, x, y, f) rows, steps strictly increasing."""

    steps: list = field(default_factory=list)
    xs: list = field(default_factory=list)
    ys: list = field(default_factory=list)
    values: list = field(default_factory=list)

    def append(self, step, x, y, value):
        if self.steps:
            if step <= self.steps[-1]:
                raise ValueError(
                    f"trajectory steps must strictly increase: {step} after {self.steps[-1]}"
                )
        elif step != 0:
            raise ValueError(f"trajectory must start at step 0, got {step}")
        self.steps.append(int(step))
        self.xs.append(float(x))
        self.ys.append(float(y))
        self.values.append(float(value))

    def __len__(self):
        return len(self.steps)

    @property
    def final_point(self):
        return (self.xs[-1], self.ys[-1])

    @property
    def final_value(self):
        return self.values[-1]

    def to_csv(self, path):
        rows = zip(self.steps, self.xs, self.ys, self.values)
        write_csv(path, ["step", "x", "y", "f"], rows)


def distance_to_reference(point, reference=REFERENCE_OPTIMUM):
    return float(np.hypot(point[0] - reference[0], point[1] - reference[1]))
