"""Classical phase-space densities, their entropy, and area-scaling affine maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import DomainError, GridError
from .phasegrid import PhaseGrid

NORM_TOL = 1e-6
# relative level below which a density counts as outside its support
SUPPORT_FLOOR = 1e-9


@dataclass(frozen=True, eq=False)
class PhaseDistribution:
    """Non-negative density on a :class:`PhaseGrid`, normalized to 1 on the grid."""

    grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise GridError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        if values.min() < 0:
            raise ValueError(f"density has negative value {values.min():.3e}")
        norm = self.grid.integrate(values)
        if abs(norm - 1.0) > NORM_TOL:
            raise GridError(f"density integrates to {norm:.9f}; its support does not fit the grid")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: PhaseGrid, fn) -> "PhaseDistribution":
        """Sample ``fn(X, P)`` on the grid and normalize it."""
        values = np.asarray(fn(*grid.mesh()), dtype=float)
        return cls(grid, values / grid.integrate(values))


@dataclass(frozen=True)
class AffineMap2D:
    """``z -> linear @ z + shift`` acting on phase-space points ``z = (x, p)``."""

    linear: tuple = ((1.0, 0.0), (0.0, 1.0))
    shift: tuple = (0.0, 0.0)

    def __post_init__(self):
        lin = np.array(self.linear, dtype=float)
        if lin.shape != (2, 2):
            raise ValueError("linear part must be 2x2")
        object.__setattr__(self, "linear", tuple(map(tuple, lin)))
        object.__setattr__(self, "shift", tuple(float(s) for s in self.shift))
        if self.det() == 0:
            raise DomainError("affine map is singular")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.linear)

    def det(self) -> float:
        (a, b), (c, d) = self.linear
        return a * d - c * b

    def __call__(self, x, p):
        (a, b), (c, d) = self.linear
        return a * x + b * p + self.shift[0], c * x + d * p + self.shift[1]

    def inverse(self) -> "AffineMap2D":
        inv = np.linalg.inv(self.matrix)
        return AffineMap2D(inv, -inv @ np.array(self.shift))

    def __matmul__(self, other: "AffineMap2D") -> "AffineMap2D":
        """Composition ``self o other``."""
        lin = self.matrix @ other.matrix
        return AffineMap2D(lin, self.matrix @ np.array(other.shift) + np.array(self.shift))

    @classmethod
    def pure_stretch(cls, lam: float) -> "AffineMap2D":
        s = np.sqrt(lam)
        return cls(((s, 0.0), (0.0, s)))

    @classmethod
    def rotation(cls, theta: float) -> "AffineMap2D":
        c, s = np.cos(theta), np.sin(theta)
        return cls(((c, -s), (s, c)))


def shannon_entropy(rho: PhaseDistribution, cell: float = 1.0) -> float:
    """Differential entropy ``-int rho ln(rho * cell)`` by the midpoint rule.

    ``cell`` is the phase-space volume taken as the unit of area; pass
    ``2*pi*hbar`` to measure entropy against a quantum cell.
    """
    v = rho.values
    pos = v > 0
    return float(-np.sum(v[pos] * np.log(v[pos] * cell)) * rho.grid.cell)


def _support_box(rho: PhaseDistribution):
    sig = rho.values > SUPPORT_FLOOR * rho.values.max()
    xs = rho.grid.x[np.any(sig, axis=1)]
    ps = rho.grid.p[np.any(sig, axis=0)]
    return xs.min(), xs.max(), ps.min(), ps.max()


def apply_map(rho: PhaseDistribution, R: AffineMap2D, target: PhaseGrid | None = None) -> PhaseDistribution:
    """Push a density forward through ``R``: ``rho'(z) = rho(R^-1 z) / |det R|``.

    The source is sampled at the pre-images of the target nodes by bilinear
    interpolation; the result is renormalized on the target grid to remove
    the interpolation's residual mass error.
    """
    target = rho.grid if target is None else target
    x0, x1, p0, p1 = _support_box(rho)
    cx, cp = R(np.array([x0, x0, x1, x1]), np.array([p0, p1, p0, p1]))
    if cx.min() < target.x_min or cx.max() > target.x[-1] or cp.min() < target.p_min or cp.max() > target.p[-1]:
        raise GridError(
            f"image support x [{cx.min():.4g}, {cx.max():.4g}], p [{cp.min():.4g}, {cp.max():.4g}] "
            f"escapes target grid x [{target.x_min:.4g}, {target.x[-1]:.4g}], p [{target.p_min:.4g}, {target.p[-1]:.4g}]"
        )
    X, P = target.mesh()
    sx, sp = R.inverse()(X, P)
    src = rho.grid
    coords = np.array([(sx - src.x_min) / src.dx, (sp - src.p_min) / src.dp])
    values = map_coordinates(rho.values, coords, order=1, mode="constant", cval=0.0) / abs(R.det())
    values = np.clip(values, 0.0, None)
    mass = target.integrate(values)
    if not mass > 0:
        raise GridError("pushed-forward density vanished on the target grid")
    return PhaseDistribution(target, values / mass)


def jacobian_and_bracket(R: AffineMap2D) -> tuple[float, float]:
    """Jacobian determinant and the Poisson bracket ``{R(x), R(p)}``."""
    (dxx, dpx), (dxp, dpp) = R.linear  # d R(x)/dx, d R(x)/dp ; d R(p)/dx, d R(p)/dp
    jac = R.det()
    bracket = dxx * dpp - dpx * dxp
    return jac, bracket


def central_moment(rho: PhaseDistribution, n: int, m: int) -> float:
    """Quadrature of ``x^n p^m rho`` (moments about the phase-space origin)."""
    if n < 0 or m < 0 or n + m > 8:
        raise ValueError("moment orders must satisfy 0 <= n + m <= 8")
    X, P = rho.grid.mesh()
    return rho.grid.integrate(X**n * P**m * rho.values)


def decompose_stretch(R: AffineMap2D) -> tuple[AffineMap2D, AffineMap2D]:
    """Split ``R = T o U`` with ``T`` a pure stretch and ``U`` area preserving."""
    lam = R.det()
    if not lam > 1:
        raise DomainError(f"not a stretching map: Jacobian {lam!r} must exceed 1")
    T = AffineMap2D.pure_stretch(lam)
    s = np.sqrt(lam)
    U = AffineMap2D(R.matrix / s, np.array(R.shift) / s)
    return U, T


def gaussian(grid: PhaseGrid, sx: float, sp: float, x0: float = 0.0, p0: float = 0.0) -> PhaseDistribution:
    return PhaseDistribution.from_function(
        grid, lambda X, P: np.exp(-0.5 * ((X - x0) / sx) ** 2 - 0.5 * ((P - p0) / sp) ** 2)
    )


def plateau(grid: PhaseGrid, radius: float, edge: float, x0: float = 0.0, p0: float = 0.0) -> PhaseDistribution:
    """Uniform disk with a logistic rim of width ``edge``."""

    def fn(X, P):
        r = np.hypot(X - x0, P - p0)
        return 0.5 * (1 - np.tanh((r - radius) / (2 * edge)))

    return PhaseDistribution.from_function(grid, fn)


def bimodal(grid: PhaseGrid, sigma: float, separation: float) -> PhaseDistribution:
    def fn(X, P):
        g = lambda c: np.exp(-0.5 * ((X - c) ** 2 + P**2) / sigma**2)
        return g(-separation / 2) + g(separation / 2)

    return PhaseDistribution.from_function(grid, fn)
