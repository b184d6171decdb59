"""Wigner and Husimi distributions of truncated Fock states on phase-space grids.

Values are densities with respect to ``dx dp``.  The coherent-state
coordinate used by the Husimi function and the Gaussian smoothing is

    alpha = (x / x_scale + 1j * p / p_scale) / sqrt(2),

with ``x_scale = sqrt(hbar/(m omega))`` and ``p_scale = sqrt(hbar m omega)``;
``d^2 alpha = dx dp / (2 hbar)``, so a density in alpha-units is the
``dx dp`` density times ``2 hbar`` (see :meth:`QuasiDistribution.alpha_density`).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaln

from .errors import GridError
from .fock_core import FockState, SystemUnits, build_ladder, quadratures
from .phasegrid import PhaseGrid, write_grid_csv

NORM_TOL = 1e-6
HUSIMI_FLOOR = -1e-9
NEG_THRESHOLD = -1e-9
# relative size below which density-matrix coherences are ignored by the resolution check
COHERENCE_FLOOR = 1e-3


class Kind(str, Enum):
    WIGNER = "wigner"
    HUSIMI = "husimi"


class GridWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class QuasiDistribution:
    grid: PhaseGrid
    values: np.ndarray
    kind: Kind
    units: SystemUnits = SystemUnits()

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise GridError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        kind = Kind(self.kind)
        norm = self.grid.integrate(values)
        if abs(norm - 1.0) > NORM_TOL:
            raise GridError(
                f"{kind.value} distribution integrates to {norm:.9f} on the grid; "
                "the support does not fit (enlarge the grid)"
            )
        if kind is Kind.HUSIMI and values.min() < HUSIMI_FLOOR:
            raise GridError(f"Husimi distribution has negative value {values.min():.3e}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kind", kind)

    def norm(self) -> float:
        return self.grid.integrate(self.values)

    def moment(self, nx: int, np_: int) -> float:
        """Raw phase-space moment of ``x^nx p^np_``."""
        X, P = self.grid.mesh()
        return self.grid.integrate(X**nx * P**np_ * self.values)

    def alpha_grid(self) -> np.ndarray:
        X, P = self.grid.mesh()
        return to_alpha(X, P, self.units)

    def alpha_moment(self, n: int, m: int) -> complex:
        """``int alpha^n conj(alpha)^m values d^2alpha``; anti-normal moments for Husimi."""
        A = self.alpha_grid()
        return complex(np.sum(A**n * np.conj(A) ** m * self.values) * self.grid.cell)

    def alpha_density(self) -> np.ndarray:
        """Values as a density in ``d^2 alpha``."""
        return self.values * 2 * self.units.hbar

    def sup_distance(self, other: "QuasiDistribution") -> float:
        if other.grid != self.grid:
            raise GridError("distributions live on different grids")
        return float(np.max(np.abs(self.values - other.values)))

    def to_csv(self, path, extra: dict | None = None):
        header = {"kind": self.kind.value, "units": self.units.as_dict()}
        if extra:
            header.update(extra)
        return write_grid_csv(path, self.grid, self.values, header)


def to_alpha(x, p, units: SystemUnits = SystemUnits()):
    """Coherent-state coordinate of the phase-space point ``(x, p)``."""
    return (np.asarray(x) / units.x_scale + 1j * np.asarray(p) / units.p_scale) / np.sqrt(2)


def hermite_functions(xi: np.ndarray, dim: int) -> np.ndarray:
    """Normalized Hermite functions ``h_0..h_{dim-1}`` at ``xi``; shape ``xi.shape + (dim,)``.

    The three-term recurrence is run on rescaled values with a per-point
    log scale, so neither the Gaussian factor nor the polynomial overflows.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty(xi.shape + (dim,))
    log_scale = -0.5 * xi**2 - 0.25 * np.log(np.pi)
    prev = np.zeros_like(xi)
    cur = np.ones_like(xi)
    out[..., 0] = np.exp(log_scale)
    for n in range(1, dim):
        nxt = np.sqrt(2.0 / n) * xi * cur - np.sqrt((n - 1) / n) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e100
        if np.any(big):
            s = np.where(big, np.abs(cur), 1.0)
            cur = cur / s
            prev = prev / s
            log_scale = log_scale + np.log(s)
        with np.errstate(under="ignore"):
            out[..., n] = cur * np.exp(log_scale)
    return out


def position_wavefunctions(x: np.ndarray, dim: int, units: SystemUnits = SystemUnits()) -> np.ndarray:
    """``<x|n>`` for ``n < dim``."""
    return hermite_functions(np.asarray(x) / units.x_scale, dim) / np.sqrt(units.x_scale)


def momentum_wavefunctions(p: np.ndarray, dim: int, units: SystemUnits = SystemUnits()) -> np.ndarray:
    """``<p|n> = (-i)^n h_n(p/p_scale)/sqrt(p_scale)``."""
    phase = (-1j) ** np.arange(dim)
    return hermite_functions(np.asarray(p) / units.p_scale, dim) / np.sqrt(units.p_scale) * phase


def position_density(state: FockState, x: np.ndarray, units: SystemUnits = SystemUnits()) -> np.ndarray:
    psi = position_wavefunctions(x, state.dim, units)
    return np.einsum("...m,mn,...n->...", psi, state.rho, psi).real


def momentum_density(state: FockState, p: np.ndarray, units: SystemUnits = SystemUnits()) -> np.ndarray:
    phi = momentum_wavefunctions(p, state.dim, units)
    return np.einsum("...m,mn,...n->...", phi, state.rho, phi.conj()).real


def _support_radius(dim: int) -> float:
    # classical turning point of the top level plus a tail allowance, in natural units
    return np.sqrt(2 * dim + 1) + 8.0


def coherence_half_widths(state: FockState, units: SystemUnits = SystemUnits(), n: int = 401) -> tuple[float, float]:
    """Half the largest separation ``|x - x'|`` (and ``|p - p'|``) with a significant coherence."""
    r = _support_radius(state.dim)
    out = []
    for basis, scale in ((position_wavefunctions, units.x_scale), (momentum_wavefunctions, units.p_scale)):
        q = np.linspace(-r * scale, r * scale, n)
        psi = basis(q, state.dim, units)
        mat = np.abs(psi @ state.rho @ psi.conj().T)
        sig = mat > COHERENCE_FLOOR * mat.max()
        i, j = np.nonzero(sig)
        out.append(0.5 * float(np.max(np.abs(q[i] - q[j]))) if i.size else 0.0)
    return out[0], out[1]


def check_resolution(state: FockState, grid: PhaseGrid, units: SystemUnits = SystemUnits()):
    """Refuse grids too coarse to sample the state's phase-space structure.

    A coherence ``<x+y|rho|x-y>`` reaching ``|y| = Y`` puts oscillations of
    angular frequency ``2Y/hbar`` into the momentum direction, so sampling
    requires ``dp <= pi hbar / (2 Y)``; likewise for ``dx``.
    """
    yx, yp = coherence_half_widths(state, units)
    hbar = units.hbar
    if yx > 0 and grid.dp > np.pi * hbar / (2 * yx):
        raise GridError(
            f"grid too coarse: dp={grid.dp:.4g} exceeds {np.pi * hbar / (2 * yx):.4g} "
            f"required by position coherences up to {2 * yx:.3g} for dim={state.dim}"
        )
    if yp > 0 and grid.dx > np.pi * hbar / (2 * yp):
        raise GridError(
            f"grid too coarse: dx={grid.dx:.4g} exceeds {np.pi * hbar / (2 * yp):.4g} "
            f"required by momentum coherences up to {2 * yp:.3g} for dim={state.dim}"
        )
    _warn_support(state, grid, units)


def _warn_support(state: FockState, grid: PhaseGrid, units: SystemUnits):
    x_op, p_op = quadratures(build_ladder(state.dim), units)
    for name, op, lo, hi in (("x", x_op, grid.x_min, grid.x_max), ("p", p_op, grid.p_min, grid.p_max)):
        mean = np.trace(state.rho @ op).real
        var = np.trace(state.rho @ op @ op).real - mean**2
        sd = np.sqrt(max(var, 0.0))
        if mean - 4 * sd < lo or mean + 4 * sd > hi:
            warnings.warn(
                f"state extends to {name} = {mean:.3g} +/- 4*{sd:.3g}, outside grid [{lo:.3g}, {hi:.3g}]",
                GridWarning,
                stacklevel=3,
            )


def _y_quadrature(dim: int, grid: PhaseGrid, units: SystemUnits) -> tuple[np.ndarray, float]:
    r = _support_radius(dim) * units.x_scale
    p_reach = _support_radius(dim) * units.p_scale + max(abs(grid.p_min), abs(grid.p_max))
    # integrand exp(-2ipy/hbar) <x+y|rho|x-y> has bandwidth 2*p_reach/hbar in y
    dy_max = 0.5 * np.pi * units.hbar / (2 * p_reach)
    half = int(np.ceil(r / dy_max))
    dy = r / half
    return dy * np.arange(-half, half + 1), dy


def wigner_values(state: FockState, grid: PhaseGrid, units: SystemUnits = SystemUnits(), chunk: int = 8) -> np.ndarray:
    """Raw Wigner values via the ``y``-integral of ``<x+y|rho|x-y>``.

    For every grid row the off-diagonal position kernel is assembled from
    Hermite functions and Fourier-transformed over ``y`` by a direct
    trapezoid sum evaluated at the grid momenta.
    """
    y, dy = _y_quadrature(state.dim, grid, units)
    hbar = units.hbar
    phase = np.exp(-2j * np.outer(y, grid.p) / hbar) * dy / (np.pi * hbar)
    out = np.empty(grid.shape)
    xs = grid.x
    for start in range(0, grid.nx, chunk):
        xc = xs[start : start + chunk]
        plus = position_wavefunctions(xc[:, None] + y[None, :], state.dim, units)
        minus = position_wavefunctions(xc[:, None] - y[None, :], state.dim, units)
        f = np.sum((plus @ state.rho) * minus, axis=-1)
        out[start : start + chunk] = (f @ phase).real
    return out


def wigner_from_state(state: FockState, grid: PhaseGrid, units: SystemUnits = SystemUnits()) -> QuasiDistribution:
    check_resolution(state, grid, units)
    return QuasiDistribution(grid, wigner_values(state, grid, units), Kind.WIGNER, units)


def husimi_values(state: FockState, grid: PhaseGrid, units: SystemUnits = SystemUnits()) -> np.ndarray:
    """``<alpha|rho|alpha> / (2 pi hbar)`` at every grid node."""
    alpha = to_alpha(*grid.mesh(), units).ravel()
    n = np.arange(state.dim)
    # log-scaled coherent amplitudes, stable far from the origin
    mag = np.abs(alpha)
    logmag = np.log(np.where(mag > 0, mag, 1.0))
    log_c = -0.5 * mag[:, None] ** 2 + n[None, :] * logmag[:, None] - 0.5 * gammaln(n + 1)[None, :]
    log_c[mag == 0, 1:] = -np.inf
    c = np.exp(log_c) * np.exp(1j * n[None, :] * np.angle(alpha)[:, None])
    q = np.einsum("im,mn,in->i", c.conj(), state.rho, c).real
    return (q / (2 * np.pi * units.hbar)).reshape(grid.shape)


def husimi_from_state(state: FockState, grid: PhaseGrid, units: SystemUnits = SystemUnits()) -> QuasiDistribution:
    check_resolution(state, grid, units)
    return QuasiDistribution(grid, husimi_values(state, grid, units), Kind.HUSIMI, units)


def vacuum_kernel_variances(units: SystemUnits = SystemUnits()) -> tuple[float, float]:
    """Position and momentum variances of the Gaussian that turns W into Q."""
    return units.x_scale**2 / 2, units.p_scale**2 / 2


def gaussian_smooth(values: np.ndarray, grid: PhaseGrid, var_x: float, var_p: float) -> np.ndarray:
    """Convolve with a normalized Gaussian by multiplying its exact transform in Fourier space."""
    kx = 2 * np.pi * np.fft.fftfreq(grid.nx, grid.dx)
    kp = 2 * np.pi * np.fft.fftfreq(grid.np, grid.dp)
    transfer = np.exp(-0.5 * (var_x * kx[:, None] ** 2 + var_p * kp[None, :] ** 2))
    return np.fft.ifft2(np.fft.fft2(values) * transfer).real


def required_margin(values: np.ndarray, grid: PhaseGrid, sx: float, sp: float, widths: float = 4.0, rel: float = 1e-6):
    """Raise if ``values`` is not negligible within ``widths`` kernel widths of the boundary."""
    thresh = rel * np.max(np.abs(values))
    sig = np.abs(values) > thresh
    if not sig.any():
        return
    xs, ps = grid.x[np.any(sig, axis=1)], grid.p[np.any(sig, axis=0)]
    need_x = max(abs(xs.min()), abs(xs.max())) + widths * sx
    need_p = max(abs(ps.min()), abs(ps.max())) + widths * sp
    if xs.min() - widths * sx < grid.x_min or xs.max() + widths * sx > grid.x[-1] or \
            ps.min() - widths * sp < grid.p_min or ps.max() + widths * sp > grid.p[-1]:
        raise GridError(
            f"insufficient grid margin: need |x| <= {need_x:.3g} and |p| <= {need_p:.3g} "
            f"(grid x [{grid.x_min:.3g}, {grid.x_max:.3g}], p [{grid.p_min:.3g}, {grid.p_max:.3g}])"
        )


def weierstrass(w: QuasiDistribution) -> QuasiDistribution:
    """Husimi distribution obtained by Gaussian smoothing of a Wigner distribution.

    In alpha-units this is ``Q(a) = (2/pi) int W(b) exp(-2|a-b|^2) d^2b``,
    i.e. a convolution with a Gaussian of variance 1/4 per alpha component.
    """
    if w.kind is not Kind.WIGNER:
        raise ValueError("weierstrass expects a Wigner distribution")
    vx, vp = vacuum_kernel_variances(w.units)
    required_margin(w.values, w.grid, np.sqrt(vx), np.sqrt(vp))
    q = gaussian_smooth(w.values, w.grid, vx, vp)
    return QuasiDistribution(w.grid, q, Kind.HUSIMI, w.units)


@dataclass(frozen=True)
class NegativityReport:
    neg_volume: float
    min_value: float
    neg_area: float


def negativity_report(w: QuasiDistribution) -> NegativityReport:
    if w.kind is not Kind.WIGNER:
        raise ValueError("negativity is defined for Wigner distributions")
    v = w.values
    # transform roundoff leaves ~1e-17 ripples in Gaussian tails; count only values below the threshold
    neg = np.where(v < NEG_THRESHOLD, -v, 0.0)
    return NegativityReport(
        neg_volume=w.grid.integrate(neg),
        min_value=float(v.min()),
        neg_area=float(np.count_nonzero(v < NEG_THRESHOLD) * w.grid.cell),
    )
