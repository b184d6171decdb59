"""Wigner-function dynamics under the Poisson bracket and its Moyal corrections.

For ``H = p^2/2m + V(x)`` with polynomial ``V`` the Moyal bracket is the
finite series

    dW/dt = V' dW/dp - (p/m) dW/dx
            + sum_{n>=1} hbar^(2n) (-1)^n / ((2n+1)! 4^n) V^(2n+1) d^(2n+1)W/dp^(2n+1),

whose ``n = 0`` part is the classical Liouville flow.  Phase-space
derivatives are spectral (FFT) and time stepping is classical RK4.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as poly

from .errors import DomainError, GridError, StabilityError
from .fock_core import SystemUnits
from .phasegrid import PhaseGrid
from .quasiprob import Kind, QuasiDistribution

EDGE_REL = 1e-10
MAX_DEGREE = 6
MAX_CORRECTIONS = 2
CFL_SAFETY = 0.25
# RK4 stability radius on the imaginary axis is 2*sqrt(2); keep clear of it
RK4_IMAG = 2.0


@dataclass(frozen=True)
class HamiltonianSpec:
    """``p^2/(2 mass) + sum_k potential_coeffs[k] x^k`` with degree at most 6."""

    mass: float = 1.0
    potential_coeffs: tuple = (0.0, 0.0, 0.5)

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.potential_coeffs)
        if len(coeffs) > MAX_DEGREE + 1:
            raise DomainError(f"potential degree is limited to {MAX_DEGREE}")
        if not self.mass > 0:
            raise DomainError("mass must be positive")
        object.__setattr__(self, "potential_coeffs", coeffs)

    @property
    def degree(self) -> int:
        nz = [k for k, c in enumerate(self.potential_coeffs) if c != 0]
        return nz[-1] if nz else 0

    def check_confining(self):
        d = self.degree
        if d < 2 or d % 2 or self.potential_coeffs[d] <= 0:
            raise DomainError("time evolution needs an even leading power with a positive coefficient")

    def potential_derivative(self, x: np.ndarray, order: int = 1) -> np.ndarray:
        c = poly.polyder(np.array(self.potential_coeffs or (0.0,)), order) if order else np.array(self.potential_coeffs)
        return poly.polyval(x, c) if c.size else np.zeros_like(x)

    def energy(self, X: np.ndarray, P: np.ndarray) -> np.ndarray:
        return P**2 / (2 * self.mass) + self.potential_derivative(X, 0)

    @classmethod
    def harmonic(cls, mass: float = 1.0, omega: float = 1.0) -> "HamiltonianSpec":
        return cls(mass, (0.0, 0.0, 0.5 * mass * omega**2))

    @classmethod
    def quartic(cls, quartic: float, mass: float = 1.0, omega: float = 1.0) -> "HamiltonianSpec":
        return cls(mass, (0.0, 0.0, 0.5 * mass * omega**2, 0.0, quartic))


def _wavenumbers(grid: PhaseGrid, axis: int) -> np.ndarray:
    n, step = (grid.nx, grid.dx) if axis == 0 else (grid.np, grid.dp)
    k = 2 * np.pi * np.fft.fftfreq(n, step)
    return k


def spectral_derivative(values: np.ndarray, grid: PhaseGrid, axis: int, order: int = 1) -> np.ndarray:
    """``d^order / dq^order`` along ``axis`` (0 = x, 1 = p) by FFT."""
    k = _wavenumbers(grid, axis)
    factor = (1j * k) ** order
    n = k.size
    if order % 2 and n % 2 == 0:
        # the Nyquist mode has no odd derivative on a real grid
        factor[n // 2] = 0.0
    shape = [1, 1]
    shape[axis] = n
    return np.fft.ifft(np.fft.fft(values, axis=axis) * factor.reshape(shape), axis=axis).real


def _check_edges(values: np.ndarray, grid: PhaseGrid):
    edge = grid.edge_mass(values)
    if edge > EDGE_REL * np.abs(values).max():
        raise GridError(
            f"Wigner values reach {edge:.2e} (relative {edge / np.abs(values).max():.1e}) at the grid edge; "
            f"spectral derivatives need decay below {EDGE_REL:g}"
        )


def _poisson(values: np.ndarray, grid: PhaseGrid, H: HamiltonianSpec) -> np.ndarray:
    X, P = grid.mesh()
    out = -(P / H.mass) * spectral_derivative(values, grid, 0)
    vp = H.potential_derivative(grid.x, 1)
    if np.any(vp != 0):
        out += vp[:, None] * spectral_derivative(values, grid, 1)
    return out


def correction_coefficient(n: int, hbar: float) -> float:
    return hbar ** (2 * n) * (-1) ** n / (factorial(2 * n + 1) * 4**n)


def _correction(values: np.ndarray, grid: PhaseGrid, H: HamiltonianSpec, n: int, hbar: float) -> np.ndarray:
    order = 2 * n + 1
    if H.degree < order:
        return np.zeros_like(values)
    vd = H.potential_derivative(grid.x, order)
    return correction_coefficient(n, hbar) * vd[:, None] * spectral_derivative(values, grid, 1, order)


def poisson_rhs(W: QuasiDistribution, H: HamiltonianSpec) -> np.ndarray:
    """Classical Liouville term ``{H, W} = V' dW/dp - (p/m) dW/dx``."""
    _check_edges(W.values, W.grid)
    return _poisson(W.values, W.grid, H)


def moyal_rhs(W: QuasiDistribution, H: HamiltonianSpec, n_corr: int = 1) -> np.ndarray:
    """Poisson term plus the Moyal corrections up to ``n = n_corr``.

    Exact for potentials of degree ``<= 2 n_corr + 2``.
    """
    if not 0 <= n_corr <= MAX_CORRECTIONS:
        raise DomainError(f"n_corr must be between 0 and {MAX_CORRECTIONS}")
    _check_edges(W.values, W.grid)
    out = _poisson(W.values, W.grid, H)
    for n in range(1, n_corr + 1):
        out += _correction(W.values, W.grid, H, n, W.units.hbar)
    return out


def correction_field(W: QuasiDistribution, H: HamiltonianSpec, n: int = 1) -> np.ndarray:
    """The ``n``-th Moyal correction term on its own."""
    _check_edges(W.values, W.grid)
    return _correction(W.values, W.grid, H, n, W.units.hbar)


def max_stable_dt(grid: PhaseGrid, H: HamiltonianSpec, n_corr: int, hbar: float = 1.0) -> float:
    """Largest admissible step: the CFL bound and the RK4 bound of the correction terms."""
    p_max = max(abs(grid.p_min), abs(grid.p_max))
    vp = np.max(np.abs(H.potential_derivative(grid.x, 1)))
    bounds = [grid.dx / (p_max / H.mass)]
    if vp > 0:
        bounds.append(grid.dp / vp)
    dt = CFL_SAFETY * min(bounds)
    kp = np.pi / grid.dp
    for n in range(1, n_corr + 1):
        if H.degree >= 2 * n + 1:
            rate = abs(correction_coefficient(n, hbar)) * np.max(np.abs(H.potential_derivative(grid.x, 2 * n + 1)))
            rate *= kp ** (2 * n + 1)
            dt = min(dt, RK4_IMAG / rate)
    return float(dt)


def evolve_wigner(
    W0: QuasiDistribution,
    H: HamiltonianSpec,
    n_corr: int,
    t: float,
    dt: float,
    callback: Callable[[float, np.ndarray], None] | None = None,
    stride: int = 1,
) -> QuasiDistribution:
    """RK4 integration of the truncated Moyal equation.

    Raises
    ------
    StabilityError
        If ``dt`` exceeds :func:`max_stable_dt`; the message names the bound.
    """
    if not 0 <= n_corr <= MAX_CORRECTIONS:
        raise DomainError(f"n_corr must be between 0 and {MAX_CORRECTIONS}")
    if not (t > 0 and dt > 0):
        raise ValueError("t and dt must be positive")
    limit = max_stable_dt(W0.grid, H, n_corr, W0.units.hbar)
    if dt > limit * (1 + 1e-12):
        raise StabilityError(f"dt = {dt:.4g} exceeds the stability bound; use dt <= {limit:.4g}")
    _check_edges(W0.values, W0.grid)
    grid, hbar = W0.grid, W0.units.hbar
    steps = int(np.ceil(t / dt - 1e-9))
    h = t / steps

    def rhs(v):
        out = _poisson(v, grid, H)
        for n in range(1, n_corr + 1):
            out += _correction(v, grid, H, n, hbar)
        return out

    w = np.array(W0.values)
    for k in range(steps):
        k1 = rhs(w)
        k2 = rhs(w + 0.5 * h * k1)
        k3 = rhs(w + 0.5 * h * k2)
        k4 = rhs(w + h * k3)
        w = w + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if callback is not None and ((k + 1) % stride == 0 or k + 1 == steps):
            callback((k + 1) * h, w)
    return QuasiDistribution(grid, w, Kind.WIGNER, W0.units)


def _l2(values: np.ndarray, grid: PhaseGrid) -> float:
    return float(np.sqrt(np.sum(values**2) * grid.cell))


def classicality_ratio(W: QuasiDistribution, H: HamiltonianSpec) -> float:
    """``||first Moyal correction||_2 / ||Poisson term||_2``; zero when the correction vanishes."""
    pois = _l2(poisson_rhs(W, H), W.grid)
    corr = _l2(correction_field(W, H, 1), W.grid)
    if corr == 0:
        return 0.0
    if pois == 0:
        raise DomainError("the Poisson term vanishes; the ratio is undefined")
    return corr / pois


def gaussian_wigner(
    grid: PhaseGrid, cov, mean=(0.0, 0.0), units: SystemUnits = SystemUnits()
) -> QuasiDistribution:
    """Normalized Gaussian phase-space density with covariance ``cov``."""
    cov = np.asarray(cov, dtype=float)
    X, P = grid.mesh()
    d = np.stack([X - mean[0], P - mean[1]], axis=-1)
    inv = np.linalg.inv(cov)
    q = np.einsum("...i,ij,...j->...", d, inv, d)
    values = np.exp(-0.5 * q) / (2 * np.pi * np.sqrt(np.linalg.det(cov)))
    return QuasiDistribution(grid, values, Kind.WIGNER, units)
