"""Traditional classical limits, recast as numerical checks.

Three self-contained studies: the small-``beta`` expansion of black-body
radiance, the high-temperature agreement of quantum and classical thermal
phase-space densities, and the entropic indistinguishability of qubit
mixtures together with the contraction of the depolarizing channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidStateError, NumericalError
from .fock_core import FockState, SystemUnits, gibbs_state, polynomial_hamiltonian, trace_distance, von_neumann_entropy
from .phasegrid import PhaseGrid
from .quasiprob import wigner_values

# Planck's law is set to zero beyond this exponent instead of overflowing
EXP_SATURATION = 700.0
# Gibbs weight allowed in the highest kept Fock level
TOP_LEVEL_MAX = 1e-6


@dataclass(frozen=True)
class RadianceParams:
    """Frequency, inverse temperature and constants of a spectral radiance evaluation."""

    nu: float
    beta: float
    h: float = 1.0
    c: float = 1.0
    k_B: float = 1.0

    def __post_init__(self):
        for name in ("nu", "beta", "h", "c", "k_B"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")

    @property
    def x(self) -> float:
        """Dimensionless ``h beta nu``; ``beta`` already absorbs ``k_B``."""
        return self.h * self.beta * self.nu


def planck(p: RadianceParams) -> float:
    """``(2 h nu^3 / c^2) / (exp(h beta nu) - 1)``."""
    if p.x > EXP_SATURATION:
        return 0.0
    return float(2 * p.h * p.nu**3 / p.c**2 / np.expm1(p.x))


def rayleigh_jeans(p: RadianceParams) -> float:
    """``2 nu^2 / (c^2 beta)``."""
    return float(2 * p.nu**2 / (p.c**2 * p.beta))


def planck_beta_series(p: RadianceParams, order: int) -> float:
    """Small-``beta`` expansion of Planck's law kept to ``order`` terms.

    ``1/(e^x - 1) = 1/x - 1/2 + O(x)``: order 1 is the Rayleigh-Jeans law and
    order 2 adds ``-h nu^3 / c^2``.
    """
    if order not in (1, 2):
        raise ValueError(f"series order must be 1 or 2, got {order!r}")
    out = rayleigh_jeans(p)
    if order == 2:
        out -= p.h * p.nu**3 / p.c**2
    return float(out)


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of ``log ys`` against ``log xs``."""
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise NumericalError("log-log fit needs positive data")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def series_convergence_order(order: int, betas=None, nu: float = 1.0) -> float:
    """Measured exponent ``s`` in ``|series - Planck| / Planck ~ beta^s``."""
    betas = np.geomspace(1e-3, 1e-2, 6) if betas is None else np.asarray(betas, dtype=float)
    errs = []
    for b in betas:
        p = RadianceParams(nu=nu, beta=b)
        pl = planck(p)
        errs.append(abs(planck_beta_series(p, order) - pl) / pl)
    return loglog_slope(betas, errs)


@dataclass
class ThermalCorrection:
    """Distance between quantum and classical thermal densities along a ``beta`` sweep."""

    betas: np.ndarray
    distances: np.ndarray
    slope: float
    first_order: float
    classical_scale: float
    grid: PhaseGrid
    potential: tuple = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "betas": [float(b) for b in self.betas],
            "distances": [float(d) for d in self.distances],
            "slope": self.slope,
            "first_order": self.first_order,
            "classical_scale": self.classical_scale,
            "potential": [float(c) for c in self.potential],
            "grid": self.grid.as_dict(),
        }


def _potential(coeffs, x):
    return sum(c * x**k for k, c in enumerate(coeffs))


def classical_gibbs(grid: PhaseGrid, coeffs, beta: float, units: SystemUnits = SystemUnits()) -> np.ndarray:
    """``exp(-beta H(x, p))`` normalized on ``grid``."""
    X, P = grid.mesh()
    energy = P**2 / (2 * units.mass) + _potential(coeffs, X)
    w = np.exp(-beta * (energy - energy.min()))
    return w / grid.integrate(w)


def thermal_wigner_correction(
    coeffs,
    betas,
    dim: int = 64,
    grid: PhaseGrid | None = None,
    units: SystemUnits = SystemUnits(),
    n_fit: int = 3,
) -> ThermalCorrection:
    """Sup-norm distance ``D(beta)`` between the quantum and classical thermal densities.

    Parameters
    ----------
    coeffs : sequence of float
        Polynomial potential ``V(x) = sum_k coeffs[k] x^k``.
    betas : sequence of float
        Decreasing inverse temperatures.
    dim : int
        Fock truncation for the Gibbs state.
    grid : PhaseGrid, optional
        Common grid for both densities; defaults to ``+/-12`` with 128 points.
    n_fit : int
        Number of smallest ``beta`` used for the power-law fit.

    Returns
    -------
    ThermalCorrection
        ``slope`` is the fitted exponent of ``D ~ beta^s``.  ``first_order``
        is the polynomial extrapolation of ``D/beta`` to ``beta = 0`` through
        the smallest ``n_fit`` points (a vanishing first-order term makes it
        zero) and ``classical_scale`` the peak of the classical density over
        ``beta`` at the smallest ``beta``, the natural size of a first-order
        coefficient.
    """
    betas = np.asarray(betas, dtype=float)
    if betas.size < n_fit or np.any(np.diff(betas) >= 0) or np.any(betas <= 0):
        raise DomainError(f"need at least {n_fit} strictly decreasing positive betas")
    grid = PhaseGrid.symmetric(12.0, n=128) if grid is None else grid
    h = polynomial_hamiltonian(dim, coeffs, units)
    dists = []
    for b in betas:
        state = gibbs_state(h, b)
        top = state.populations()[-1]
        if top > TOP_LEVEL_MAX:
            raise DomainError(f"beta={b:g} leaves population {top:.2e} in the top level of dim={dim}")
        wq = wigner_values(state, grid, units)
        wq = wq / grid.integrate(wq)
        wc = classical_gibbs(grid, coeffs, b, units)
        if grid.edge_mass(wc) > 1e-6 * wc.max():
            raise DomainError(f"classical density at beta={b:g} reaches the grid edge")
        dists.append(float(np.max(np.abs(wq - wc))))
    dists = np.array(dists)
    small_b, small_d = betas[-n_fit:], dists[-n_fit:]
    slope = loglog_slope(small_b, small_d)
    first = float(np.polyval(np.polyfit(small_b, small_d / small_b, n_fit - 1), 0.0))
    scale = float(classical_gibbs(grid, coeffs, betas[-1], units).max() / betas[-1])
    return ThermalCorrection(betas, dists, slope, first, scale, grid, tuple(float(c) for c in coeffs))


# --- qubits -----------------------------------------------------------------

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True, eq=False)
class Qubit:
    """Two-level density matrix; ``|L> = (1, 0)`` and ``|R> = (0, 1)``."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (2, 2):
            raise InvalidStateError(f"qubit density matrix must be 2x2, got {rho.shape}")
        state = FockState(rho)
        r = np.linalg.norm(_bloch(state.rho))
        if r > 1 + 1e-12:
            raise InvalidStateError(f"Bloch vector length {r!r} exceeds 1")
        object.__setattr__(self, "rho", state.rho)

    @classmethod
    def from_bloch(cls, r) -> "Qubit":
        r = np.asarray(r, dtype=float)
        return cls(0.5 * (np.eye(2) + sum(c * s for c, s in zip(r, PAULI))))

    @classmethod
    def pure(cls, psi) -> "Qubit":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @property
    def bloch(self) -> np.ndarray:
        return _bloch(self.rho)

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.bloch))

    def entropy(self) -> float:
        return von_neumann_entropy(FockState(self.rho))


def _bloch(rho: np.ndarray) -> np.ndarray:
    return np.array([np.trace(rho @ s).real for s in PAULI])


def qubit_distance(a: Qubit, b: Qubit) -> float:
    return trace_distance(FockState(a.rho), FockState(b.rho))


def entropy_of_radius(r: float) -> float:
    """Entropy of any qubit with Bloch radius ``r``; equal-entropy states form spheres."""
    lam = np.array([(1 + r) / 2, (1 - r) / 2])
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


def two_slit_aliasing(n_phase: int = 64) -> dict:
    """Compare the mixtures that the which-slit and the interference bases cannot tell apart."""
    L, R = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
    plus, minus = (L + R) / np.sqrt(2), (L - R) / np.sqrt(2)
    proj = lambda v: np.outer(v, v.conj())
    lr = 0.5 * proj(L) + 0.5 * proj(R)
    pm = 0.5 * proj(plus) + 0.5 * proj(minus)
    thetas = 2 * np.pi * np.arange(n_phase) / n_phase
    avg = sum(proj((L + np.exp(-1j * t) * R) / np.sqrt(2)) for t in thetas) / n_phase
    return {
        "mixture_difference": float(np.max(np.abs(pm - lr))),
        "phase_average_difference": float(np.max(np.abs(avg - lr))),
        "pure_entropy": Qubit.pure(plus).entropy(),
        "mixed_entropy": Qubit(lr).entropy(),
        "n_phase": n_phase,
    }


def depolarize(q: Qubit, strength: float) -> Qubit:
    """``(1 - strength) rho + strength I/2``."""
    if not 0 <= strength <= 1:
        raise DomainError(f"depolarizing strength must lie in [0, 1], got {strength!r}")
    return Qubit((1 - strength) * q.rho + strength * np.eye(2) / 2)


def contraction_check(pairs, strength: float) -> dict:
    """Distances and entropies before and after depolarizing each pair of qubits."""
    ratio_err = 0.0
    entropy_ok = True
    fixed_ok = True
    rows = []
    for a, b in pairs:
        d0 = qubit_distance(a, b)
        a1, b1 = depolarize(a, strength), depolarize(b, strength)
        d1 = qubit_distance(a1, b1)
        ratio_err = max(ratio_err, abs(d1 - (1 - strength) * d0))
        for before, after in ((a, a1), (b, b1)):
            if before.radius < 1e-12:
                fixed_ok &= np.allclose(after.rho, before.rho, atol=1e-14)
            elif 0 < strength:
                entropy_ok &= after.entropy() > before.entropy()
        rows.append({"before": d0, "after": d1})
    return {
        "strength": strength,
        "max_contraction_error": ratio_err,
        "entropy_increases": bool(entropy_ok),
        "maximally_mixed_fixed": bool(fixed_ok),
        "pairs": rows,
    }


def bloch_shell_check(radii, strength: float, n_dirs: int = 16, seed: int = 0) -> dict:
    """Equal-entropy shells: same radius gives same entropy, and depolarizing maps shells to shells."""
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(n_dirs, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    entropy_spread = 0.0
    radius_err = 0.0
    for r in radii:
        qs = [Qubit.from_bloch(r * d) for d in dirs]
        ent = [q.entropy() for q in qs]
        entropy_spread = max(entropy_spread, max(ent) - min(ent), abs(ent[0] - entropy_of_radius(r)))
        out = [depolarize(q, strength).radius for q in qs]
        radius_err = max(radius_err, max(abs(o - (1 - strength) * r) for o in out))
    return {"entropy_spread": entropy_spread, "radius_error": radius_err, "strength": strength}
