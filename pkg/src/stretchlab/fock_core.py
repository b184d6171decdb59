"""Truncated Fock-space linear algebra for a single bosonic mode.

Operators are plain complex ``numpy`` arrays of shape ``(dim, dim)`` in the
number basis ``|0>, ..., |dim-1>``.  Density matrices are wrapped in
:class:`FockState`, which validates trace, Hermiticity and positivity on
construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import InvalidDimensionError, InvalidStateError, NumericalError

TOL_HERM = 1e-10
TOL_TRACE = 1e-10
EIG_SLACK = -1e-8
EIG_FLOOR = 1e-14

__all__ = [
    "SystemUnits",
    "FockState",
    "build_ladder",
    "quadratures",
    "number_operator",
    "harmonic_hamiltonian",
    "polynomial_hamiltonian",
    "expectation",
    "mean_occupation",
    "von_neumann_entropy",
    "trace_distance",
    "gibbs_state",
    "fock_state",
    "coherent_state",
    "cat_state",
    "thermal_state",
    "pure_state",
]


@dataclass(frozen=True)
class SystemUnits:
    """Oscillator constants fixing the quadrature scale (natural units by default)."""

    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "omega"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    @property
    def x_scale(self) -> float:
        """Natural length sqrt(hbar / (m omega)); the vacuum has <X^2> = x_scale**2 / 2."""
        return float(np.sqrt(self.hbar / (self.mass * self.omega)))

    @property
    def p_scale(self) -> float:
        return float(np.sqrt(self.hbar * self.mass * self.omega))

    def as_dict(self) -> dict:
        return {"hbar": self.hbar, "mass": self.mass, "omega": self.omega}


@dataclass(frozen=True, eq=False)
class FockState:
    """Density matrix in a truncated number basis.

    Parameters
    ----------
    rho : array_like
        Complex ``(dim, dim)`` matrix.  It is validated for Hermiticity
        (``max|rho - rho^H| <= 1e-10``), unit trace (``1e-10``) and
        positivity (smallest eigenvalue ``>= -1e-8``).
    """

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidDimensionError(f"density matrix must be square, got shape {rho.shape}")
        if rho.shape[0] < 2:
            raise InvalidDimensionError("dim must be >= 2")
        if not np.all(np.isfinite(rho)):
            raise InvalidStateError("density matrix has non-finite entries")
        herm_err = np.max(np.abs(rho - rho.conj().T))
        if herm_err > TOL_HERM:
            raise InvalidStateError(f"density matrix is not Hermitian (max deviation {herm_err:.3e})")
        rho = 0.5 * (rho + rho.conj().T)
        tr = np.trace(rho).real
        if abs(tr - 1.0) > TOL_TRACE:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(rho)[0]
        if lo < EIG_SLACK:
            raise InvalidStateError(f"density matrix has eigenvalue {lo:.3e} < {EIG_SLACK}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def populations(self) -> np.ndarray:
        return self.rho.diagonal().real.copy()

    def expect(self, op: np.ndarray) -> complex:
        return expectation(self, op)


def _check_dim(dim: int) -> int:
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"truncation dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


def build_ladder(dim: int) -> np.ndarray:
    """Annihilation operator ``a`` with ``a[n-1, n] = sqrt(n)``."""
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def quadratures(a: np.ndarray, units: SystemUnits = SystemUnits()) -> tuple[np.ndarray, np.ndarray]:
    """Position and momentum operators built from the ladder operator."""
    ad = a.conj().T
    x = np.sqrt(units.hbar / (2 * units.mass * units.omega)) * (ad + a)
    p = 1j * np.sqrt(units.hbar * units.mass * units.omega / 2) * (ad - a)
    return x, p


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(_check_dim(dim), dtype=float)).astype(complex)


def harmonic_hamiltonian(dim: int, units: SystemUnits = SystemUnits()) -> np.ndarray:
    """``hbar omega (n + 1/2)`` on the truncated basis."""
    dim = _check_dim(dim)
    return np.diag(units.hbar * units.omega * (np.arange(dim) + 0.5)).astype(complex)


def polynomial_hamiltonian(
    dim: int, potential_coeffs, units: SystemUnits = SystemUnits()
) -> np.ndarray:
    """``P^2/2m + sum_k c_k X^k`` on the truncated basis.

    Powers of X and P are formed in a space enlarged by the polynomial
    degree and then truncated, so every kept matrix element is exact.
    """
    dim = _check_dim(dim)
    coeffs = list(potential_coeffs)
    big = dim + max(len(coeffs), 3)
    x, p = quadratures(build_ladder(big), units)
    h = p @ p / (2 * units.mass)
    xk = np.eye(big, dtype=complex)
    for c in coeffs:
        if c != 0:
            h = h + c * xk
        xk = xk @ x
    h = h[:dim, :dim]
    return 0.5 * (h + h.conj().T)


def expectation(state: FockState, op: np.ndarray) -> complex:
    return complex(np.trace(state.rho @ op))


def mean_occupation(state: FockState) -> float:
    return float(np.dot(np.arange(state.dim), state.populations()))


def _spectrum(state: FockState) -> np.ndarray:
    try:
        evals = np.linalg.eigvalsh(state.rho)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed for dim={state.dim}: {exc}") from exc
    return np.clip(evals, 0.0, None)


def von_neumann_entropy(state: FockState) -> float:
    """Entropy ``-Tr rho ln rho`` in nats, ignoring eigenvalues below 1e-14."""
    lam = _spectrum(state)
    lam = lam[lam > EIG_FLOOR]
    return float(max(0.0, -np.sum(lam * np.log(lam))))


def trace_distance(r: FockState, s: FockState) -> float:
    """Half the trace norm of ``r - s``."""
    if r.dim != s.dim:
        raise InvalidDimensionError(f"dimension mismatch: {r.dim} vs {s.dim}")
    diff = r.rho - s.rho
    evals = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return float(min(1.0, 0.5 * np.sum(np.abs(evals))))


def gibbs_state(h: np.ndarray, beta: float) -> FockState:
    """Normalized ``exp(-beta H)``, computed with a spectral shift so large beta cannot overflow."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    h = np.asarray(h, dtype=complex)
    if np.max(np.abs(h - h.conj().T)) > 1e-9 * max(1.0, np.max(np.abs(h))):
        raise InvalidStateError("Hamiltonian is not Hermitian")
    energies, vecs = np.linalg.eigh(0.5 * (h + h.conj().T))
    weights = np.exp(-beta * (energies - energies[0]))
    weights /= weights.sum()
    rho = (vecs * weights) @ vecs.conj().T
    return FockState(0.5 * (rho + rho.conj().T))


def pure_state(psi) -> FockState:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return FockState(np.outer(psi, psi.conj()))


def fock_state(n: int, dim: int) -> FockState:
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise InvalidDimensionError(f"number state |{n}> is outside a dim={dim} truncation")
    psi = np.zeros(dim, dtype=complex)
    psi[n] = 1.0
    return pure_state(psi)


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Untruncated-normalized coefficients ``<n|alpha>`` for ``n < dim``."""
    n = np.arange(dim)
    alpha = complex(alpha)
    if alpha == 0:
        out = np.zeros(dim, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = -0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def coherent_state(alpha: complex, dim: int) -> FockState:
    return pure_state(coherent_amplitudes(alpha, _check_dim(dim)))


def cat_state(alpha: complex, dim: int) -> FockState:
    """Even cat ``|alpha> + |-alpha>``, normalized."""
    dim = _check_dim(dim)
    return pure_state(coherent_amplitudes(alpha, dim) + coherent_amplitudes(-alpha, dim))


def thermal_state(nbar: float, dim: int) -> FockState:
    """Geometric number distribution with mean ``nbar`` (renormalized after truncation)."""
    dim = _check_dim(dim)
    if nbar < 0:
        raise ValueError("nbar must be non-negative")
    if nbar == 0:
        return fock_state(0, dim)
    n = np.arange(dim)
    w = np.exp(n * np.log(nbar / (nbar + 1.0)))
    return FockState(np.diag(w / w.sum()).astype(complex))
