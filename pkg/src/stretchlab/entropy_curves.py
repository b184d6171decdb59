"""Entropy of minimum-uncertainty Gaussian states as a function of their uncertainty.

``sigma`` is the product ``dx * dp`` of an uncorrelated Gaussian state.  All
functions take ``hbar`` explicitly (default 1) and return entropies in nats.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

BISECT_TOL = 1e-10


def _xlogx(u):
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(u > 0, u * np.log(np.where(u > 0, u, 1.0)), 0.0)


def s_classical(sigma, hbar: float = 1.0):
    """``ln(sigma/hbar) + 1``; negative below ``hbar/e``."""
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0):
        raise DomainError("classical uncertainty must be positive")
    out = np.log(sigma / hbar) + 1.0
    return float(out) if out.ndim == 0 else out


def s_quantum(sigma, hbar: float = 1.0):
    """``(s+1/2) ln(s+1/2) - (s-1/2) ln(s-1/2)`` with ``s = sigma/hbar``; zero at ``hbar/2``."""
    s = np.asarray(sigma, dtype=float) / hbar
    if np.any(s < 0.5):
        raise DomainError(f"uncertainty below hbar/2 violates the Heisenberg bound (min sigma/hbar = {s.min()!r})")
    out = _xlogx(s + 0.5) - _xlogx(s - 0.5)
    return float(out) if out.ndim == 0 else out


def s_quantum_rescaled(sigma, lam: float, hbar: float = 1.0):
    """Quantum curve after rescaling pure-state entropy by ``lam``: ``S_Q(lam*sigma) - ln lam``."""
    if lam < 1:
        raise DomainError(f"rescaling factor must be >= 1, got {lam!r}")
    sigma = np.asarray(sigma, dtype=float)
    if np.any(lam * sigma < 0.5 * hbar):
        raise DomainError("lam * sigma must be at least hbar/2")
    return s_quantum(lam * sigma, hbar) - np.log(lam)


def lower_bound(kind: str = "quantum", lam: float = 1.0, hbar: float = 1.0) -> float:
    """Smallest admissible ``sigma`` for the chosen curve."""
    if kind == "classical":
        return 0.0
    if kind == "quantum":
        return 0.5 * hbar
    if kind == "rescaled":
        lb = 0.5 * hbar / lam
        # make sure lam * lb does not round below hbar/2
        while lam * lb < 0.5 * hbar:
            lb = np.nextafter(lb, np.inf)
        return float(lb)
    raise ValueError(f"unknown curve kind {kind!r}")


def curve(kind: str = "quantum", lam: float = 1.0, hbar: float = 1.0):
    if kind == "classical":
        return lambda s: s_classical(s, hbar)
    if kind == "quantum":
        return lambda s: s_quantum(s, hbar)
    if kind == "rescaled":
        return lambda s: s_quantum_rescaled(s, lam, hbar)
    raise ValueError(f"unknown curve kind {kind!r}")


def sigma_from_entropy(s: float, kind: str = "quantum", lam: float = 1.0, hbar: float = 1.0) -> float:
    """Invert an entropy curve by bisection, to ``|S(sigma) - s| < 1e-10``."""
    f = curve(kind, lam, hbar)
    lo = lower_bound(kind, lam, hbar)
    if kind != "classical" and s < f(lo):
        raise DomainError(f"entropy {s!r} is below the minimum {f(lo)!r} of the {kind} curve")
    if kind == "classical":
        lo = hbar * np.exp(s - 1.0) / 2
        while f(lo) > s:
            lo /= 2
    hi = max(2 * lo, hbar)
    while f(hi) < s:
        hi *= 2
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        val = f(mid)
        if abs(val - s) < BISECT_TOL * 1e-2:
            return mid
        if val < s:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * np.finfo(float).eps * hi:
            break
    mid = 0.5 * (lo + hi)
    if abs(f(mid) - s) >= BISECT_TOL:
        raise DomainError(f"bisection could not reach entropy {s!r} (residual {f(mid) - s:.3e})")
    return mid


def rescaled_zero(lam: float, hbar: float = 1.0) -> float:
    """Uncertainty at which the rescaled quantum curve crosses zero entropy."""
    return sigma_from_entropy(0.0, "rescaled", lam, hbar) if lam > 1 else 0.5 * hbar


def sample_curves(sigmas, lambdas=(), hbar: float = 1.0) -> dict:
    """Columns for the entropy-uncertainty figure data: classical, quantum, difference and rescaled curves."""
    sigmas = np.asarray(sigmas, dtype=float)
    cols = {"sigma": sigmas, "s_classical": s_classical(sigmas, hbar)}
    quantum = np.full_like(sigmas, np.nan)
    ok = sigmas >= 0.5 * hbar
    quantum[ok] = s_quantum(sigmas[ok], hbar)
    cols["s_quantum"] = quantum
    cols["difference"] = cols["s_classical"] - quantum
    for lam in lambdas:
        col = np.full_like(sigmas, np.nan)
        ok = lam * sigmas >= 0.5 * hbar
        col[ok] = s_quantum_rescaled(sigmas[ok], lam, hbar)
        cols[f"s_rescaled_{lam:g}"] = col
    return cols
