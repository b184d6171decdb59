"""The quantum pure stretch: Lindblad realization and closed-form phase-space images.

The channel generated by the single jump operator ``a^dagger`` at rate
``gamma`` for a time ``t`` stretches phase space by ``lam = exp(gamma t)``.
Its action on the Husimi distribution is a pure rescaling and on the Wigner
distribution a rescaling followed by Gaussian blurring; both closed forms are
implemented here next to a direct integrator so they can be checked against
each other.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from . import __version__
from .errors import DomainError, GridError, InvalidDimensionError, NumericalError, StabilityError, TruncationError
from .fock_core import (
    FockState,
    SystemUnits,
    build_ladder,
    mean_occupation,
    quadratures,
    trace_distance,
    von_neumann_entropy,
)
from .phasegrid import PhaseGrid
from .quasiprob import (
    Kind,
    QuasiDistribution,
    husimi_from_state,
    vacuum_kernel_variances,
    wigner_from_state,
)

GAMMA_DT_MAX = 0.1
# RK4 is stable for generator eigenvalues |z| dt up to ~2.8 on both axes
RK4_RADIUS = 2.5
TRACE_TOL = 1e-9
EIG_SLACK = -1e-8
# relative edge level below which a source distribution counts as decayed
EDGE_REL = 1e-9


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class LindbladSpec:
    """Generator ``-i/hbar [H, .] + sum_i gamma_i (L_i . L_i^+ - 1/2 {L_i^+ L_i, .})``.

    Parameters
    ----------
    jumps : sequence of (rate, operator)
        Rates must be positive; operators share the Hamiltonian's shape.
    hamiltonian : ndarray, optional
        Defaults to zero.
    """

    jumps: tuple
    hamiltonian: np.ndarray | None = None
    hbar: float = 1.0

    def __post_init__(self):
        jumps = tuple((float(g), np.asarray(op, dtype=complex)) for g, op in self.jumps)
        if not jumps and self.hamiltonian is None:
            raise ValueError("generator needs a Hamiltonian or at least one jump operator")
        dims = {op.shape for _, op in jumps}
        if self.hamiltonian is not None:
            dims.add(np.shape(self.hamiltonian))
        if len(dims) != 1 or len(next(iter(dims))) != 2:
            raise InvalidDimensionError(f"operators have inconsistent shapes {sorted(dims)}")
        for g, _ in jumps:
            if not g > 0:
                raise ValueError(f"jump rates must be positive, got {g!r}")
        object.__setattr__(self, "jumps", jumps)

    @property
    def dim(self) -> int:
        if self.jumps:
            return self.jumps[0][1].shape[0]
        return np.shape(self.hamiltonian)[0]

    @property
    def total_rate(self) -> float:
        return float(sum(g for g, _ in self.jumps))

    @classmethod
    def stretch(cls, dim: int, gamma: float = 1.0) -> "LindbladSpec":
        """Single jump ``a^dagger`` at rate ``gamma``."""
        return cls(((gamma, build_ladder(dim).conj().T),))

    @classmethod
    def shrink(cls, dim: int, gamma: float = 1.0) -> "LindbladSpec":
        """Single jump ``a``: pure loss, the negative control."""
        return cls(((gamma, build_ladder(dim)),))

    def rhs(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho)
        if self.hamiltonian is not None:
            h = self.hamiltonian
            out += (-1j / self.hbar) * (h @ rho - rho @ h)
        for g, L in self.jumps:
            Ld = L.conj().T
            LdL = Ld @ L
            out += g * (L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL))
        return out

    def adjoint(self, op: np.ndarray) -> np.ndarray:
        """Heisenberg-picture generator acting on an observable."""
        out = np.zeros_like(op)
        if self.hamiltonian is not None:
            h = self.hamiltonian
            out += (1j / self.hbar) * (h @ op - op @ h)
        for g, L in self.jumps:
            Ld = L.conj().T
            LdL = Ld @ L
            out += g * (Ld @ op @ L - 0.5 * (LdL @ op + op @ LdL))
        return out

    def spectral_bound(self) -> float:
        """Upper bound on the generator's spectral radius (superoperator norm)."""
        b = 0.0
        if self.hamiltonian is not None:
            b += 2 * np.linalg.norm(self.hamiltonian, 2) / self.hbar
        for g, L in self.jumps:
            b += 2 * g * np.linalg.norm(L, 2) ** 2
        return float(b)


def occupation_growth_rate(spec: LindbladSpec) -> float:
    """Smallest ``r`` with ``d<N+1>/dt <= r <N+1>`` from the jump terms.

    Evaluated on the block below the truncation corner, where the truncated
    operators act like the untruncated ones.  For ``L = a^dagger`` this is
    ``gamma``.
    """
    dim = spec.dim
    if not spec.jumps:
        return 0.0
    n1 = np.diag(np.arange(1, dim + 1, dtype=float)).astype(complex)
    gen = LindbladSpec(spec.jumps, None, spec.hbar).adjoint(n1)[:-1, :-1]
    w = 1 / np.sqrt(np.arange(1, dim, dtype=float))
    m = w[:, None] * gen * w[None, :]
    return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[-1])


def predicted_occupation(state: FockState, spec: LindbladSpec, t: float) -> float:
    """A priori bound ``(nbar_0 + 1) exp(r t)`` on ``<N> + 1`` after time ``t``."""
    r = max(occupation_growth_rate(spec), 0.0)
    return (mean_occupation(state) + 1.0) * float(np.exp(r * t))


def check_truncation(s: FockState, spec: LindbladSpec, t: float, max_occupation: float | None = None) -> float:
    """Refuse an evolution whose a priori ``<N>+1`` bound exceeds ``max_occupation`` (default ``dim/8``).

    Returns the predicted bound.
    """
    cap = spec.dim / 8 if max_occupation is None else max_occupation
    predicted = predicted_occupation(s, spec, t)
    if predicted > cap * (1 + 1e-9):
        raise TruncationError(
            f"predicted <N>+1 = {predicted:.3g} exceeds the cap {cap:.3g} for dim={spec.dim}; "
            f"raise dim to at least {int(np.ceil(8 * predicted - 1e-6))}"
        )
    return predicted


def lindblad_evolve(
    s: FockState,
    spec: LindbladSpec,
    t: float,
    dt: float | None = None,
    max_occupation: float | None = None,
    callback: Callable[[float, np.ndarray], None] | None = None,
) -> FockState:
    """Integrate the master equation with fixed-step classical RK4.

    Parameters
    ----------
    s : FockState
    spec : LindbladSpec
    t : float
        Final time; the number of steps is ``ceil(t/dt)`` with the step
        shrunk to land exactly on ``t``.
    dt : float, optional
        Defaults to ``0.01 / sum(gamma)``, shortened if needed to stay inside
        the RK4 stability region.  Refused if ``gamma * dt > 0.1`` or if it
        exceeds the RK4 stability radius of the truncated generator.
    max_occupation : float, optional
        Largest admissible a priori bound on ``<N> + 1``; defaults to ``dim/8``.
    callback : callable, optional
        Called as ``callback(t_k, rho_k)`` after every step.

    Raises
    ------
    TruncationError
        If the predicted occupation exceeds ``max_occupation``.
    StabilityError
        If ``dt`` violates either stability bound.
    """
    if s.dim != spec.dim:
        raise InvalidDimensionError(f"state dim {s.dim} does not match generator dim {spec.dim}")
    if not t > 0:
        raise ValueError(f"evolution time must be positive, got {t!r}")
    gamma = spec.total_rate
    bound = spec.spectral_bound()
    if dt is None:
        dt = 0.01 / gamma if gamma > 0 else 0.01
        dt = min(dt, 0.8 * RK4_RADIUS / bound)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if gamma * dt > GAMMA_DT_MAX:
        raise StabilityError(f"gamma*dt = {gamma * dt:.3g} exceeds {GAMMA_DT_MAX}; use dt <= {GAMMA_DT_MAX / gamma:.4g}")
    if bound * dt > RK4_RADIUS:
        raise StabilityError(
            f"dt = {dt:.4g} exceeds the RK4 stability limit {RK4_RADIUS / bound:.4g} of the dim={spec.dim} generator"
        )
    check_truncation(s, spec, t, max_occupation)
    steps = int(np.ceil(t / dt - 1e-12))
    h = t / steps
    rho = np.array(s.rho)
    for k in range(steps):
        k1 = spec.rhs(rho)
        k2 = spec.rhs(rho + 0.5 * h * k1)
        k3 = spec.rhs(rho + 0.5 * h * k2)
        k4 = spec.rhs(rho + h * k3)
        rho = rho + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        if callback is not None:
            callback((k + 1) * h, rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise NumericalError(f"trace drifted to {tr!r}")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < EIG_SLACK:
        raise NumericalError(f"evolved state lost positivity (eigenvalue {lo:.3e})")
    return FockState(rho / tr)


def evolve_stretch(s: FockState, lam: float, gamma: float = 1.0, **kwargs) -> FockState:
    """Apply the ``a^dagger`` channel for ``t = ln(lam)/gamma``."""
    if lam < 1:
        raise DomainError(f"stretch factor must be >= 1, got {lam!r}")
    if lam == 1:
        return s
    return lindblad_evolve(s, LindbladSpec.stretch(s.dim, gamma), np.log(lam) / gamma, **kwargs)


def entropy_criterion(spec: LindbladSpec, tol: float = 1e-10) -> bool:
    """``sum gamma_i (L_i^+ L_i - L_i L_i^+) >= 0`` below the truncation corner."""
    m = sum(g * (L.conj().T @ L - L @ L.conj().T) for g, L in spec.jumps)
    if np.isscalar(m):
        return True
    m = m[:-1, :-1]
    return bool(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] >= -tol * max(1.0, np.abs(m).max()))


def _check_lambda(lam: float, strict: bool):
    if strict and not lam > 1:
        raise DomainError(f"stretch factor must exceed 1, got {lam!r}")
    if not lam >= 1:
        raise DomainError(f"stretch factor must be >= 1, got {lam!r}")


def _support_fits(values: np.ndarray, src: PhaseGrid, target: PhaseGrid, scale: float, rel: float = 1e-6):
    sig = np.abs(values) > rel * np.abs(values).max()
    xs = src.x[np.any(sig, axis=1)] * scale
    ps = src.p[np.any(sig, axis=0)] * scale
    if xs.min() < target.x_min or xs.max() > target.x[-1] or ps.min() < target.p_min or ps.max() > target.p[-1]:
        raise DomainError(
            f"stretched support x [{xs.min():.3g}, {xs.max():.3g}], p [{ps.min():.3g}, {ps.max():.3g}] "
            f"escapes the target grid x [{target.x_min:.3g}, {target.x[-1]:.3g}], "
            f"p [{target.p_min:.3g}, {target.p[-1]:.3g}]"
        )


def _fourier_resample(values: np.ndarray, src: PhaseGrid, x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric interpolant of ``values`` at the nodes ``x`` and ``p``."""
    ux = (x - src.x_min) / src.dx
    up = (p - src.p_min) / src.dp
    ex = np.exp(2j * np.pi * np.outer(ux, np.fft.fftfreq(src.nx)))
    ep = np.exp(2j * np.pi * np.outer(up, np.fft.fftfreq(src.np)))
    out = (ex @ np.fft.fft2(values) @ ep.T).real / (src.nx * src.np)
    outside = (ux < 0) | (ux > src.nx - 1)
    out[outside, :] = 0.0
    out[:, (up < 0) | (up > src.np - 1)] = 0.0
    return out


def stretch_Q(Q1: QuasiDistribution, lam: float, target: PhaseGrid | None = None) -> QuasiDistribution:
    """``Q_lam(z) = Q_1(z / sqrt(lam)) / lam``.

    On the default target, the source grid scaled by ``sqrt(lam)``, the
    values are just divided by ``lam``.  Other targets are filled by
    trigonometric (band-limited) interpolation of the source, which is exact
    to rounding for a Husimi distribution that has decayed at the source
    edges, since its spectrum is Gaussian-damped.
    """
    if Q1.kind is not Kind.HUSIMI:
        raise ValueError("stretch_Q expects a Husimi distribution")
    _check_lambda(lam, strict=False)
    s = np.sqrt(lam)
    if target is None:
        return QuasiDistribution(Q1.grid.scaled(s), Q1.values / lam, Kind.HUSIMI, Q1.units)
    _support_fits(Q1.values, Q1.grid, target, s)
    edge = Q1.grid.edge_mass(Q1.values)
    if edge > EDGE_REL * Q1.values.max():
        raise GridError(f"Husimi values reach {edge:.2e} at the source grid edge; interpolation needs decay there")
    values = _fourier_resample(Q1.values, Q1.grid, target.x / s, target.p / s) / lam
    return QuasiDistribution(target, np.clip(values, 0.0, None), Kind.HUSIMI, Q1.units)


def _blur_matrix(src_nodes, dst_nodes, step, scale, var):
    d = dst_nodes[:, None] - scale * src_nodes[None, :]
    return np.exp(-0.5 * d**2 / var) / np.sqrt(2 * np.pi * var) * step


def _blur_matrices(W1: QuasiDistribution, lam: float, target: PhaseGrid):
    vx, vp = vacuum_kernel_variances(W1.units)
    s = np.sqrt(lam)
    src = W1.grid
    kx = _blur_matrix(src.x, target.x, src.dx, s, vx * (lam - 1))
    kp = _blur_matrix(src.p, target.p, src.dp, s, vp * (lam - 1))
    return kx, kp


def stretch_W(W1: QuasiDistribution, lam: float, target: PhaseGrid | None = None, rel: float = 1e-6) -> QuasiDistribution:
    """Stretched Wigner distribution by direct real-space quadrature.

    ``W_lam(z) = int W_1(u) N(z - sqrt(lam) u; (lam - 1) V) du`` where ``V``
    holds the vacuum variances ``x_scale^2/2`` and ``p_scale^2/2``.  The
    Gaussian factorizes, so the quadrature is ``Kx @ W_1 @ Kp.T``; nothing
    is interpolated and the target grid is arbitrary.  The default target is
    :func:`stretched_grid`.

    Raises
    ------
    DomainError
        If ``lam <= 1``, or if the result exceeds ``rel`` of its peak on the
        boundary nodes of the target (the grid is too small).
    """
    if W1.kind is not Kind.WIGNER:
        raise ValueError("stretch_W expects a Wigner distribution")
    _check_lambda(lam, strict=True)
    target = stretched_grid(W1, lam) if target is None else target
    kx, kp = _blur_matrices(W1, lam, target)
    values = kx @ W1.values @ kp.T
    edge = target.edge_mass(values)
    if edge > rel * np.abs(values).max():
        raise DomainError(
            f"stretched Wigner reaches {edge:.2e} on the boundary of x [{target.x_min:.3g}, {target.x_max:.3g}], "
            f"p [{target.p_min:.3g}, {target.p_max:.3g}]; enlarge the target (see stretched_grid)"
        )
    return QuasiDistribution(target, values, Kind.WIGNER, W1.units)


def _half_widths(values: np.ndarray, grid: PhaseGrid, rel: float) -> tuple[float, float]:
    sig = np.abs(values) > rel * np.abs(values).max()
    return float(np.abs(grid.x[np.any(sig, axis=1)]).max()), float(np.abs(grid.p[np.any(sig, axis=0)]).max())


def stretched_grid(
    W1: QuasiDistribution,
    lam: float,
    Q1: QuasiDistribution | None = None,
    n: int | None = None,
    rel: float = 1e-6,
    square: bool = True,
) -> PhaseGrid:
    """Smallest symmetric grid that holds the stretched distributions.

    A trial grid covering the scaled support of ``W_1`` plus four blur
    widths is certain to contain ``W_lam``; the stretched Wigner values are
    computed there and the returned half-widths are the extents where
    ``|W_lam|`` exceeds ``rel`` of its peak, widened to the scaled support of
    ``Q_1`` when given.  With ``square`` both axes get the same extent in
    natural units.
    """
    _check_lambda(lam, strict=False)
    n = W1.grid.nx if n is None else n
    s = np.sqrt(lam)
    rx, rp = _half_widths(W1.values, W1.grid, rel)
    rx, rp = rx * s, rp * s
    if lam > 1:
        vx, vp = vacuum_kernel_variances(W1.units)
        trial = PhaseGrid.symmetric(
            rx + 4 * np.sqrt(vx * (lam - 1)) + W1.grid.dx * s, rp + 4 * np.sqrt(vp * (lam - 1)) + W1.grid.dp * s, 2 * n
        )
        kx, kp = _blur_matrices(W1, lam, trial)
        rx, rp = _half_widths(kx @ W1.values @ kp.T, trial, rel)
    if Q1 is not None:
        qx, qp = _half_widths(Q1.values, Q1.grid, rel)
        rx, rp = max(rx, qx * s), max(rp, qp * s)
    if square:
        # truncation leaves a faint ring of high-number states, which is round in natural units
        r = max(rx / W1.units.x_scale, rp / W1.units.p_scale)
        rx, rp = r * W1.units.x_scale, r * W1.units.p_scale
    # one spare node beyond the support on each side
    pad = n / (n - 4)
    return PhaseGrid.symmetric(rx * pad, rp * pad, n)


def fourier_bandwidth_check(W1: QuasiDistribution, Wl: QuasiDistribution, lam: float, floor: float = 1e-6) -> float:
    """Largest deviation of ``F(W_lam) / F(scaled W_1)`` from the Gaussian filter.

    ``W_lam`` must live on the source grid scaled by ``sqrt(lam)``.  In the
    alpha wavenumber ``kappa`` the filter is ``exp(-(lam - 1) |kappa|^2 / 8)``.
    Only wavenumbers where the denominator exceeds ``floor`` times its
    maximum are compared.
    """
    grid = Wl.grid
    expected = W1.grid.scaled(np.sqrt(lam))
    if not np.allclose([grid.x_min, grid.x_max, grid.p_min, grid.p_max], [expected.x_min, expected.x_max, expected.p_min, expected.p_max]) \
            or grid.shape != W1.grid.shape:
        raise ValueError("fourier_bandwidth_check needs W_lam on the source grid scaled by sqrt(lam)")
    num = np.fft.fft2(Wl.values)
    den = np.fft.fft2(W1.values / lam)
    # alpha = (x/x_scale + i p/p_scale)/sqrt(2): kappa_x = sqrt(2) x_scale k_x
    kx = 2 * np.pi * np.fft.fftfreq(grid.nx, grid.dx) * np.sqrt(2) * W1.units.x_scale
    kp = 2 * np.pi * np.fft.fftfreq(grid.np, grid.dp) * np.sqrt(2) * W1.units.p_scale
    filt = np.exp(-(lam - 1) * (kx[:, None] ** 2 + kp[None, :] ** 2) / 8)
    mask = np.abs(den) > floor * np.abs(den).max()
    return float(np.max(np.abs(num[mask] / den[mask] - filt[mask])))


def _padded(s: FockState, extra: int) -> tuple[np.ndarray, np.ndarray]:
    big = s.dim + extra
    rho = np.zeros((big, big), dtype=complex)
    rho[: s.dim, : s.dim] = s.rho
    return rho, build_ladder(big)


def antinormal_moment(s: FockState, n: int, m: int) -> complex:
    """``Tr(rho a^n a^+^m)``, evaluated in a basis padded so truncation cannot bias it."""
    if n < 0 or m < 0 or n + m > 6:
        raise ValueError("moment orders must satisfy 0 <= n + m <= 6")
    tail = s.populations()[-max(4, n + m):].sum()
    if tail > 1e-10:
        warnings.warn(f"population {tail:.2e} near the truncation corner biases the moment", TruncationWarning, stacklevel=2)
    rho, a = _padded(s, n + m + 1)
    op = np.linalg.matrix_power(a, n) @ np.linalg.matrix_power(a.conj().T, m)
    return complex(np.trace(rho @ op))


def squeeze_unitary(s: FockState, alpha_sq: float, max_occupation: float | None = None) -> FockState:
    """Rescale ``X -> sqrt(alpha_sq) X`` and ``P -> P / sqrt(alpha_sq)`` unitarily.

    Uses ``S = exp((z/2)(a^2 - a^+^2))`` with ``z = ln(alpha_sq)/2`` and
    returns ``S^+ rho S``, computed in a doubled basis and truncated back.
    """
    if not alpha_sq > 0:
        raise DomainError(f"alpha_sq must be positive, got {alpha_sq!r}")
    if alpha_sq == 1:
        return s
    z = 0.5 * np.log(alpha_sq)
    rho, a = _padded(s, s.dim)
    ad = a.conj().T
    S = expm((z / 2) * (a @ a - ad @ ad))
    out = (S.conj().T @ rho @ S)
    cap = s.dim / 8 if max_occupation is None else max_occupation
    nbar = float(np.real(np.trace(out @ (ad @ a))))
    if nbar > cap:
        raise TruncationError(f"squeezed occupation {nbar:.3g} exceeds the cap {cap:.3g} for dim={s.dim}")
    kept = out[: s.dim, : s.dim]
    lost = 1.0 - np.trace(kept).real
    if lost > 1e-10:
        raise TruncationError(f"squeezing pushes weight {lost:.2e} beyond dim={s.dim}")
    kept = 0.5 * (kept + kept.conj().T)
    return FockState(kept / np.trace(kept).real)


def commutator_rescale_report(lam: float, units: SystemUnits = SystemUnits(), dim: int = 16) -> dict:
    """Commutator of ``X/sqrt(lam)`` and ``P/sqrt(lam)`` against ``hbar/lam``."""
    _check_lambda(lam, strict=False)
    if dim < 16:
        raise InvalidDimensionError("the matrix check needs dim >= 16")
    x, p = quadratures(build_ladder(dim), units)
    xs, ps = x / np.sqrt(lam), p / np.sqrt(lam)
    comm = (xs @ ps - ps @ xs)[:-1, :-1]
    expected = 1j * units.hbar / lam * np.eye(dim - 1)
    return {
        "lambda": float(lam),
        "commutator": units.hbar / lam,
        "min_uncertainty": units.hbar / (2 * lam),
        "matrix_error": float(np.max(np.abs(comm - expected))),
        "dim": dim,
    }


MOMENT_ORDERS = tuple((n, m) for n in range(5) for m in range(5) if n + m <= 4)


@dataclass
class StretchReport:
    lam: float
    entropy_before: float
    entropy_after: float
    antinormal_moments: dict = field(default_factory=dict)
    min_wigner: float = 0.0
    sup_dist_W_Q: float = 0.0
    trace_distance_to_input: float = 0.0

    def __post_init__(self):
        if not self.lam > 1:
            raise DomainError(f"a stretch report needs lambda > 1, got {self.lam!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d["antinormal_moments"] = {
            key: {"before": [v[0].real, v[0].imag], "after": [v[1].real, v[1].imag]}
            for key, v in self.antinormal_moments.items()
        }
        d["version"] = __version__
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def stretch_report(
    s: FockState,
    lam: float,
    grid: PhaseGrid,
    units: SystemUnits = SystemUnits(),
    **evolve_kwargs,
) -> StretchReport:
    """Evolve ``s`` through the stretch channel and summarize the result.

    The Wigner and Husimi distributions of the evolved state are sampled on
    :func:`stretched_grid` built from the input's distributions on ``grid``.
    """
    _check_lambda(lam, strict=True)
    out = evolve_stretch(s, lam, **evolve_kwargs)
    target = stretched_grid(wigner_from_state(s, grid, units), lam, husimi_from_state(s, grid, units))
    w = wigner_from_state(out, target, units)
    q = husimi_from_state(out, target, units)
    moments = {
        f"{n},{m}": (antinormal_moment(s, n, m), antinormal_moment(out, n, m)) for n, m in MOMENT_ORDERS
    }
    return StretchReport(
        lam=float(lam),
        entropy_before=von_neumann_entropy(s),
        entropy_after=von_neumann_entropy(out),
        antinormal_moments=moments,
        min_wigner=float(w.values.min()),
        sup_dist_W_Q=w.sup_distance(q),
        trace_distance_to_input=trace_distance(out, s),
    )


def write_reports(path, reports: Sequence[StretchReport], config: dict):
    """One JSON file holding a lambda sweep and the configuration that produced it."""
    payload = {"config": config, "version": __version__, "reports": [r.to_dict() for r in reports]}
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
