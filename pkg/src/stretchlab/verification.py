"""Desk-scale invariant suite behind ``stretchlab verify-all``.

Every check returns a :class:`CheckResult`; a precondition refusal (for
example a truncation too small for the requested stretch) is reported as
``refused`` rather than silently producing numbers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import case_studies as cs
from . import entropy_curves as ec
from . import moyal_dynamics as md
from . import stretch_classical as sc
from . import stretch_quantum as sq
from .errors import StretchLabError, TruncationError
from .fock_core import (
    FockState,
    cat_state,
    coherent_state,
    fock_state,
    harmonic_hamiltonian,
    gibbs_state,
    thermal_state,
    von_neumann_entropy,
)
from .phasegrid import PhaseGrid
from .quasiprob import husimi_from_state, wigner_from_state


@dataclass
class CheckResult:
    topic: str
    status: str
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        return {"topic": self.topic, "status": self.status, "details": self.details, "seconds": round(self.seconds, 3)}


def _states(dim: int) -> dict:
    return {
        "vacuum": fock_state(0, dim),
        "fock1": fock_state(1, dim),
        "coherent": coherent_state(1.0, dim),
        "cat": cat_state(1.5, dim),
        "thermal": thermal_state(1.0, dim),
    }


def check_entropy_uncertainty(cfg: dict) -> dict:
    sig = np.geomspace(0.5, 8, 400)
    sc_, sq_ = ec.s_classical(sig), ec.s_quantum(sig)
    gaps = [np.abs(ec.s_quantum_rescaled(sig[sig * lam >= 0.5], lam) - ec.s_classical(sig[sig * lam >= 0.5]))
            for lam in (1, 2, 10, 100)]
    monotone = all(np.all(gaps[i + 1] <= gaps[i][-gaps[i + 1].size:] + 1e-15) for i in range(3))
    window = (sig >= 1) & (sig <= 8)
    d = {
        "dominance": bool(np.all(sc_ > sq_)),
        "quantum_zero": ec.s_quantum(0.5),
        "classical_zero": ec.s_classical(1 / np.e),
        "gap_at_2": ec.s_classical(2.0) - ec.s_quantum(2.0),
        "rescaled_monotone": bool(monotone),
        "gap_lambda_100": float(np.max(np.abs(ec.s_quantum_rescaled(sig[window], 100) - sc_[window]))),
    }
    d["pass"] = (d["dominance"] and abs(d["quantum_zero"]) < 1e-12 and abs(d["classical_zero"]) < 1e-12
                 and d["gap_at_2"] < 0.011 and monotone and d["gap_lambda_100"] < 5e-4)
    return d


def check_classical_stretch(cfg: dict) -> dict:
    grid = PhaseGrid.symmetric(6.0, n=cfg.get("classical_n", 128))
    shapes = {
        "gaussian": sc.gaussian(grid, 1.0, 1.0),
        "plateau": sc.plateau(grid, 2.5, 0.25),
        "bimodal": sc.bimodal(grid, 0.7, 4.0),
    }
    worst = 0.0
    for rho in shapes.values():
        s0 = sc.shannon_entropy(rho)
        for lam in (2, 4, 9):
            out = sc.apply_map(rho, sc.AffineMap2D.pure_stretch(lam), grid.scaled(np.sqrt(lam)))
            worst = max(worst, abs(sc.shannon_entropy(out) - s0 - np.log(lam)))
    wide = PhaseGrid.symmetric(10.0, n=cfg.get("classical_n", 128) * 2)
    g = sc.gaussian(wide, 1.0, 1.0)
    canon = 0.0
    for R in (sc.AffineMap2D.rotation(0.3), sc.AffineMap2D(((1, 0.5), (0, 1))), sc.AffineMap2D(((1.3, 0), (0, 1 / 1.3)))):
        canon = max(canon, abs(sc.shannon_entropy(sc.apply_map(g, R)) - sc.shannon_entropy(g)))
    jac, br = sc.jacobian_and_bracket(sc.AffineMap2D(((1.2, 0.7), (-0.4, 2.0))))
    return {"stretch_error": worst, "canonical_change": canon, "bracket_equals_jacobian": jac == br,
            "pass": worst < 2e-3 and canon < 2e-3 and jac == br}


def check_channel(cfg: dict) -> dict:
    dim = cfg.get("dim", 64)
    grid = PhaseGrid.symmetric(10.0, n=cfg.get("grid_n", 128))
    worst_q = worst_w = 0.0
    for name in ("vacuum", "fock1"):
        s = _states(dim)[name]
        w1, q1 = wigner_from_state(s, grid), husimi_from_state(s, grid)
        lam = 2.0
        out = sq.evolve_stretch(s, lam)
        target = sq.stretched_grid(w1, lam, q1)
        worst_q = max(worst_q, husimi_from_state(out, target).sup_distance(sq.stretch_Q(q1, lam, target)))
        worst_w = max(worst_w, wigner_from_state(out, target).sup_distance(sq.stretch_W(w1, lam, target)))
    return {"husimi_sup": worst_q, "wigner_sup": worst_w, "pass": worst_q < 1e-4 and worst_w < 1e-4}


def check_entropy_increase(cfg: dict) -> dict:
    dim = cfg.get("dim", 64)
    fault = cfg.get("inject_fault") == "shrink"
    make = sq.LindbladSpec.shrink if fault else sq.LindbladSpec.stretch
    spec = make(dim)
    min_step = np.inf
    min_total = np.inf
    for s in _states(dim).values():
        ent = [von_neumann_entropy(s)]
        sq.lindblad_evolve(s, spec, np.log(2.0), callback=lambda t, r: ent.append(von_neumann_entropy(FockState(r / np.trace(r).real))))
        min_step = min(min_step, float(np.min(np.diff(ent))))
        min_total = min(min_total, ent[-1] - ent[0])
    crit = sq.entropy_criterion(spec)
    return {"jump": "a" if fault else "a_dagger", "min_step_change": min_step, "min_total_increase": min_total,
            "criterion": crit, "pass": min_step > -1e-10 and min_total > 0.1 and crit}


def check_negativity(cfg: dict) -> dict:
    dim = cfg.get("dim", 64)
    grid = PhaseGrid.symmetric(10.0, n=cfg.get("grid_n", 128))
    s = fock_state(1, dim)
    w1, q1 = wigner_from_state(s, grid), husimi_from_state(s, grid)
    mins, dists = [], []
    for lam in (1.5, 2, 4, 8, 16):
        target = sq.stretched_grid(w1, lam, q1)
        wl = sq.stretch_W(w1, lam, target)
        mins.append(float(wl.values.min()))
        dists.append(wl.sup_distance(sq.stretch_Q(q1, lam, target)))
    bound = all(abs(m) <= abs(w1.values.min()) / (0.9 * lam) for m, lam in zip(mins, (1.5, 2, 4, 8, 16)))
    return {"min_values": mins, "sup_W_minus_Q": dists, "bound": bound,
            "pass": bool(np.all(np.diff(mins) > 0) and mins[-1] < 0 and np.all(np.diff(dists) < 0) and bound)}


def check_moments(cfg: dict) -> dict:
    dim = cfg.get("dim", 64)
    worst = 0.0
    for s in (coherent_state(1.0, dim), thermal_state(1.0, dim)):
        out = sq.evolve_stretch(s, 2.0)
        for n, m in sq.MOMENT_ORDERS:
            before = sq.antinormal_moment(s, n, m)
            if abs(before) < 1e-12:
                continue
            after = sq.antinormal_moment(out, n, m)
            worst = max(worst, abs(after / before - 2.0 ** ((n + m) / 2)) / 2.0 ** ((n + m) / 2))
    return {"max_relative_error": worst, "pass": worst < 1e-3}


def check_black_body(cfg: dict) -> dict:
    ident = 0.0
    series_diff = 0.0
    for x in np.geomspace(1e-6, 30, 60):
        for nu in (0.5, 1.0, 3.0):
            p = cs.RadianceParams(nu=nu, beta=x / nu)
            ident = max(ident, abs(cs.planck(p) / cs.rayleigh_jeans(p) - x / np.expm1(x)))
            series_diff = max(series_diff, abs(cs.planck_beta_series(p, 1) - cs.rayleigh_jeans(p)))
    o1, o2 = cs.series_convergence_order(1), cs.series_convergence_order(2)
    return {"identity_error": ident, "order1_vs_rj": series_diff, "order1": o1, "order2": o2,
            "pass": ident < 1e-12 and series_diff == 0 and abs(o1 - 1) < 0.15 and abs(o2 - 2) < 0.15}


def check_thermal(cfg: dict) -> dict:
    betas = (1.0, 0.7, 0.5, 0.35, 0.25)
    dim = cfg.get("dim", 64)
    harm = cs.thermal_wigner_correction((0, 0, 0.5), betas, dim=dim)
    quart = cs.thermal_wigner_correction((0, 0, 0.5, 0, 0.1), betas, dim=dim)
    # entropy of the harmonic Gibbs state falls as beta rises
    h = harmonic_hamiltonian(dim)
    ents = [von_neumann_entropy(gibbs_state(h, b)) for b in (0.25, 0.5, 1.0, 2.0)]
    return {"harmonic_slope": harm.slope, "quartic_slope": quart.slope, "entropy_monotone": bool(np.all(np.diff(ents) < 0)),
            "pass": harm.slope >= 1.7 and quart.slope >= 1.7 and bool(np.all(np.diff(ents) < 0))}


def check_qubit(cfg: dict) -> dict:
    alias = cs.two_slit_aliasing()
    rng = np.random.default_rng(cfg.get("seed", 0))
    qs = []
    for _ in range(8):
        v = rng.normal(size=3)
        qs.append(cs.Qubit.from_bloch(v / np.linalg.norm(v) * rng.uniform(0, 1)))
    pairs = list(zip(qs[::2], qs[1::2]))
    contr = cs.contraction_check(pairs, 0.5)
    shells = cs.bloch_shell_check([0.0, 0.3, 0.7, 1.0], 0.4, seed=cfg.get("seed", 0))
    ok = (alias["mixture_difference"] < 1e-14 and alias["phase_average_difference"] < 1e-14
          and contr["max_contraction_error"] < 1e-12 and contr["entropy_increases"]
          and shells["radius_error"] < 1e-12 and shells["entropy_spread"] < 1e-12)
    return {"aliasing": alias, "contraction_error": contr["max_contraction_error"], "shells": shells, "pass": ok}


def check_moyal(cfg: dict) -> dict:
    grid = PhaseGrid.symmetric(8.0, n=128)
    dim = cfg.get("dim", 64)
    H = md.HamiltonianSpec.harmonic()
    w = wigner_from_state(fock_state(1, dim), grid)
    exact = float(np.max(np.abs(md.moyal_rhs(w, H, 2) - md.poisson_rhs(w, H))))
    src = PhaseGrid.symmetric(10.0, n=128)
    w1 = wigner_from_state(coherent_state(1.0, dim), src)
    Hq = md.HamiltonianSpec.quartic(5e-4)
    lams = (2, 4, 8)
    r0 = md.classicality_ratio(w1, Hq)
    ratios = [md.classicality_ratio(sq.stretch_W(w1, lam, sq.stretched_grid(w1, lam, rel=1e-12), rel=1e-10), Hq) / r0
              for lam in lams]
    slope = cs.loglog_slope(lams, ratios)
    return {"moyal_minus_poisson": exact, "ratios": ratios, "slope": slope,
            "pass": exact < 1e-6 and bool(np.all(np.diff(ratios) < 0)) and abs(slope + 1) <= 0.2}


CHECKS = {
    "entropy-uncertainty": check_entropy_uncertainty,
    "classical-stretch": check_classical_stretch,
    "quantum-channel": check_channel,
    "entropy-increase": check_entropy_increase,
    "negativity": check_negativity,
    "antinormal-moments": check_moments,
    "black-body": check_black_body,
    "thermal-limit": check_thermal,
    "qubit-aliasing": check_qubit,
    "moyal-dynamics": check_moyal,
}


def run_checks(cfg: dict, only=None) -> list[CheckResult]:
    results = []
    for topic, fn in CHECKS.items():
        if only and topic not in only:
            continue
        t0 = time.perf_counter()
        try:
            details = fn(cfg)
            status = "pass" if details.pop("pass") else "fail"
        except TruncationError as exc:
            details, status = {"reason": str(exc)}, "refused"
        except StretchLabError as exc:
            details, status = {"reason": f"{type(exc).__name__}: {exc}"}, "refused"
        results.append(CheckResult(topic, status, _plain(details), time.perf_counter() - t0))
    return results


def _plain(obj):
    """Convert numpy scalars so reports serialize to JSON."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
