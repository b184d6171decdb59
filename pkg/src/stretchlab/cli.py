"""Command-line front end writing figure data and verification reports.

Every command writes into ``<output>/<run-name>/`` where ``<output>`` defaults
to ``$STRETCHLAB_OUTPUT`` (or ``./stretchlab-output``).  CSV files get a JSON
sidecar of the same stem; JSON reports embed the configuration and version.

Exit codes: 0 when every in-run assertion holds, 1 when one fails (details in
``failures.json``), 2 for invalid configuration or refused preconditions.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from . import case_studies as cs
from . import entropy_curves as ec
from . import moyal_dynamics as md
from . import stretch_quantum as sq
from .errors import NumericalError, StretchLabError
from .fock_core import SystemUnits, cat_state, coherent_state, fock_state, thermal_state
from .phasegrid import PhaseGrid, write_grid_csv
from .quasiprob import husimi_from_state, negativity_report, wigner_from_state
from .verification import CHECKS, _plain, run_checks

OUTPUT_ENV = "STRETCHLAB_OUTPUT"
DEFAULT_OUTPUT = "stretchlab-output"
STATES = ("vacuum", "fock1", "coherent", "cat", "thermal")


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _dump(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def _write_json(path: Path, payload: dict, config: dict) -> Path:
    payload = dict(payload)
    payload["config"] = config
    payload["version"] = __version__
    path.write_text(_dump(payload))
    return path


def _write_columns(path: Path, cols: dict, config: dict) -> tuple[Path, Path]:
    names = list(cols)
    data = np.column_stack([np.asarray(cols[k], dtype=float) for k in names])
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for row in data:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    side = path.with_suffix(".json")
    side.write_text(_dump({"columns": names, "config": config, "version": __version__}))
    return path, side


def make_state(name: str, dim: int, alpha: float | None = None, nbar: float = 1.0):
    if name == "vacuum":
        return fock_state(0, dim)
    if name == "fock1":
        return fock_state(1, dim)
    if name == "coherent":
        return coherent_state(1.0 if alpha is None else alpha, dim)
    if name == "cat":
        return cat_state(1.5 if alpha is None else alpha, dim)
    if name == "thermal":
        return thermal_state(nbar, dim)
    raise ConfigError(f"unknown state {name!r}")


class Run:
    """Output directory, config echo and assertion bookkeeping for one command."""

    def __init__(self, args: argparse.Namespace):
        self.config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output", "run_name")}
        self.config["units"] = {"hbar": args.hbar, "mass": args.mass, "omega": args.omega}
        root = Path(args.output or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT)
        self.dir = root / (args.run_name or args.command)
        self.failures: list[dict] = []

    def open(self):
        try:
            self.dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output directory {self.dir}: {exc}")
        if not os.access(self.dir, os.W_OK):
            raise ConfigError(f"output directory {self.dir} is not writable")
        stale = self.dir / "failures.json"
        if stale.exists():
            stale.unlink()

    def path(self, name: str) -> Path:
        return self.dir / name

    def check(self, name: str, ok: bool, **info):
        if not ok:
            self.failures.append({"check": name, **info})

    def finish(self) -> int:
        if self.failures:
            _write_json(self.path("failures.json"), {"failures": self.failures}, self.config)
            for f in self.failures:
                print(f"FAIL {f['check']}: {json.dumps(_plain(f), sort_keys=True)}", file=sys.stderr)
            return 1
        return 0


def _valid_units(args) -> bool:
    return all(np.isfinite(v) and v > 0 for v in (args.hbar, args.mass, args.omega))


def _units(args) -> SystemUnits:
    return SystemUnits(args.hbar, args.mass, args.omega)


def _need(cond: bool, msg: str):
    if not cond:
        raise ConfigError(msg)


# --- commands -------------------------------------------------------------


def cmd_curves(args, run: Run):
    h = args.hbar
    _need(0 < args.sigma_min < args.sigma_max, "need 0 < --sigma-min < --sigma-max")
    _need(args.n_sigma >= 2, "--n-sigma must be at least 2")
    _need(all(lam >= 1 for lam in args.lambdas), "--lambdas must be >= 1")
    run.open()
    sig = np.geomspace(args.sigma_min, args.sigma_max, args.n_sigma) * h
    cols = ec.sample_curves(sig, args.lambdas, h)
    _write_columns(run.path("curves.csv"), cols, run.config)

    ok = ~np.isnan(cols["s_quantum"])
    run.check("classical_above_quantum", bool(np.all(cols["difference"][ok] > 0)))
    run.check("quantum_zero", abs(ec.s_quantum(0.5 * h, h)) < 1e-12, value=ec.s_quantum(0.5 * h, h))
    run.check("classical_zero", abs(ec.s_classical(h / math.e, h)) < 1e-12, value=ec.s_classical(h / math.e, h))
    gap2 = ec.s_classical(2 * h, h) - ec.s_quantum(2 * h, h)
    run.check("gap_at_two_hbar", gap2 < 0.011, value=gap2, threshold=0.011)
    prev = None
    for lam in sorted({1.0, *args.lambdas}):
        m = lam * sig >= 0.5 * h
        gap = np.full(sig.shape, np.inf)
        gap[m] = np.abs(ec.s_quantum_rescaled(sig[m], lam, h) - ec.s_classical(sig[m], h))
        if prev is not None:
            both = m & np.isfinite(prev)
            run.check(f"rescaled_gap_shrinks_{lam:g}", bool(np.all(gap[both] <= prev[both] + 1e-15)))
        prev = gap


def _stretch_inputs(args):
    _need(args.dim >= 2, "--dim must be at least 2")
    _need(args.grid_n >= 16 and args.grid_half > 0, "need --grid-n >= 16 and --grid-half > 0")
    state = make_state(args.state, args.dim, args.alpha, args.nbar)
    grid = PhaseGrid.symmetric(args.grid_half, n=args.grid_n)
    return state, grid


def cmd_stretch_sweep(args, run: Run):
    _need(all(lam > 1 for lam in args.lambdas), "--lambdas must all exceed 1")
    state, grid = _stretch_inputs(args)
    spec = sq.LindbladSpec.stretch(args.dim)
    # refuse before any work if the largest stretch overflows the basis
    sq.check_truncation(state, spec, math.log(max(args.lambdas)), args.max_occupation)
    run.open()
    units = _units(args)
    lams = sorted(args.lambdas)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        reports = [sq.stretch_report(state, lam, grid, units, max_occupation=args.max_occupation) for lam in lams]
    config = dict(run.config, warnings=sorted({str(w.message) for w in caught}))
    sq.write_reports(run.path("stretch_sweep.json"), reports, config)
    for r in reports:
        run.check(f"entropy_increase_{r.lam:g}", r.entropy_after >= r.entropy_before - 1e-10,
                  before=r.entropy_before, after=r.entropy_after)
    mins = [r.min_wigner for r in reports]
    if mins[0] < 0:
        run.check("negativity_suppressed", bool(np.all(np.diff(mins) >= 0)), min_wigner=mins)


def cmd_wigner_demo(args, run: Run):
    state, grid = _stretch_inputs(args)
    _need(args.lam is None or args.lam > 1, "--lam must exceed 1")
    run.open()
    units = _units(args)
    w = wigner_from_state(state, grid, units)
    q = husimi_from_state(state, grid, units)
    header = {"config": run.config, "version": __version__}
    write_grid_csv(run.path("wigner.csv"), grid, w.values, dict(header, kind="wigner"))
    write_grid_csv(run.path("husimi.csv"), grid, q.values, dict(header, kind="husimi"))
    neg = negativity_report(w)
    summary = {"negativity": vars(neg), "husimi_min": float(q.values.min())}
    if args.lam is not None:
        target = sq.stretched_grid(w, args.lam, q)
        wl, ql = sq.stretch_W(w, args.lam, target), sq.stretch_Q(q, args.lam, target)
        write_grid_csv(run.path("wigner_stretched.csv"), target, wl.values, dict(header, kind="wigner", lam=args.lam))
        write_grid_csv(run.path("husimi_stretched.csv"), target, ql.values, dict(header, kind="husimi", lam=args.lam))
        summary["stretched"] = {"negativity": vars(negativity_report(wl)), "sup_W_minus_Q": wl.sup_distance(ql)}
        run.check("negativity_reduced", wl.values.min() >= w.values.min())
    _write_json(run.path("summary.json"), summary, run.config)
    run.check("husimi_nonnegative", q.values.min() >= -1e-12, value=q.values.min())


def cmd_blackbody(args, run: Run):
    _need(0 < args.x_min < args.x_max and args.n >= 2, "need 0 < --x-min < --x-max and --n >= 2")
    _need(min(args.nu, args.h, args.c, args.k_b) > 0, "--nu, --h, --c, --k-b must be positive")
    run.open()
    xs = np.geomspace(args.x_min, args.x_max, args.n)
    cols = {k: [] for k in ("x", "beta", "planck", "rayleigh_jeans", "planck_over_rj", "rj_over_planck", "series_1", "series_2")}
    for x in xs:
        p = cs.RadianceParams(args.nu, x / (args.h * args.nu), args.h, args.c, args.k_b)
        pl, rj = cs.planck(p), cs.rayleigh_jeans(p)
        for k, v in zip(cols, (p.x, p.beta, pl, rj, pl / rj, rj / pl if pl > 0 else np.inf,
                               cs.planck_beta_series(p, 1), cs.planck_beta_series(p, 2))):
            cols[k].append(v)
    _write_columns(run.path("blackbody.csv"), cols, run.config)
    ident = float(np.max(np.abs(np.array(cols["planck_over_rj"]) - xs / np.expm1(xs))))
    o1, o2 = cs.series_convergence_order(1, nu=args.nu), cs.series_convergence_order(2, nu=args.nu)
    summary = {"identity_error": ident, "order_1": o1, "order_2": o2,
               "series_1_equals_rj": bool(np.array_equal(cols["series_1"], cols["rayleigh_jeans"]))}
    _write_json(run.path("summary.json"), summary, run.config)
    run.check("planck_ratio_identity", ident < 1e-12, value=ident)
    run.check("series_1_equals_rj", summary["series_1_equals_rj"])
    run.check("order_1", abs(o1 - 1) <= 0.15, value=o1)
    run.check("order_2", abs(o2 - 2) <= 0.15, value=o2)


def cmd_thermal(args, run: Run):
    _need(all(b > 0 for b in args.betas) and len(args.betas) >= 2, "--betas needs two or more positive values")
    _need(2 <= args.n_fit <= len(args.betas), "--n-fit must be between 2 and the number of betas")
    _need(args.quartic >= 0, "--quartic must be non-negative")
    units = _units(args)
    coeffs = (0.0, 0.0, 0.5 * units.mass * units.omega**2, 0.0, args.quartic)
    grid = PhaseGrid.symmetric(args.grid_half, n=args.grid_n)
    res = cs.thermal_wigner_correction(coeffs, args.betas, args.dim, grid, units, args.n_fit)
    run.open()
    _write_json(run.path("thermal.json"), res.as_dict(), run.config)
    run.check("distance_slope", res.slope >= 1.7, value=res.slope, threshold=1.7)


def cmd_qubit(args, run: Run):
    _need(0 <= args.strength <= 1, "--strength must lie in [0, 1]")
    run.open()
    rng = np.random.default_rng(args.seed)
    qs = []
    for _ in range(2 * args.n_pairs):
        v = rng.normal(size=3)
        qs.append(cs.Qubit.from_bloch(v / np.linalg.norm(v) * rng.uniform(0, 1)))
    alias = cs.two_slit_aliasing(args.n_phase)
    contr = cs.contraction_check(list(zip(qs[::2], qs[1::2])), args.strength)
    shells = cs.bloch_shell_check([0.0, 0.3, 0.7, 1.0], args.strength, seed=args.seed)
    _write_json(run.path("qubit.json"), {"aliasing": alias, "contraction": contr, "shells": shells}, run.config)
    diff = max(alias["mixture_difference"], alias["phase_average_difference"])
    run.check("aliasing", diff < 1e-14, value=diff)
    run.check("contraction", contr["max_contraction_error"] < 1e-12, value=contr["max_contraction_error"])
    run.check("entropy_increases", bool(contr["entropy_increases"]))
    run.check("shells", shells["radius_error"] < 1e-12 and shells["entropy_spread"] < 1e-12)


def cmd_moyal(args, run: Run):
    _need(all(lam > 1 for lam in args.lambdas) and len(args.lambdas) >= 2, "--lambdas needs two or more values above 1")
    _need(args.quartic > 0, "--quartic must be positive for the correction to exist")
    state, grid = _stretch_inputs(args)
    units = _units(args)
    w1 = wigner_from_state(state, grid, units)
    H = md.HamiltonianSpec.quartic(args.quartic, units.mass, units.omega)
    lams = sorted(args.lambdas)
    r0 = md.classicality_ratio(w1, H)
    ratios = [md.classicality_ratio(sq.stretch_W(w1, lam, sq.stretched_grid(w1, lam, rel=1e-12), rel=1e-10), H)
              for lam in lams]
    run.open()
    norm = [r / r0 for r in ratios]
    slope = cs.loglog_slope(lams, norm)
    _write_columns(run.path("ratios.csv"), {"lambda": lams, "ratio": ratios, "relative": norm}, run.config)
    harm = md.HamiltonianSpec.harmonic(units.mass, units.omega)
    identity = float(np.max(np.abs(md.moyal_rhs(w1, harm, 2) - md.poisson_rhs(w1, harm))))
    summary = {"ratio_unstretched": r0, "slope": slope, "harmonic_moyal_minus_poisson": identity}
    if args.recurrence:
        period = 2 * np.pi / units.omega
        dt = min(args.dt, md.max_stable_dt(grid, harm, 1, units.hbar)) if args.dt else md.max_stable_dt(grid, harm, 1, units.hbar)
        back = md.evolve_wigner(w1, harm, 1, period, dt)
        summary["recurrence_error"] = back.sup_distance(w1)
        summary["recurrence_dt"] = period / math.ceil(period / dt - 1e-9)
        run.check("recurrence", summary["recurrence_error"] < 1e-5, value=summary["recurrence_error"])
    _write_json(run.path("summary.json"), summary, run.config)
    run.check("harmonic_identity", identity < 1e-6, value=identity)
    run.check("ratio_decreasing", bool(np.all(np.diff(ratios) < 0)), ratios=ratios)
    run.check("ratio_slope", abs(slope + 1) <= 0.2, value=slope)


def cmd_verify_all(args, run: Run):
    only = None
    if args.only:
        only = [t.strip() for t in args.only.split(",") if t.strip()]
        unknown = sorted(set(only) - set(CHECKS))
        _need(not unknown, f"unknown topics {unknown}; choose from {sorted(CHECKS)}")
    _need(args.dim >= 2, "--dim must be at least 2")
    run.open()
    cfg = {"dim": args.dim, "inject_fault": args.inject_fault, "seed": args.seed}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        results = run_checks(cfg, only)
    width = max(len(r.topic) for r in results)
    for r in results:
        line = f"{r.topic:<{width}}  {r.status.upper():<7}  {r.seconds:7.2f} s"
        if r.status == "refused":
            line += f"  {r.details['reason']}"
        print(line)
    # timings vary between runs so the report keeps only statuses and details
    _write_json(run.path("verify_all.json"), {"results": [dict(r.as_dict(), seconds=None) for r in results]}, run.config)
    for r in results:
        run.check(r.topic, r.ok, status=r.status, details=r.details)
    n_ok = sum(r.ok for r in results)
    print(f"{n_ok}/{len(results)} checks passed")


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help=f"output root (default ${OUTPUT_ENV} or ./{DEFAULT_OUTPUT})")
    common.add_argument("--run-name", help="subdirectory of the output root (default: the command name)")
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("--omega", type=float, default=1.0)

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", choices=STATES, default="fock1")
    state.add_argument("--alpha", type=float, default=None, help="coherent/cat amplitude (defaults 1.0 / 1.5)")
    state.add_argument("--nbar", type=float, default=1.0, help="thermal occupation")
    state.add_argument("--dim", type=int, default=64)
    state.add_argument("--grid-n", type=int, default=128)
    state.add_argument("--grid-half", type=float, default=10.0)

    parser = argparse.ArgumentParser(prog="stretchlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curves", parents=[common], help="entropy-uncertainty curves as CSV")
    p.add_argument("--sigma-min", type=float, default=0.5)
    p.add_argument("--sigma-max", type=float, default=8.0)
    p.add_argument("--n-sigma", type=int, default=400)
    p.add_argument("--lambdas", type=_floats, default=[2.0, 10.0, 100.0])
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("stretch-sweep", parents=[common, state], help="stretch-channel reports over a lambda list")
    p.add_argument("--lambdas", type=_floats, default=[1.5, 2.0, 4.0])
    p.add_argument("--max-occupation", type=float, default=None, help="override the dim/8 occupation cap")
    p.set_defaults(func=cmd_stretch_sweep)

    p = sub.add_parser("wigner-demo", parents=[common, state], help="Wigner and Husimi grids as CSV")
    p.add_argument("--lam", type=float, default=None, help="also write the stretched distributions")
    p.set_defaults(func=cmd_wigner_demo)

    p = sub.add_parser("blackbody", parents=[common], help="Planck and Rayleigh-Jeans radiance")
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--x-min", type=float, default=1e-3)
    p.add_argument("--x-max", type=float, default=20.0)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--k-b", type=float, default=1.0)
    p.set_defaults(func=cmd_blackbody)

    p = sub.add_parser("thermal", parents=[common], help="quantum vs classical thermal densities")
    p.add_argument("--betas", type=_floats, default=[1.0, 0.7, 0.5, 0.35, 0.25])
    p.add_argument("--quartic", type=float, default=0.0, help="coefficient of x^4 in the potential")
    p.add_argument("--dim", type=int, default=64)
    p.add_argument("--grid-n", type=int, default=128)
    p.add_argument("--grid-half", type=float, default=12.0)
    p.add_argument("--n-fit", type=int, default=3)
    p.set_defaults(func=cmd_thermal)

    p = sub.add_parser("qubit", parents=[common], help="two-slit aliasing and depolarizing checks")
    p.add_argument("--strength", type=float, default=0.5)
    p.add_argument("--n-pairs", type=int, default=4)
    p.add_argument("--n-phase", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_qubit)

    p = sub.add_parser("moyal", parents=[common, state], help="classicality ratio under stretching")
    p.set_defaults(state="coherent")
    p.add_argument("--quartic", type=float, default=5e-4)
    p.add_argument("--lambdas", type=_floats, default=[2.0, 4.0, 8.0])
    p.add_argument("--recurrence", action="store_true", help="also run one harmonic period and compare")
    p.add_argument("--dt", type=float, default=None)
    p.set_defaults(func=cmd_moyal)

    p = sub.add_parser("verify-all", parents=[common], help="run every invariant suite")
    p.add_argument("--dim", type=int, default=64)
    p.add_argument("--inject-fault", choices=["shrink"], default=None, help="swap the jump operator a^dagger for a")
    p.add_argument("--only", default=None, help=f"comma-separated topics from: {', '.join(CHECKS)}")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run = Run(args) if _valid_units(args) else None
    try:
        if run is None:
            raise ConfigError("--hbar, --mass and --omega must be positive")
        args.func(args, run)
    except NumericalError as exc:
        run.failures.append({"check": "numerics", "error": str(exc)})
    except (ConfigError, StretchLabError, ValueError) as exc:
        # refused preconditions (truncation, grid, domain) exit like usage errors
        msg = str(exc) if isinstance(exc, ConfigError) else f"{type(exc).__name__}: {exc}"
        m = re.search(r"raise dim to at least (\d+)", msg)
        if m:
            msg += f" (rerun with --dim {1 << (int(m.group(1)) - 1).bit_length()})"
        print(f"{parser.prog} {args.command}: error: {msg}", file=sys.stderr)
        return 2
    return run.finish()


if __name__ == "__main__":
    sys.exit(main())
