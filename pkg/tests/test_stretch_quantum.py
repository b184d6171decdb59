import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_density
from stretchlab import stretch_quantum as sq
from stretchlab.errors import DomainError, StabilityError, TruncationError
from stretchlab.fock_core import (
    FockState,
    SystemUnits,
    build_ladder,
    cat_state,
    coherent_state,
    expectation,
    fock_state,
    quadratures,
    thermal_state,
    trace_distance,
    von_neumann_entropy,
)
from stretchlab.phasegrid import PhaseGrid
from stretchlab.quasiprob import husimi_from_state, to_alpha, wigner_from_state

DIM = 64
GRID = PhaseGrid.symmetric(10.0, n=128)


def a_mean(s):
    return expectation(s, build_ladder(s.dim))


def test_vacuum_moment_doubles():
    out = sq.lindblad_evolve(fock_state(0, DIM), sq.LindbladSpec.stretch(DIM, math.log(2)), 1.0)
    assert sq.antinormal_moment(out, 1, 1).real == pytest.approx(2.0, abs=1e-9)
    assert abs(a_mean(out)) < 1e-14


def test_coherent_amplitude_grows():
    out = sq.lindblad_evolve(coherent_state(1.0, DIM), sq.LindbladSpec.stretch(DIM, math.log(2)), 1.0)
    assert a_mean(out).real == pytest.approx(math.sqrt(2), abs=1e-8)


def test_entropy_criterion_examples():
    assert sq.entropy_criterion(sq.LindbladSpec.stretch(12))
    assert not sq.entropy_criterion(sq.LindbladSpec.shrink(12))
    assert sq.entropy_criterion(sq.LindbladSpec(((1.0, np.eye(12)),)))


def test_growth_rate():
    assert sq.occupation_growth_rate(sq.LindbladSpec.stretch(32, 0.7)) == pytest.approx(0.7, abs=1e-12)
    assert sq.occupation_growth_rate(sq.LindbladSpec.shrink(32, 0.7)) == pytest.approx(0.0, abs=1e-12)


def test_truncation_refused():
    with pytest.raises(TruncationError, match="raise dim to at least 128"):
        sq.evolve_stretch(fock_state(1, 64), 8.0)
    # an explicit cap lifts the refusal
    sq.check_truncation(fock_state(1, 64), sq.LindbladSpec.stretch(64), math.log(8), max_occupation=16)


def test_stability_refused():
    spec = sq.LindbladSpec.stretch(16)
    with pytest.raises(StabilityError, match="gamma\\*dt"):
        sq.lindblad_evolve(fock_state(0, 16), spec, 1.0, dt=0.2)
    with pytest.raises(StabilityError, match="RK4"):
        sq.lindblad_evolve(fock_state(0, 16), spec, 1.0, dt=0.09)


@given(seed=st.integers(0, 10_000), gamma=st.floats(0.2, 2.0))
def test_evolution_keeps_state_valid(seed, gamma):
    rng = np.random.default_rng(seed)
    s = FockState(random_density(rng, 32, support=3))
    out = sq.lindblad_evolve(s, sq.LindbladSpec.stretch(32, gamma), 0.3)
    assert abs(np.trace(out.rho).real - 1) < 1e-12
    assert np.max(np.abs(out.rho - out.rho.conj().T)) < 1e-12
    assert np.linalg.eigvalsh(out.rho)[0] > -1e-8
    assert von_neumann_entropy(out) > von_neumann_entropy(s) - 1e-10


def test_shrink_lowers_entropy():
    s = thermal_state(1.0, DIM)
    out = sq.lindblad_evolve(s, sq.LindbladSpec.shrink(DIM), math.log(2))
    assert von_neumann_entropy(out) < von_neumann_entropy(s) - 0.1


def test_stretch_Q_vacuum():
    q1 = husimi_from_state(fock_state(0, 16), GRID)
    q2 = sq.stretch_Q(q1, 2.0)
    A = to_alpha(*q2.grid.mesh())
    assert np.max(np.abs(q2.alpha_density() - np.exp(-np.abs(A) ** 2 / 2) / (2 * np.pi))) < 1e-14
    assert q2.alpha_moment(1, 1).real == pytest.approx(2.0, abs=1e-7)
    assert np.array_equal(sq.stretch_Q(q1, 1.0).values, q1.values)
    with pytest.raises(DomainError):
        sq.stretch_Q(q1, 0.5)


def test_stretch_Q_resampled_target():
    q1 = husimi_from_state(coherent_state(1.0, 32), GRID)
    target = PhaseGrid(-12.0, 13.0, -11.0, 12.5, 150, 140)
    direct = husimi_from_state(sq.evolve_stretch(coherent_state(1.0, 32), 2.0), target)
    assert sq.stretch_Q(q1, 2.0, target).sup_distance(direct) < 1e-6


def test_stretch_W_vacuum_is_thermal():
    w1 = wigner_from_state(fock_state(0, DIM), GRID)
    w2 = sq.stretch_W(w1, 2.0)
    assert w2.sup_distance(wigner_from_state(thermal_state(1.0, DIM), w2.grid)) < 1e-6


def test_stretch_W_negativity_and_limit():
    w1 = wigner_from_state(fock_state(1, DIM), GRID)
    q1 = husimi_from_state(fock_state(1, DIM), GRID)
    dist = {}
    for lam in (2, 4, 16):
        target = sq.stretched_grid(w1, lam, q1)
        wl = sq.stretch_W(w1, lam, target)
        assert abs(wl.values.min()) < abs(w1.values.min())
        # closed form for this state: min W_lam = -1 / (pi (2 lam - 1)^2)
        assert wl.values.min() == pytest.approx(-1 / (np.pi * (2 * lam - 1) ** 2), abs=1e-10)
        dist[lam] = wl.sup_distance(sq.stretch_Q(q1, lam, target))
    assert dist[16] < dist[4] < dist[2]


def test_stretch_W_refusals():
    w1 = wigner_from_state(fock_state(0, 16), GRID)
    with pytest.raises(DomainError):
        sq.stretch_W(w1, 1.0)
    with pytest.raises(DomainError):
        sq.stretch_W(w1, 16.0, GRID)


@pytest.mark.parametrize("make", [lambda: fock_state(1, DIM), lambda: cat_state(1.5, DIM)])
def test_semigroup(make):
    w1 = wigner_from_state(make(), GRID)
    target = sq.stretched_grid(w1, 6.0)
    mid = sq.stretch_W(w1, 2.0, sq.stretched_grid(w1, 2.0, n=192))
    two_step = sq.stretch_W(mid, 3.0, target)
    assert two_step.sup_distance(sq.stretch_W(w1, 6.0, target)) < 1e-6


def test_fourier_bandwidth():
    w1 = wigner_from_state(fock_state(1, DIM), GRID)
    for lam in (1.5, 2.0):
        wl = sq.stretch_W(w1, lam, GRID.scaled(math.sqrt(lam)))
        assert sq.fourier_bandwidth_check(w1, wl, lam) < 1e-3
    with pytest.raises(ValueError):
        sq.fourier_bandwidth_check(w1, sq.stretch_W(w1, 2.0), 2.0)


def test_antinormal_examples():
    assert sq.antinormal_moment(fock_state(0, 8), 1, 1) == pytest.approx(1.0)
    assert sq.antinormal_moment(fock_state(0, 8), 0, 2) == 0
    alpha = 0.8 - 0.3j
    assert sq.antinormal_moment(coherent_state(alpha, 40), 1, 1).real == pytest.approx(abs(alpha) ** 2 + 1, abs=1e-12)
    with pytest.warns(sq.TruncationWarning):
        sq.antinormal_moment(coherent_state(2.5, 12), 1, 1)


@pytest.mark.parametrize("make", [lambda: coherent_state(0.7 + 0.5j, 40), lambda: thermal_state(0.5, 40)])
def test_antinormal_moments_match_husimi(make):
    s = make()
    q = husimi_from_state(s, GRID)
    for n, m in [(1, 0), (1, 1), (2, 1), (2, 2), (0, 3)]:
        assert q.alpha_moment(n, m) == pytest.approx(sq.antinormal_moment(s, n, m), abs=1e-8)


# the stretched thermal tail leaves ~3e-8 at the corner: flagged, far below the 1e-3 tolerance
@pytest.mark.filterwarnings("ignore::stretchlab.stretch_quantum.TruncationWarning")
@pytest.mark.parametrize("make", [lambda: coherent_state(1.0, DIM), lambda: thermal_state(1.0, DIM), lambda: cat_state(1.5, DIM)])
def test_antinormal_scaling(make):
    s = make()
    out = sq.evolve_stretch(s, 2.0)
    for n, m in sq.MOMENT_ORDERS:
        before = sq.antinormal_moment(s, n, m)
        if abs(before) < 1e-12:
            continue
        ratio = sq.antinormal_moment(out, n, m) / before
        assert abs(ratio - 2 ** ((n + m) / 2)) < 1e-3 * 2 ** ((n + m) / 2)


def test_symmetric_moments_do_not_scale():
    lam = 2.0
    out = sq.evolve_stretch(fock_state(0, DIM), lam)
    w = wigner_from_state(out, GRID)
    # symmetric second moment is lam - 1/2, not lam times the vacuum's 1/2
    assert w.moment(2, 0) == pytest.approx(lam - 0.5, abs=1e-4)
    assert w.moment(2, 0) - lam * 0.5 == pytest.approx((lam - 1) / 2, abs=1e-4)


def test_vacuum_not_fixed():
    out = sq.evolve_stretch(fock_state(0, DIM), 2.0)
    assert trace_distance(out, fock_state(0, DIM)) > 0.1


def test_squeeze_examples():
    vac = fock_state(0, 32)
    assert sq.squeeze_unitary(vac, 1.0) is vac
    out = sq.squeeze_unitary(vac, 2.0)
    x, p = quadratures(build_ladder(32))
    assert expectation(out, x @ x).real == pytest.approx(1.0, abs=1e-10)
    assert expectation(out, p @ p).real == pytest.approx(0.25, abs=1e-10)


@given(alpha_sq=st.floats(0.5, 2.0), seed=st.integers(0, 1000))
def test_squeeze_keeps_entropy(alpha_sq, seed):
    rng = np.random.default_rng(seed)
    s = FockState(random_density(rng, 48, support=3))
    assert von_neumann_entropy(sq.squeeze_unitary(s, alpha_sq)) == pytest.approx(von_neumann_entropy(s), abs=1e-9)


def test_squeeze_refused():
    with pytest.raises(TruncationError):
        sq.squeeze_unitary(coherent_state(1.0, 16), 20.0)


@pytest.mark.parametrize("lam", [1.0, 2.0, 10.0])
def test_commutator_report(lam):
    u = SystemUnits(hbar=0.6)
    rep = sq.commutator_rescale_report(lam, u)
    assert rep["commutator"] == pytest.approx(0.6 / lam)
    assert rep["matrix_error"] < 1e-12


def test_report_roundtrip(tmp_path):
    rep = sq.stretch_report(coherent_state(1.0, 64), 2.0, PhaseGrid.symmetric(8.0, n=64))
    d = json.loads(rep.to_json())
    assert d["lambda"] == 2.0
    assert d["antinormal_moments"]["1,1"]["after"][0] == pytest.approx(4.0, abs=1e-8)
    assert d["entropy_after"] > d["entropy_before"]
    path = tmp_path / "r.json"
    sq.write_reports(path, [rep], {"seed": 0})
    first = path.read_bytes()
    sq.write_reports(path, [rep], {"seed": 0})
    assert path.read_bytes() == first
    with pytest.raises(DomainError):
        sq.StretchReport(lam=1.0, entropy_before=0.0, entropy_after=0.0)
