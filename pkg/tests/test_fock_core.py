import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_density, random_unitary
from stretchlab.errors import InvalidDimensionError, InvalidStateError
from stretchlab.fock_core import (
    FockState,
    SystemUnits,
    build_ladder,
    coherent_state,
    expectation,
    fock_state,
    gibbs_state,
    harmonic_hamiltonian,
    mean_occupation,
    polynomial_hamiltonian,
    pure_state,
    quadratures,
    thermal_state,
    trace_distance,
    von_neumann_entropy,
)


def test_ladder_elements():
    a = build_ladder(3)
    assert a[0, 1] == 1
    assert a[1, 2] == pytest.approx(np.sqrt(2))
    assert np.count_nonzero(a) == 2


def test_annihilates_vacuum():
    a = build_ladder(6)
    vac = np.zeros(6)
    vac[0] = 1
    assert np.all(a @ vac == 0)


def test_commutator_below_corner():
    a = build_ladder(10)
    c = a @ a.conj().T - a.conj().T @ a
    assert np.allclose(c[:-1, :-1], np.eye(9), atol=1e-14)
    # the corner carries the truncation defect
    assert c[-1, -1] == pytest.approx(-(10 - 1))


@pytest.mark.parametrize("bad", [1, 0, -3, 2.5])
def test_bad_dim(bad):
    with pytest.raises(InvalidDimensionError):
        build_ladder(bad)


def test_vacuum_quadratures():
    x, p = quadratures(build_ladder(8))
    vac = fock_state(0, 8)
    assert expectation(vac, x @ x).real == pytest.approx(0.5, abs=1e-14)
    assert abs(expectation(vac, x @ p + p @ x)) < 1e-14
    comm = (x @ p - p @ x)[:-1, :-1]
    assert np.allclose(comm, 1j * np.eye(7), atol=1e-13)


@given(hbar=st.floats(0.1, 5), mass=st.floats(0.2, 5), omega=st.floats(0.2, 5))
def test_quadrature_units(hbar, mass, omega):
    u = SystemUnits(hbar, mass, omega)
    x, p = quadratures(build_ladder(8), u)
    vac = fock_state(0, 8)
    assert expectation(vac, x @ x).real == pytest.approx(hbar / (2 * mass * omega), rel=1e-12)
    assert expectation(vac, p @ p).real == pytest.approx(hbar * mass * omega / 2, rel=1e-12)
    assert np.allclose((x @ p - p @ x)[:-1, :-1], 1j * hbar * np.eye(7), atol=1e-12 * hbar)


def test_units_reject_nonpositive():
    with pytest.raises(ValueError):
        SystemUnits(hbar=0)


def test_state_validation():
    with pytest.raises(InvalidStateError):
        FockState(np.array([[0.5, 0.2], [0.0, 0.5]]))
    with pytest.raises(InvalidStateError):
        FockState(np.diag([0.7, 0.7]))
    with pytest.raises(InvalidStateError):
        FockState(np.diag([1.2, -0.2]))


def test_entropy_examples():
    assert von_neumann_entropy(fock_state(0, 5)) == 0
    assert von_neumann_entropy(FockState(np.eye(2) / 2)) == pytest.approx(np.log(2), abs=1e-14)
    # (nbar+1) ln(nbar+1) - nbar ln nbar at nbar = 1, basis large enough to hold the tail
    s = thermal_state(1.0, 128)
    assert von_neumann_entropy(s) == pytest.approx(2 * np.log(2), abs=1e-12)
    p = 0.5 ** np.arange(1, 129)
    assert von_neumann_entropy(s) == pytest.approx(-np.sum(p * np.log(p)), abs=1e-12)


def test_trace_distance_examples():
    assert trace_distance(fock_state(0, 4), fock_state(1, 4)) == pytest.approx(1.0)
    s = coherent_state(0.7, 12)
    assert trace_distance(s, s) == 0
    plus = pure_state([1, 1])
    assert trace_distance(plus, FockState(np.eye(2) / 2)) == pytest.approx(0.5, abs=1e-14)


@given(seed=st.integers(0, 10_000), dim=st.integers(2, 10))
def test_entropy_unitary_invariance(seed, dim):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, dim, rank=rng.integers(1, dim + 1))
    u = random_unitary(rng, dim)
    a, b = FockState(rho), FockState(u @ rho @ u.conj().T)
    assert von_neumann_entropy(a) == pytest.approx(von_neumann_entropy(b), abs=1e-9)


@given(seed=st.integers(0, 10_000), dim=st.integers(2, 8))
def test_trace_distance_metric(seed, dim):
    rng = np.random.default_rng(seed)
    r, s, t = (FockState(random_density(rng, dim)) for _ in range(3))
    assert trace_distance(r, t) <= trace_distance(r, s) + trace_distance(s, t) + 1e-9
    u = random_unitary(rng, dim)
    rot = lambda q: FockState(u @ q.rho @ u.conj().T)
    assert trace_distance(rot(r), rot(s)) == pytest.approx(trace_distance(r, s), abs=1e-9)
    assert 0 <= trace_distance(r, s) <= 1


def test_gibbs_examples():
    h = harmonic_hamiltonian(40)
    cold = gibbs_state(h, 200.0)
    assert trace_distance(cold, fock_state(0, 40)) < 1e-12
    g = gibbs_state(h, np.log(2))
    pops = g.populations()
    assert np.allclose(pops[1:10] / pops[:9], 0.5, atol=1e-12)
    # geometric series 1/(e^{beta hbar omega} - 1), truncation tail 2^-40
    assert mean_occupation(g) == pytest.approx(1.0, abs=1e-9)


def test_gibbs_rejects():
    with pytest.raises(ValueError):
        gibbs_state(harmonic_hamiltonian(4), 0.0)
    with pytest.raises(InvalidStateError):
        gibbs_state(np.array([[0, 1], [0, 0]]), 1.0)


def test_gibbs_maximizes_entropy(rng):
    dim = 6
    h = harmonic_hamiltonian(dim).real
    g = gibbs_state(h, 0.5)
    e0, s0 = expectation(g, h).real, von_neumann_entropy(g)
    floor = np.linalg.eigvalsh(g.rho)[0]
    # traceless directions orthogonal to H keep trace and mean energy fixed
    basis = [np.eye(dim) / np.sqrt(dim)]
    hc = h - np.trace(h) / dim * np.eye(dim)
    basis.append(hc / np.linalg.norm(hc))
    for _ in range(100):
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        d = z + z.conj().T
        for b in basis:
            d = d - np.trace(b @ d) * b
        d *= rng.uniform(0.1, 0.9) * floor / np.linalg.norm(d, 2)
        s = FockState(g.rho + d)
        assert abs(expectation(s, h).real - e0) < 1e-6
        assert von_neumann_entropy(s) <= s0 + 1e-8


@pytest.mark.parametrize("make", [lambda d: coherent_state(1.0, d), lambda d: thermal_state(1.0, d), lambda d: fock_state(3, d)])
def test_truncation_consistency(make):
    small, big = make(64), make(128)
    aad = lambda s: expectation(s, build_ladder(s.dim) @ build_ladder(s.dim).conj().T).real
    # <a a^dagger> in the truncated basis misses the corner, so compare states with negligible tail
    assert abs(aad(small) - aad(big)) < 1e-8


def test_polynomial_hamiltonian_harmonic():
    assert np.allclose(polynomial_hamiltonian(20, (0, 0, 0.5)), harmonic_hamiltonian(20), atol=1e-12)


def test_polynomial_hamiltonian_exact_elements():
    # <0|X^4|0> = 3/4 in natural units, exact despite truncation
    h = polynomial_hamiltonian(6, (0, 0, 0, 0, 1.0))
    p2 = 0.25  # <0|P^2/2|0>
    assert h[0, 0].real == pytest.approx(0.75 + p2, abs=1e-13)
