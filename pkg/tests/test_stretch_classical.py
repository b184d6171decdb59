import numpy as np
import pytest
from hypothesis import given, strategies as st

from stretchlab.errors import DomainError, GridError
from stretchlab.phasegrid import PhaseGrid
from stretchlab.stretch_classical import (
    AffineMap2D,
    PhaseDistribution,
    apply_map,
    bimodal,
    central_moment,
    decompose_stretch,
    gaussian,
    jacobian_and_bracket,
    plateau,
    shannon_entropy,
)

GRID = PhaseGrid.symmetric(6.0, n=256)
WIDE = PhaseGrid.symmetric(10.0, n=256)


def square(grid, half):
    return PhaseDistribution.from_function(grid, lambda X, P: ((np.abs(X) < half) & (np.abs(P) < half)).astype(float))


def test_uniform_entropy_is_log_area():
    rho = square(GRID, 0.5)
    area = np.count_nonzero(rho.values) * GRID.cell
    assert shannon_entropy(rho) == pytest.approx(np.log(area), abs=1e-12)


def test_uniform_square_stretch():
    # 20 x 20 nodes of spacing 0.05: a unit-area square
    grid = PhaseGrid.symmetric(3.2, n=128)
    rho = PhaseDistribution.from_function(
        grid, lambda X, P: ((X > -0.51) & (X < 0.49) & (P > -0.51) & (P < 0.49)).astype(float)
    )
    assert shannon_entropy(rho) == pytest.approx(0.0, abs=1e-12)
    # on the grid scaled by sqrt(lambda) every pre-image is a source node
    out = apply_map(rho, AffineMap2D.pure_stretch(4), grid.scaled(2.0))
    assert shannon_entropy(out) == pytest.approx(np.log(4), abs=1e-12)
    assert np.count_nonzero(out.values > 1e-9 * out.values.max()) * out.grid.cell == pytest.approx(4.0, abs=1e-12)


@pytest.mark.parametrize("sigma, expected", [(1 / np.e, 0.0), (1.0, 1.0), (2.0, 1 + np.log(2))])
def test_gaussian_entropy_against_quantum_cell(sigma, expected):
    # sigma is the product of the x and p widths; entropy measured in cells of 2 pi hbar
    rho = gaussian(WIDE, np.sqrt(sigma), np.sqrt(sigma))
    assert shannon_entropy(rho, cell=2 * np.pi) == pytest.approx(expected, abs=2e-3)


def test_identity_map():
    rho = bimodal(GRID, 0.7, 3.0)
    out = apply_map(rho, AffineMap2D())
    assert np.allclose(out.values, rho.values, atol=1e-14)


def test_quarter_turn_is_exact():
    # a quarter turn permutes the interior nodes of a symmetric grid
    rho = gaussian(GRID, 1.0, 0.6, x0=0.5)
    out = apply_map(rho, AffineMap2D.rotation(np.pi / 2))
    assert shannon_entropy(out) == pytest.approx(shannon_entropy(rho), abs=1e-6)


@pytest.mark.parametrize(
    "linear, expected",
    [
        (((np.sqrt(2), 0), (0, np.sqrt(2))), (2, 2)),
        (((1, 1), (0, 1)), (1, 1)),
        (((2, 0), (0, 1)), (2, 2)),
    ],
)
def test_jacobian_and_bracket(linear, expected):
    jac, br = jacobian_and_bracket(AffineMap2D(linear))
    assert jac == pytest.approx(expected[0], abs=1e-15)
    assert br == pytest.approx(expected[1], abs=1e-15)


@given(a=st.floats(-3, 3), b=st.floats(-3, 3), c=st.floats(-3, 3), d=st.floats(-3, 3))
def test_bracket_equals_jacobian(a, b, c, d):
    if abs(a * d - b * c) < 1e-6:
        return
    jac, br = jacobian_and_bracket(AffineMap2D(((a, b), (c, d))))
    assert jac == br


def test_moments_examples():
    rho = gaussian(GRID, 1.0, 0.7)
    assert central_moment(rho, 0, 0) == pytest.approx(1.0, abs=1e-12)
    # the grid has one more node on the negative side
    assert abs(central_moment(rho, 1, 0)) < 1e-8
    assert central_moment(rho, 2, 0) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValueError):
        central_moment(rho, 5, 4)


@pytest.mark.parametrize("lam", [2, 4])
def test_moment_scaling(lam):
    src = PhaseGrid.symmetric(6.0, n=512)
    rho = gaussian(src, 0.8, 0.6, x0=0.3, p0=-0.2)
    out = apply_map(rho, AffineMap2D.pure_stretch(lam), src.scaled(np.sqrt(lam)))
    for n in range(5):
        for m in range(5 - n):
            before = central_moment(rho, n, m)
            if abs(before) < 1e-3:
                continue
            assert central_moment(out, n, m) == pytest.approx(lam ** ((n + m) / 2) * before, rel=1e-4)


@pytest.mark.parametrize("make", [lambda g: gaussian(g, 1.0, 1.0), lambda g: plateau(g, 2.0, 0.2), lambda g: bimodal(g, 0.6, 3.0)])
@pytest.mark.parametrize("lam", [2, 4, 9])
def test_entropy_additivity(make, lam):
    rho = make(GRID)
    out = apply_map(rho, AffineMap2D.pure_stretch(lam), GRID.scaled(np.sqrt(lam)))
    assert shannon_entropy(out) - shannon_entropy(rho) == pytest.approx(np.log(lam), abs=2e-3)


FINE = PhaseGrid.symmetric(9.0, n=384)


@given(shear=st.floats(-0.5, 0.5), squeeze=st.floats(0.8, 1.25), theta=st.floats(0, 2 * np.pi))
def test_canonical_maps_keep_entropy(shear, squeeze, theta):
    R = AffineMap2D.rotation(theta) @ AffineMap2D(((squeeze, 0), (0, 1 / squeeze))) @ AffineMap2D(((1, shear), (0, 1)))
    rho = gaussian(FINE, 0.6, 0.6)
    assert abs(R.det() - 1) < 1e-12
    assert abs(shannon_entropy(apply_map(rho, R)) - shannon_entropy(rho)) < 2e-3


def test_disjoint_mixture():
    a = gaussian(WIDE, 0.6, 0.6, x0=-4)
    b = plateau(WIDE, 1.5, 0.2, x0=4)
    mix = PhaseDistribution(WIDE, 0.5 * a.values + 0.5 * b.values)
    expected = np.log(2) + 0.5 * shannon_entropy(a) + 0.5 * shannon_entropy(b)
    assert shannon_entropy(mix) == pytest.approx(expected, abs=2e-3)


def test_decompose_examples():
    U, T = decompose_stretch(AffineMap2D(((2, 0), (0, 2))))
    assert np.allclose(U.matrix, np.eye(2)) and np.allclose(T.matrix, 2 * np.eye(2))
    U, T = decompose_stretch(AffineMap2D(((4, 0), (0, 1))))
    assert np.allclose(U.matrix, np.diag([2, 0.5])) and np.allclose(T.matrix, 2 * np.eye(2))
    R = AffineMap2D.rotation(0.4) @ AffineMap2D.pure_stretch(2)
    U, T = decompose_stretch(R)
    assert np.allclose(U.matrix, AffineMap2D.rotation(0.4).matrix)
    assert np.allclose((T @ U).matrix, R.matrix)


@given(a=st.floats(0.3, 3), b=st.floats(-2, 2), c=st.floats(-2, 2), s=st.floats(-1, 1))
def test_decompose_recomposes(a, b, c, s):
    d = (2.5 + b * c) / a
    R = AffineMap2D(((a, b), (c, d)), (s, -s))
    U, T = decompose_stretch(R)
    assert U.det() == pytest.approx(1.0, abs=1e-9)
    assert np.allclose((T @ U).matrix, R.matrix)
    assert np.allclose((T @ U).shift, R.shift)


def test_refusals():
    with pytest.raises(DomainError):
        decompose_stretch(AffineMap2D.rotation(0.1))
    with pytest.raises(DomainError):
        AffineMap2D(((1, 2), (2, 4)))
    rho = gaussian(GRID, 1.0, 1.0)
    with pytest.raises(GridError, match="escapes"):
        apply_map(rho, AffineMap2D.pure_stretch(9))
    with pytest.raises(GridError):
        PhaseDistribution(GRID, np.ones(GRID.shape))
    with pytest.raises(ValueError):
        PhaseDistribution(GRID, -rho.values)
