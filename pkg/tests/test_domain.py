import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.domain.grid import RadialGrid, make_grid
from src.domain.norms import (
    WeightedNorm,
    l2_norm,
    midpoint_integral,
    radial_derivative,
    sup_norm,
    weighted_lp_norm,
)
from src.domain.state import PrimitiveState, ReformState
from src.errors import DomainError, PositivityError


pytestmark = pytest.mark.unit


def test_uniform_grid_layout():
    grid = make_grid(1.0, 2.0, 10)
    assert grid.n == 10
    assert grid.faces[0] == 1.0 and grid.faces[-1] == 2.0
    np.testing.assert_allclose(grid.dr, 0.1)
    np.testing.assert_allclose(grid.nodes, 1.05 + 0.1 * np.arange(10))
    assert grid.min_dr == pytest.approx(0.1)


def test_stretched_grid_widths_grow():
    grid = make_grid(1.0, 5.0, 40, stretch=4.0)
    assert grid.faces[0] == 1.0 and grid.faces[-1] == 5.0
    assert np.all(np.diff(grid.dr) > 0.0)
    assert grid.dr[-1] / grid.dr[0] == pytest.approx(4.0 ** (39 / 40), rel=1e-9)


@pytest.mark.parametrize(
    "args",
    [(0.0, 2.0, 10, 1.0), (1.0, 1.0, 10, 1.0), (1.0, 2.0, 3, 1.0), (1.0, 2.0, 10, 0.5)],
)
def test_make_grid_rejects_invalid(args):
    with pytest.raises(DomainError):
        make_grid(*args)


def test_from_faces_rejects_non_monotone():
    with pytest.raises(DomainError):
        RadialGrid.from_faces(np.array([1.0, 1.5, 1.4, 2.0]))


def test_check_field_rejects_wrong_size():
    grid = make_grid(1.0, 2.0, 8)
    with pytest.raises(DomainError):
        grid.check_field(np.ones(7), "rho")


def test_shell_mass_weights_approach_exact_volume():
    grid = make_grid(1.0, 2.0, 100)
    total = weighted_lp_norm(grid, np.ones(grid.n), np.ones(grid.n), 1.0, 2.0, 1.0)
    assert total == pytest.approx(7.0 / 3.0, abs=1e-4)


def test_midpoint_integral_is_exact_for_linear():
    grid = make_grid(1.0, 3.0, 17, stretch=2.0)
    assert midpoint_integral(grid, grid.nodes) == pytest.approx(4.0, rel=1e-12)


def test_radial_derivative_exact_for_quadratic_on_stretched_grid():
    grid = make_grid(1.0, 3.0, 25, stretch=3.0)
    np.testing.assert_allclose(radial_derivative(grid, grid.nodes**2), 2.0 * grid.nodes, atol=1e-9)


def test_norm_argument_checks():
    grid = make_grid(1.0, 2.0, 8)
    with pytest.raises(DomainError):
        weighted_lp_norm(grid, np.ones(8), np.ones(8), 0.5, 0.0, 0.0)
    with pytest.raises(DomainError):
        sup_norm(np.array([]))


def test_weighted_norm_records_its_weights():
    grid = make_grid(1.0, 2.0, 8)
    norm = WeightedNorm.measure(grid, np.full(8, 2.0), np.ones(8), 2.0, 0.0, 0.0)
    assert norm.p == 2.0
    assert norm.weight_exponent == 0.0
    assert norm.value == pytest.approx(2.0)
    assert l2_norm(grid, np.full(8, 2.0)) == pytest.approx(2.0)


@given(
    scale=st.floats(min_value=-50.0, max_value=50.0),
    p=st.floats(min_value=1.0, max_value=8.0),
)
def test_weighted_norm_is_homogeneous(scale, p):
    grid = make_grid(1.0, 2.0, 16)
    field = np.sin(grid.nodes)
    rho = 1.0 + grid.nodes
    base = weighted_lp_norm(grid, field, rho, p, 2.0 / p, 1.0 / p)
    scaled = weighted_lp_norm(grid, scale * field, rho, p, 2.0 / p, 1.0 / p)
    assert scaled == pytest.approx(abs(scale) * base, rel=1e-9, abs=1e-12)


def test_states_freeze_their_arrays():
    state = PrimitiveState(t=0.0, rho=np.ones(4), u=np.zeros(4))
    with pytest.raises(ValueError):
        state.rho[0] = 2.0
    assert state.size == 4
    assert [name for name, _ in state.arrays()] == ["rho", "u"]


def test_state_size_mismatch():
    with pytest.raises(DomainError):
        PrimitiveState(t=0.0, rho=np.ones(4), u=np.zeros(5))
    state = PrimitiveState(t=0.0, rho=np.ones(4), u=np.zeros(4))
    with pytest.raises(DomainError):
        state.check_grid(make_grid(1.0, 2.0, 5))


def test_check_floor():
    state = PrimitiveState(t=0.0, rho=np.array([0.5, 0.2, 0.7, 1.0]), u=np.zeros(4))
    state.check_floor(0.2)
    with pytest.raises(PositivityError):
        state.check_floor(0.3)


def test_reform_state_requires_positive_coefficients():
    ones = np.ones(4)
    with pytest.raises(PositivityError):
        ReformState(t=0.0, rho=ones, h=-ones, phi=ones, v=ones, u=ones)
    state = ReformState(t=0.0, rho=ones, h=ones, phi=ones, v=ones, u=ones)
    moved = state.with_fields(t=1.0, u=2.0 * ones)
    assert moved.t == 1.0
    np.testing.assert_array_equal(moved.primitive().u, 2.0 * ones)
