import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.domain.grid import make_grid
from src.domain.state import PrimitiveState
from src.errors import DomainError, PositivityError
from src.params.physical import PhysParams
from src.transform.identities import (
    momentum_forms_agree,
    momentum_source,
    pressure_gradient_identity_residual,
)
from src.transform.variables import (
    effective_velocity,
    enthalpy,
    positive_power,
    sound_speed,
    to_primitive,
    to_reformulated,
)
from src.verify.convergence import convergence_order


pytestmark = pytest.mark.unit


def _bump_state(grid, amplitude=0.5):
    rho = 0.5 + amplitude * np.exp(-(((grid.nodes - 1.5) / 0.2) ** 2))
    u = 0.3 * np.sin(np.pi * (grid.nodes - grid.a) / (grid.r_max - grid.a))
    return PrimitiveState(t=0.0, rho=rho, u=u)


@settings(max_examples=50, deadline=None)
@given(
    gamma=st.floats(min_value=1.01, max_value=3.0),
    delta=st.floats(min_value=0.67, max_value=0.95),
    amplitude=st.floats(min_value=0.0, max_value=5.0),
)
def test_density_survives_the_round_trip(gamma, delta, amplitude):
    grid = make_grid(1.0, 2.0, 24)
    params = PhysParams(gamma=gamma, delta=delta, a=1.0)
    state = _bump_state(grid, amplitude)
    back = to_primitive(to_reformulated(state, params, grid), params)
    np.testing.assert_allclose(back.rho, state.rho, rtol=1e-10)
    np.testing.assert_array_equal(back.u, state.u)


def test_reformulated_fields():
    grid = make_grid(1.0, 2.0, 32)
    params = PhysParams(gamma=1.4, delta=0.8, a=1.0)
    state = _bump_state(grid)
    reform = to_reformulated(state, params, grid)
    np.testing.assert_allclose(reform.h, 2.0 * state.rho ** (-0.2))
    np.testing.assert_allclose(reform.phi, state.rho**0.6)


def test_constant_density_has_v_equal_u():
    grid = make_grid(1.0, 2.0, 16)
    params = PhysParams(gamma=1.2, delta=0.8, a=1.0)
    u = np.linspace(-1.0, 1.0, 16)
    v = effective_velocity(grid, np.full(16, 0.7), u, params)
    np.testing.assert_allclose(v, u, atol=1e-12)


def test_derivative_routes_agree_on_smooth_data():
    grid = make_grid(1.0, 2.0, 400)
    params = PhysParams(gamma=1.2, delta=0.8, a=1.0)
    state = _bump_state(grid)
    via_h = effective_velocity(grid, state.rho, state.u, params, via="h")
    via_rho = effective_velocity(grid, state.rho, state.u, params, via="rho")
    assert np.max(np.abs(via_h - via_rho)) < 1e-2 * np.max(np.abs(via_h))
    with pytest.raises(DomainError):
        effective_velocity(grid, state.rho, state.u, params, via="other")


def test_positive_power_rejects_vacuum():
    with pytest.raises(PositivityError):
        positive_power(np.array([1.0, 0.0]), -0.2)
    np.testing.assert_allclose(positive_power(np.array([4.0]), 0.5), [2.0])


def test_sound_speed_isothermal_is_unity():
    params = PhysParams(gamma=1.0, delta=0.8, a=1.0, alpha=1.5)
    np.testing.assert_allclose(sound_speed(np.array([0.1, 1.0, 10.0]), params), 1.0)


@given(
    delta=st.floats(min_value=0.67, max_value=0.99),
    values=st.lists(st.floats(min_value=-10.0, max_value=10.0), min_size=4, max_size=4),
)
def test_source_groupings_are_the_same_expression(delta, values):
    u, v, u_r, r = (np.array([x]) for x in values[:3] + [abs(values[3]) + 1.0])
    reformulated = momentum_source(u, v, u_r, r, delta, "reformulated")
    expanded = momentum_source(u, v, u_r, r, delta, "expanded")
    np.testing.assert_allclose(reformulated, expanded, rtol=1e-12, atol=1e-10)


def test_momentum_forms_agree_on_a_state():
    grid = make_grid(1.0, 2.0, 32)
    params = PhysParams(gamma=1.2, delta=0.8, a=1.0)
    reform = to_reformulated(_bump_state(grid), params, grid)
    assert momentum_forms_agree(reform, grid, params) < 1e-12
    with pytest.raises(DomainError):
        momentum_source(reform.u, reform.v, reform.u, grid.nodes, 0.8, "other")


def test_pressure_identity_residual_is_second_order():
    params = PhysParams(gamma=1.4, delta=0.8, a=1.0)
    residuals = []
    for n in (100, 400):
        grid = make_grid(1.0, 2.0, n)
        reform = to_reformulated(_bump_state(grid), params, grid)
        residuals.append(pressure_gradient_identity_residual(reform, params, grid))
    assert residuals[1] < residuals[0] / 8.0


def test_pressure_identity_converges_at_second_order_on_exponential_density():
    params = PhysParams(gamma=1.2, delta=0.8, a=1.0)
    ladder = (50, 100, 200, 400)
    residuals, spacings = [], []
    for n in ladder:
        grid = make_grid(1.0, 5.0, n)
        state = PrimitiveState(t=0.0, rho=np.exp(-grid.nodes), u=np.zeros(n))
        reform = to_reformulated(state, params, grid)
        residuals.append(pressure_gradient_identity_residual(reform, params, grid))
        spacings.append(4.0 / n)
    assert np.all(np.diff(residuals) < 0.0)
    assert convergence_order(residuals, spacings) == pytest.approx(2.0, abs=0.25)


def test_enthalpy_gradient_is_the_pressure_force():
    params = PhysParams(gamma=1.2, delta=0.8, a=1.0)
    rho = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(enthalpy(rho, params), 6.0 * rho**0.2, rtol=1e-14)

    isothermal = PhysParams(gamma=1.0, delta=0.8, a=1.0, alpha=1.5)
    np.testing.assert_allclose(enthalpy(rho, isothermal), np.log(rho), rtol=1e-14)
    with pytest.raises(PositivityError):
        enthalpy(np.array([1.0, 0.0]), isothermal)
    with pytest.raises(PositivityError):
        enthalpy(np.array([1.0, -1.0]), params)
