import numpy as np
import pytest

from src.domain.grid import make_grid
from src.domain.state import PrimitiveState
from src.errors import DomainError, NonContractionError, PositivityError
from src.params.physical import PhysParams
from src.simulation.core import regularize_initial, stable_time_step
from src.simulation.picard import (
    ContractionTrace,
    PicardConfig,
    check_density,
    contraction_functional,
    picard_step,
    state_scale,
)
from src.transform.variables import to_reformulated


pytestmark = pytest.mark.unit

PARAMS = PhysParams(gamma=1.2, delta=0.8, a=1.0)


def _steady(grid, density=1.0):
    return to_reformulated(
        PrimitiveState(t=0.0, rho=np.full(grid.n, density), u=np.zeros(grid.n)), PARAMS, grid
    )


def _bump(grid):
    rho0 = 0.5 * np.exp(-(((grid.nodes - 1.5) / 0.3) ** 2))
    return regularize_initial(rho0, np.zeros(grid.n), 0.5, grid=grid, params=PARAMS)


def test_rest_state_is_a_fixed_point():
    grid = make_grid(1.0, 2.0, 16)
    state = _steady(grid)
    new, trace = picard_step(state, 0.01, grid, PARAMS, PicardConfig())
    assert trace.converged
    assert trace.gammas == (0.0,)
    assert new.t == pytest.approx(0.01)
    np.testing.assert_array_equal(new.rho, state.rho)
    np.testing.assert_array_equal(new.u, state.u)


def test_iteration_contracts_on_a_bump():
    grid = make_grid(1.0, 2.0, 32)
    state = _bump(grid)
    dt = 0.5 * stable_time_step(state, grid, PARAMS, 0.4)
    new, trace = picard_step(state, dt, grid, PARAMS, PicardConfig(gamma_tol=1e-16))
    assert trace.converged
    assert trace.iterations >= 2
    assert trace.gammas[-1] < trace.gammas[0]
    assert trace.min_density == new.rho.min()
    assert np.all(new.rho > 0.0)


def test_derived_fields_variant_matches_density():
    grid = make_grid(1.0, 2.0, 32)
    state = _bump(grid)
    dt = 0.5 * stable_time_step(state, grid, PARAMS, 0.4)
    new, _ = picard_step(state, dt, grid, PARAMS, PicardConfig(derived_fields=True))
    np.testing.assert_allclose(new.h, 2.0 * new.rho ** (PARAMS.delta - 1.0), rtol=1e-12)


def test_growing_functional_aborts(mocker):
    grid = make_grid(1.0, 2.0, 16)
    mocker.patch(
        "src.simulation.picard.contraction_functional", side_effect=[1.0, 2.0, 3.0, 4.0, 5.0]
    )
    with pytest.raises(NonContractionError):
        picard_step(_steady(grid), 0.01, grid, PARAMS, PicardConfig(max_iters=10))


def test_unconverged_iteration_is_reported(mocker, caplog):
    grid = make_grid(1.0, 2.0, 16)
    mocker.patch("src.simulation.picard.contraction_functional", return_value=1.0)
    _, trace = picard_step(_steady(grid), 0.01, grid, PARAMS, PicardConfig(max_iters=3))
    assert not trace.converged
    assert trace.iterations == 3
    assert "stopped after 3 iterations" in caplog.text


def test_density_is_checked_not_lifted():
    rho = np.array([0.05, 0.2, 0.5, 0.09])
    assert check_density(rho) is rho
    for bad in ([0.1, 0.0, 0.2, 0.3], [0.1, -1e-300, 0.2, 0.3], [0.1, np.nan, 0.2, 0.3]):
        with pytest.raises(PositivityError):
            check_density(np.array(bad))


def test_step_conserves_mass_to_round_off():
    grid = make_grid(1.0, 2.0, 64, stretch=1.5)
    state = _bump(grid).with_fields(u=0.3 * np.sin(np.pi * (grid.nodes - 1.0)))
    dt = 0.5 * stable_time_step(state, grid, PARAMS, 0.4)
    new, _ = picard_step(state, dt, grid, PARAMS, PicardConfig(gamma_tol=1e-16))
    volume = grid.nodes**2 * grid.dr
    before, after = np.sum(volume * state.rho), np.sum(volume * new.rho)
    assert abs(after - before) <= 1e-13 * before


def test_functional_and_scale():
    grid = make_grid(1.0, 2.0, 16)
    state = _steady(grid)
    assert contraction_functional(state, state, grid) == 0.0
    assert state_scale(state, grid) > 0.0


def test_trace_properties():
    trace = ContractionTrace(gammas=(1.0, 0.5, 0.125), converged=True)
    assert trace.ratios == (0.5, 0.25)
    assert trace.iterations == 3
    assert trace.last == 0.125
    assert ContractionTrace(gammas=(), converged=False).last == 0.0


def test_picard_config_validation():
    with pytest.raises(DomainError):
        PicardConfig(max_iters=0)
    with pytest.raises(DomainError):
        PicardConfig(gamma_tol=0.0)
    cfg = PicardConfig.from_mapping({"max_iters": "5", "derived_fields": True})
    assert cfg.max_iters == 5 and cfg.derived_fields
