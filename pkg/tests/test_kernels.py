import numpy as np
import pytest

from src.domain.grid import make_grid
from src.domain.state import PrimitiveState, ReformState
from src.errors import CFLViolation, DomainError, PositivityError, SingularSystemError
from src.kernels.momentum import (
    MomentumSolveConfig,
    pressure_force,
    step_momentum,
    viscous_operator,
)
from src.kernels.strain import strain_dissipation, strain_operator
from src.kernels.transport import (
    TransportScheme,
    check_cfl,
    face_mass,
    face_velocity,
    step_advected_scalar,
    step_continuity,
    step_effective_velocity,
    volumetric_expansion,
)
from src.kernels.tridiagonal import solve_tridiagonal, tridiagonal_matvec
from src.params.physical import PhysParams
from src.transform.variables import to_reformulated


pytestmark = pytest.mark.unit

PARAMS = PhysParams(gamma=1.2, delta=0.8, a=1.0)


def _bands(n, seed=0):
    rng = np.random.default_rng(seed)
    lower = rng.uniform(-1.0, 1.0, n)
    upper = rng.uniform(-1.0, 1.0, n)
    diag = 3.0 + rng.uniform(0.0, 1.0, n)
    return lower, diag, upper


def test_tridiagonal_matches_dense_solve():
    lower, diag, upper = _bands(12)
    rhs = np.arange(12, dtype=float)
    dense = np.diag(diag) + np.diag(lower[1:], -1) + np.diag(upper[:-1], 1)
    solution = solve_tridiagonal(lower, diag, upper, rhs)
    np.testing.assert_allclose(solution, np.linalg.solve(dense, rhs), rtol=1e-12)
    np.testing.assert_allclose(tridiagonal_matvec(lower, diag, upper, solution), rhs, atol=1e-12)


def test_tridiagonal_failures():
    zeros = np.zeros(5)
    with pytest.raises(SingularSystemError):
        solve_tridiagonal(zeros, zeros, zeros, np.ones(5))
    with pytest.raises(DomainError):
        solve_tridiagonal(np.ones(4), np.ones(5), np.ones(5), np.ones(5))


def test_check_cfl():
    grid = make_grid(1.0, 2.0, 10)
    assert check_cfl(np.array([1.0, -2.0]), 0.02, grid) == pytest.approx(0.4)
    with pytest.raises(CFLViolation):
        check_cfl(np.array([10.0]), 0.02, grid)
    with pytest.raises(DomainError):
        check_cfl(np.array([1.0]), 0.0, grid)


def test_face_velocity_boundaries():
    grid = make_grid(1.0, 2.0, 10)
    u = 3.0 * grid.nodes
    dirichlet = face_velocity(grid, u, "dirichlet", inner_value=0.5, outer_value=-1.0)
    assert dirichlet[0] == 0.5 and dirichlet[-1] == -1.0
    np.testing.assert_allclose(dirichlet[1:-1], 3.0 * grid.faces[1:-1])
    neumann = face_velocity(grid, u, "neumann")
    assert neumann[-1] == u[-1]
    with pytest.raises(DomainError):
        face_velocity(grid, u, "periodic")


def test_inverse_square_velocity_has_no_expansion():
    grid = make_grid(1.0, 3.0, 20, stretch=2.0)
    divergence = volumetric_expansion(grid, 0.7 / grid.faces**2)
    np.testing.assert_allclose(divergence, 0.0, atol=1e-12)


@pytest.mark.parametrize("limiter", ["none", "minmod"])
def test_continuity_conserves_shell_mass(limiter):
    grid = make_grid(1.0, 2.0, 40, stretch=1.5)
    rho = 1.0 + np.exp(-(((grid.nodes - 1.4) / 0.1) ** 2))
    u_face = 0.5 * np.sin(np.pi * (grid.faces - 1.0))
    weights = grid.nodes**2 * grid.dr
    new = step_continuity(rho, u_face, 0.5 * grid.min_dr, grid, limiter)
    assert np.sum(weights * new) == pytest.approx(np.sum(weights * rho), rel=1e-13)
    assert np.all(new > 0.0)


def test_continuity_rejects_large_steps():
    grid = make_grid(1.0, 2.0, 10)
    with pytest.raises(CFLViolation):
        step_continuity(np.ones(10), np.ones(11), 1.0, grid)


def test_scalar_at_rest_is_unchanged():
    grid = make_grid(1.0, 2.0, 16)
    q = np.linspace(1.0, 2.0, 16)
    for mode in ("upwind_fd", "characteristics"):
        out = step_advected_scalar(q, np.zeros(16), -0.2, 0.01, grid, mode=mode)
        np.testing.assert_allclose(out, q)


def test_scalar_stretching_guard():
    grid = make_grid(1.0, 2.0, 32)
    u = 0.1 * np.sin(np.pi * (grid.nodes - 1.0))
    with pytest.raises(PositivityError):
        step_advected_scalar(np.ones(32), u, 1e4, 0.01, grid)


def test_effective_velocity_relaxes_exactly_toward_u():
    grid = make_grid(1.0, 2.0, 16)
    phi = np.full(16, 0.5)
    out = step_effective_velocity(np.full(16, 2.0), np.zeros(16), phi, 0.1, grid, PARAMS)
    np.testing.assert_allclose(out, 2.0 * np.exp(-PARAMS.damping_coeff * 0.5 * 0.1))


def test_scheme_configuration():
    assert TransportScheme().mode == "conservative_fv"
    assert TransportScheme.from_mapping({}) == TransportScheme()
    assert TransportScheme("conservative_fv").scalar_mode == "upwind_fd"
    assert TransportScheme("characteristics").scalar_mode == "characteristics"
    scheme = TransportScheme.from_mapping(
        {"transport_mode": "characteristics", "limiter": "minmod"}
    )
    assert scheme.mode == "characteristics" and scheme.limiter == "minmod"
    with pytest.raises(DomainError):
        TransportScheme(mode="spectral")
    with pytest.raises(DomainError):
        MomentumSolveConfig(theta=0.3)
    with pytest.raises(DomainError):
        MomentumSolveConfig(outer_bc="periodic")


def test_viscous_operator_kernel_contains_inverse_square():
    grid = make_grid(1.0, 3.0, 30, stretch=2.0)
    c = 0.4
    operator = viscous_operator(grid, "dirichlet", c / grid.a**2, c / grid.r_max**2)
    np.testing.assert_allclose(operator.apply(c / grid.nodes**2), 0.0, atol=1e-8)


def _frozen_state(grid, u):
    ones = np.ones(grid.n)
    return ReformState(t=0.0, rho=ones, h=2.0 * ones, phi=ones, v=u, u=u)


@pytest.mark.parametrize("theta", [0.5, 1.0])
def test_momentum_keeps_kernel_velocity(theta):
    grid = make_grid(1.0, 2.0, 24)
    c = 0.3
    u = c / grid.nodes**2
    cfg = MomentumSolveConfig(theta=theta, include_sources=False)
    out = step_momentum(
        _frozen_state(grid, u),
        0.01,
        grid,
        PARAMS,
        cfg,
        inner_value=c / grid.a**2,
        outer_value=c / grid.r_max**2,
    )
    np.testing.assert_allclose(out, u, rtol=1e-9)


def test_momentum_at_rest_stays_at_rest():
    grid = make_grid(1.0, 2.0, 24)
    state = _frozen_state(grid, np.zeros(24))
    out = step_momentum(state, 0.01, grid, PARAMS, MomentumSolveConfig())
    np.testing.assert_array_equal(out, np.zeros(24))


def test_implicit_viscosity_damps_a_sine():
    grid = make_grid(1.0, 2.0, 32)
    u = 0.2 * np.sin(np.pi * (grid.nodes - 1.0))
    cfg = MomentumSolveConfig(include_sources=False)
    out = step_momentum(_frozen_state(grid, u), 0.05, grid, PARAMS, cfg)
    assert np.max(np.abs(out)) < np.max(np.abs(u))


def test_face_mass_takes_the_upwind_state():
    grid = make_grid(1.0, 2.0, 4)
    rho = np.array([1.0, 2.0, 3.0, 4.0])
    direction = np.array([0.0, 1.0, 0.0, -1.0, 0.0])
    out = face_mass(rho, grid, direction)
    np.testing.assert_allclose(out / grid.faces**2, [1.0, 1.0, 2.5, 4.0, 4.0])
    with pytest.raises(DomainError):
        face_mass(rho, grid, np.zeros(4))


def test_continuity_with_given_face_masses_conserves_mass():
    grid = make_grid(1.0, 2.0, 40, stretch=1.5)
    rho = 1.0 + 0.5 * np.exp(-(((grid.nodes - 1.4) / 0.1) ** 2))
    u_face = face_velocity(grid, 0.3 * np.sin(np.pi * (grid.nodes - 1.0)))
    upwind = face_mass(rho, grid, u_face)
    np.testing.assert_array_equal(
        step_continuity(rho, u_face, 0.001, grid, mass=upwind),
        step_continuity(rho, u_face, 0.001, grid),
    )
    mean = face_mass(rho, grid, np.zeros(grid.n + 1))
    out = step_continuity(rho, u_face, 0.001, grid, mass=mean)
    volume = grid.nodes**2 * grid.dr
    assert np.sum(volume * out) == pytest.approx(np.sum(volume * rho), rel=1e-14)
    with pytest.raises(DomainError):
        step_continuity(rho, u_face, 0.001, grid, mass=mean[:-1])


@pytest.mark.parametrize("outer_bc", ["dirichlet", "neumann"])
def test_strain_operator_is_the_gradient_of_the_dissipation(outer_bc):
    grid = make_grid(1.0, 2.0, 24, stretch=1.5)
    rng = np.random.default_rng(7)
    u = rng.uniform(-1.0, 1.0, grid.n)
    mu = rng.uniform(0.5, 2.0, grid.n)
    operator = strain_operator(grid, mu, PARAMS.delta, outer_bc)

    np.testing.assert_array_equal(operator.lower[1:], operator.upper[:-1])
    np.testing.assert_array_equal(operator.boundary, 0.0)
    expansion, shear = strain_dissipation(grid, u, mu, PARAMS.delta, outer_bc)
    assert expansion >= 0.0 and shear >= 0.0
    assert np.dot(operator.apply(u), u) == pytest.approx(-(expansion + shear), rel=1e-12)


def test_strain_operator_carries_wall_data():
    grid = make_grid(1.0, 2.0, 16)
    mu = np.ones(grid.n)
    operator = strain_operator(grid, mu, PARAMS.delta, "dirichlet", 0.2, -0.1)
    assert operator.boundary[0] != 0.0 and operator.boundary[-1] != 0.0
    np.testing.assert_array_equal(operator.boundary[1:-1], 0.0)
    u = np.linspace(0.2, -0.1, grid.n)
    wall_free = strain_operator(grid, mu, PARAMS.delta, "dirichlet")
    np.testing.assert_allclose(
        operator.apply(u) - wall_free.apply(u), operator.boundary, atol=1e-12
    )


def test_pressure_force_pairs_with_the_face_fluxes():
    grid = make_grid(1.0, 2.0, 20, stretch=1.5)
    rng = np.random.default_rng(3)
    u = rng.uniform(-1.0, 1.0, grid.n)
    u[0] = u[-1] = 0.0
    w = rng.uniform(0.5, 1.5, grid.n)
    mass = face_mass(rng.uniform(0.5, 1.5, grid.n), grid, face_velocity(grid, u))
    work = np.sum(mass * face_velocity(grid, u) * np.concatenate(([0.0], np.diff(w), [0.0])))
    assert np.dot(u, pressure_force(mass, w, grid)) == pytest.approx(work, rel=1e-12, abs=1e-12)


def test_pressure_force_pushes_down_the_density_gradient():
    grid = make_grid(1.0, 2.0, 32)
    rho = 2.0 - (grid.nodes - 1.0)
    state = to_reformulated(PrimitiveState(t=0.0, rho=rho, u=np.zeros(grid.n)), PARAMS, grid)
    out = step_momentum(state, 0.001, grid, PARAMS, MomentumSolveConfig())
    assert np.all(out > 0.0)


def test_momentum_forms_agree_on_smooth_data():
    grid = make_grid(1.0, 2.0, 64)
    rho = 1.0 + 0.2 * np.cos(np.pi * (grid.nodes - 1.0))
    u = 0.1 * np.sin(np.pi * (grid.nodes - 1.0))
    state = to_reformulated(PrimitiveState(t=0.0, rho=rho, u=u), PARAMS, grid)
    dt = 1e-3
    conservative = step_momentum(state, dt, grid, PARAMS, MomentumSolveConfig())
    reformulated = step_momentum(
        state, dt, grid, PARAMS, MomentumSolveConfig(form="reformulated")
    )
    change = np.linalg.norm(reformulated - u)
    assert change > 0.0
    assert np.linalg.norm(conservative - reformulated) < 0.2 * change


def test_momentum_form_configuration():
    assert MomentumSolveConfig().form == "conservative"
    cfg = MomentumSolveConfig.from_mapping({"momentum_form": "reformulated", "theta": "0.5"})
    assert cfg.form == "reformulated" and cfg.theta == 0.5
    with pytest.raises(DomainError):
        MomentumSolveConfig(form="primitive")
