from __future__ import annotations

from pathlib import Path
from typing import Callable, Dict, Optional

import numpy as np

from src.cli.config import ConfigModel
from src.domain.grid import RadialGrid
from src.domain.state import PrimitiveState
from src.errors import ConfigError

Profile = tuple[np.ndarray, np.ndarray]
PresetBuilder = Callable[[RadialGrid, ConfigModel], Profile]


def steady(grid: RadialGrid, cfg: ConfigModel) -> Profile:
    """Uniform density at rest."""

    return np.full(grid.n, cfg.steady_density), np.zeros(grid.n)


def gaussian_bump(grid: RadialGrid, cfg: ConfigModel) -> Profile:
    width = grid.r_max - grid.a
    center = cfg.bump_center if cfg.bump_center is not None else grid.a + 0.3 * width
    spread = cfg.bump_width if cfg.bump_width is not None else 0.1 * width
    rho = cfg.bump_amplitude * np.exp(-(((grid.nodes - center) / spread) ** 2))
    return rho, np.zeros(grid.n)


def decaying(grid: RadialGrid, cfg: ConfigModel) -> Profile:
    return np.exp(-grid.nodes), np.zeros(grid.n)


PRESETS: Dict[str, PresetBuilder] = {
    "steady": steady,
    "gaussian-bump": gaussian_bump,
    "decaying": decaying,
}


def _read_profile(path: Path, grid: RadialGrid) -> np.ndarray:
    try:
        table = np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read profile {path}: {exc}") from exc
    if table.shape[1] != 2 or table.shape[0] < 2:
        raise ConfigError(f"{path}: expected at least two rows of 'r,value'")
    r, values = table[:, 0], table[:, 1]
    if np.any(np.diff(r) <= 0.0):
        raise ConfigError(f"{path}: radii must be strictly increasing")
    if r[0] > grid.nodes[0] or r[-1] < grid.nodes[-1]:
        raise ConfigError(f"{path}: radii must cover the cell centres of [{grid.a}, {grid.r_max}]")
    return np.interp(grid.nodes, r, values)


def initial_state(
    cfg: ConfigModel, grid: RadialGrid, base_dir: Optional[Path] = None
) -> PrimitiveState:
    """Vacuum-data (ρ0, u0) for ``cfg.init``: a preset name or ``rho.csv[,u.csv]``."""

    if cfg.init is None:
        raise ConfigError("init is not set")
    if cfg.init in PRESETS:
        rho, u = PRESETS[cfg.init](grid, cfg)
        return PrimitiveState(t=0.0, rho=rho, u=u)

    base_dir = base_dir or Path.cwd()
    paths = [base_dir / part.strip() for part in cfg.init.split(",")]
    if len(paths) > 2:
        raise ConfigError(f"init expects 'rho.csv[,u.csv]' or one of {sorted(PRESETS)}")
    rho = _read_profile(paths[0], grid)
    if np.any(rho < 0.0):
        raise ConfigError(f"{paths[0]}: density must be nonnegative")
    u = _read_profile(paths[1], grid) if len(paths) == 2 else np.zeros(grid.n)
    return PrimitiveState(t=0.0, rho=rho, u=u)
