"""Flat ``key = value`` configuration files.

Parsing happens in two passes: :func:`parse_config_text` splits the text into
raw strings and rejects unknown or repeated keys, then :class:`ConfigModel`
coerces and validates the values.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal, Mapping, Optional

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from src.domain.grid import RadialGrid, make_grid
from src.errors import ConfigError, DomainError
from src.params.physical import PhysParams
from src.simulation.core import RunConfig

KNOWN_KEYS = (
    "gamma",
    "delta",
    "a",
    "r_max",
    "n",
    "stretch",
    "eta",
    "alpha",
    "t_end",
    "cfl",
    "theta",
    "max_iters",
    "gamma_tol",
    "output_every",
    "outer_bc",
    "momentum_form",
    "transport_mode",
    "limiter",
    "init",
    "override_admissibility",
    "derived_fields",
    "steady_density",
    "bump_amplitude",
    "bump_center",
    "bump_width",
    "mms_preset",
    "mms_ladder",
    "delta_min",
    "delta_max",
    "delta_step",
    "gamma_min",
    "gamma_max",
    "gamma_step",
)

REQUIRED_KEYS: dict[str, tuple[str, ...]] = {
    "run": ("gamma", "delta", "a", "r_max", "n", "t_end", "init"),
    "mms": ("mms_preset",),
    "sweep": ("delta_min", "delta_max", "delta_step"),
}


class ConfigModel(BaseModel):
    """Validated configuration; unset optional keys stay ``None``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    gamma: Optional[float] = None
    delta: Optional[float] = None
    a: Optional[float] = None
    r_max: Optional[float] = None
    n: Optional[int] = None
    stretch: float = 1.0
    eta: float = 0.01
    alpha: float = 0.0
    t_end: Optional[float] = None
    cfl: float = 0.4
    theta: float = 1.0
    max_iters: int = 20
    gamma_tol: float = 1e-18
    output_every: int = 10
    outer_bc: Literal["dirichlet", "neumann"] = "dirichlet"
    momentum_form: Literal["conservative", "reformulated"] = "conservative"
    transport_mode: Literal["conservative_fv", "characteristics"] = "conservative_fv"
    limiter: Literal["none", "minmod"] = "none"
    init: Optional[str] = None
    override_admissibility: bool = False
    derived_fields: bool = False
    steady_density: float = 1.0
    bump_amplitude: float = 0.5
    bump_center: Optional[float] = None
    bump_width: Optional[float] = None
    mms_preset: Optional[Literal["transport", "diffusion", "coupled"]] = None
    mms_ladder: Optional[tuple[int, ...]] = None
    delta_min: Optional[float] = None
    delta_max: Optional[float] = None
    delta_step: Optional[float] = None
    gamma_min: Optional[float] = None
    gamma_max: Optional[float] = None
    gamma_step: Optional[float] = None

    @field_validator("mms_ladder", mode="before")
    @classmethod
    def _split_ladder(cls, value):
        if isinstance(value, str):
            return tuple(part.strip() for part in value.split(",") if part.strip())
        return value

    def phys_params(self) -> PhysParams:
        return PhysParams(
            gamma=self.gamma,
            delta=self.delta,
            a=self.a,
            eta=self.eta,
            alpha=self.alpha,
        )

    def grid(self) -> RadialGrid:
        return make_grid(self.a, self.r_max, self.n, self.stretch)

    def run_config(self) -> RunConfig:
        return RunConfig.from_mapping(self.model_dump(exclude_none=True))


def parse_config_text(text: str) -> dict[str, str]:
    """Split ``key = value`` lines; ``#`` starts a comment."""

    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        mapping[key] = value
    return mapping


def validate_config(mapping: Mapping[str, object], command: str) -> ConfigModel:
    try:
        model = ConfigModel.model_validate(dict(mapping))
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
    missing = [key for key in REQUIRED_KEYS.get(command, ()) if getattr(model, key) is None]
    if missing:
        raise ConfigError(f"{command} needs keys: {', '.join(missing)}")
    return model


def load_config(path: str | Path, command: str) -> ConfigModel:
    """Read and validate a configuration file for ``command``."""

    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return validate_config(parse_config_text(text), command)


def _render_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(str(item) for item in value)
    return str(value)


def render_config(model: ConfigModel) -> str:
    """Render the keys that were set back into a ConfigFile."""

    lines = []
    for key in KNOWN_KEYS:
        if key not in model.model_fields_set:
            continue
        value = getattr(model, key)
        if value is not None:
            lines.append(f"{key} = {_render_value(value)}")
    return "\n".join(lines) + "\n"


def build_physics(model: ConfigModel) -> tuple[PhysParams, RadialGrid, RunConfig]:
    """Construct the solver objects, mapping range errors to :class:`ConfigError`."""

    try:
        return model.phys_params(), model.grid(), model.run_config()
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
