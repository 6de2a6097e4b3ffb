from ._core import (
    ConfigError,
    SolverError,
    dimensionless_A,
    oracle_trajectory,
    read_trajectory,
    resolve_config,
    run,
    scenario_defaults,
    solve_laminate,
    volume_fraction,
)

__all__ = [
    "ConfigError",
    "SolverError",
    "dimensionless_A",
    "oracle_trajectory",
    "read_trajectory",
    "resolve_config",
    "run",
    "scenario_defaults",
    "solve_laminate",
    "volume_fraction",
]
