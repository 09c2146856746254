"""Diverge-merge traffic network dynamics: return-map analysis and CTM validation."""

from ._dmflow import (
    ConfigError,
    DmSpec,
    DomainError,
    InsufficientDataError,
    PiecewiseMap,
    UnsupportedRegimeError,
    analyze,
    beltway,
    build_map,
    dmn_classify,
    dmn_step,
    fixed_point,
    regime,
    regime_boundaries,
    scenario_spec,
    sweep,
    sweep_csv,
    validate,
    xi_grid,
)

__all__ = [
    "ConfigError",
    "DmSpec",
    "DomainError",
    "InsufficientDataError",
    "PiecewiseMap",
    "UnsupportedRegimeError",
    "analyze",
    "beltway",
    "build_map",
    "dmn_classify",
    "dmn_step",
    "fixed_point",
    "regime",
    "regime_boundaries",
    "scenario_spec",
    "sweep",
    "sweep_csv",
    "validate",
    "xi_grid",
]
