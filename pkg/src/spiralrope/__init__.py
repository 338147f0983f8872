"""Spiral RoPE: multi-direction rotary position embeddings for 2D token grids."""

from .ropecore import (
    BoundsError,
    ConfigError,
    DimensionError,
    FrequencyAssignment,
    RopeConfig,
    RotationTable,
    apply_axial_2d,
    apply_rope_1d,
    apply_spiral,
    apply_table_grid,
    apply_with_table,
    assign_frequencies,
    check_relative_identity,
    make_direction_set,
    make_frequency_pool,
    precompute_table,
    project_position,
)

__all__ = [
    "BoundsError",
    "ConfigError",
    "DimensionError",
    "FrequencyAssignment",
    "RopeConfig",
    "RotationTable",
    "apply_axial_2d",
    "apply_rope_1d",
    "apply_spiral",
    "apply_table_grid",
    "apply_with_table",
    "assign_frequencies",
    "check_relative_identity",
    "make_direction_set",
    "make_frequency_pool",
    "precompute_table",
    "project_position",
]
