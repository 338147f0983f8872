"""Rotary position embeddings: 1D, axial 2D and spiral (multi-direction) variants.

All math is float64 numpy. Vectors carry channels on the last axis and
positions carry ``(x, y)`` on the last axis; leading axes broadcast, so the
same functions serve single vectors and whole token grids.

Channel layout for the spiral variant: direction ``k`` owns the consecutive
block ``x[k*dim/K : (k+1)*dim/K]``, and inside that block consecutive channel
pairs ``(x[2i], x[2i+1])`` are rotated by the assigned frequencies in
increasing index order. With ``K=2`` this is the usual axial layout (first
half x, second half y), which is what makes the two variants coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class ConfigError(ValueError):
    """Invalid dimension / direction-count / frequency configuration."""


class DimensionError(ValueError):
    """Array shapes do not line up with the configuration."""


class BoundsError(IndexError):
    """Grid position outside a precomputed table."""


VARIANTS = ("1d", "axial", "spiral")


@dataclass(frozen=True)
class RopeConfig:
    """Per-head rotary configuration.

    ``dim`` is the per-head embedding size d, ``k_directions`` the number of
    spiral directions K. ``freq_scale`` multiplies every frequency, so the
    largest frequency equals ``freq_scale``.
    """

    dim: int
    k_directions: int = 2
    theta_base: float = 10000.0
    freq_scale: float = 1.0

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim <= 0:
            raise ConfigError(f"dim must be a positive integer, got {self.dim!r}")
        if self.dim % 4:
            raise ConfigError(f"dim must be divisible by 4 (pool has dim/4 frequencies), got {self.dim}")
        if not isinstance(self.k_directions, (int, np.integer)) or self.k_directions <= 0:
            raise ConfigError(f"k_directions must be a positive integer, got {self.k_directions!r}")
        if not (np.isfinite(self.theta_base) and self.theta_base > 0):
            raise ConfigError(f"theta_base must be positive, got {self.theta_base!r}")
        if not (np.isfinite(self.freq_scale) and self.freq_scale > 0):
            raise ConfigError(f"freq_scale must be positive, got {self.freq_scale!r}")

    @property
    def n_frequencies(self) -> int:
        return self.dim // 4

    @property
    def n_pairs(self) -> int:
        return self.dim // 2

    def check_spiral(self) -> None:
        """Raise ConfigError unless K is even and dim is a multiple of 4K."""
        k = self.k_directions
        if k < 2 or k % 2:
            raise ConfigError(f"k_directions must be even and >= 2, got {k}")
        if self.dim % (4 * k):
            raise ConfigError(
                f"dim must be divisible by 4*k_directions = {4 * k} for spiral RoPE, got dim={self.dim}"
            )


# Presets for the configurations used in the experiments.
CLASSIFICATION_PRESET = dict(k_directions=16, freq_scale=1.5)
DIT_PRESET = dict(k_directions=8)
DIT_XL_PRESET = dict(k_directions=6)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FrequencyPool:
    thetas: np.ndarray

    def __len__(self):
        return len(self.thetas)


@dataclass(frozen=True)
class DirectionSet:
    angles: np.ndarray  # radians, shape (K,)
    unit_vectors: np.ndarray  # shape (K, 2)

    @property
    def degrees(self) -> np.ndarray:
        return np.degrees(self.angles)

    def __len__(self):
        return len(self.angles)


@dataclass(frozen=True)
class FrequencyAssignment:
    per_direction: tuple[tuple[int, ...], ...]

    @property
    def k_directions(self) -> int:
        return len(self.per_direction)

    def pair_layout(self) -> tuple[np.ndarray, np.ndarray]:
        """(direction index, frequency index) for every rotation pair, in channel order."""
        dirs = np.repeat(np.arange(self.k_directions), [len(lst) for lst in self.per_direction])
        idx = np.concatenate([np.asarray(lst, dtype=np.int64) for lst in self.per_direction])
        return dirs, idx


def make_frequency_pool(config: RopeConfig) -> FrequencyPool:
    """``freq_scale * theta_base ** (-t / (dim/4))`` for ``t = 0 .. dim/4 - 1``."""
    n = config.n_frequencies
    t = np.arange(n, dtype=np.float64)
    return FrequencyPool(_frozen(config.freq_scale * config.theta_base ** (-t / n)))


def rope1d_frequencies(dim: int, theta_base: float = 10000.0, freq_scale: float = 1.0) -> np.ndarray:
    """Standard 1D RoPE frequencies: ``dim/2`` values ``theta_base ** (-t / (dim/2))``."""
    if dim <= 0 or dim % 2:
        raise ConfigError(f"1D RoPE needs a positive even dim, got {dim}")
    half = dim // 2
    return _frozen(freq_scale * theta_base ** (-np.arange(half, dtype=np.float64) / half))


def make_direction_set(k: int) -> DirectionSet:
    if not isinstance(k, (int, np.integer)) or k < 2 or k % 2:
        raise ConfigError(f"number of directions must be even and >= 2, got {k!r}")
    angles = np.pi * np.arange(k) / k
    units = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    # cos(pi/2) evaluates to 6e-17; keep the axis directions exact.
    units[np.abs(units) < 1e-15] = 0.0
    return DirectionSet(_frozen(angles), _frozen(units))


def project_position(p, direction) -> np.ndarray | float:
    """Scalar projection ``p . u`` of position(s) ``p`` onto unit vector(s) ``direction``."""
    p = np.asarray(p, dtype=np.float64)
    u = np.asarray(direction, dtype=np.float64)
    out = p[..., 0] * u[..., 0] + p[..., 1] * u[..., 1]
    return float(out) if np.ndim(out) == 0 else out


def assign_frequencies(config: RopeConfig) -> FrequencyAssignment:
    """Grouped interleaved assignment of the frequency pool to K directions.

    Adjacent frequencies form pairs ``(2j, 2j+1)``; pair ``j`` goes to the
    perpendicular direction pair ``(j mod K/2, j mod K/2 + K/2)``.
    """
    config.check_spiral()
    k = config.k_directions
    half_k = k // 2
    n_freq_pairs = config.dim // 8
    lists = []
    for d in range(half_k):
        lists.append(tuple(i for j in range(d, n_freq_pairs, half_k) for i in (2 * j, 2 * j + 1)))
    return FrequencyAssignment(tuple(lists) + tuple(lists))


def _rotate_pairs(x: np.ndarray, cos: np.ndarray, sin: np.ndarray) -> np.ndarray:
    even = x[..., 0::2]
    odd = x[..., 1::2]
    out = np.empty(np.broadcast_shapes(x.shape, cos.shape[:-1] + (x.shape[-1],)), dtype=np.float64)
    out[..., 0::2] = even * cos - odd * sin
    out[..., 1::2] = even * sin + odd * cos
    return out


def _as_vectors(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0:
        raise DimensionError("expected a vector, got a scalar")
    return x


def _as_positions(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim == 0 or p.shape[-1] != 2:
        raise DimensionError(f"positions must have a trailing axis of size 2, got shape {p.shape}")
    return p


def apply_rope_1d(x, m, thetas) -> np.ndarray:
    """Rotate pair ``(x[2t], x[2t+1])`` by angle ``m * thetas[t]``."""
    x = _as_vectors(x)
    thetas = np.asarray(thetas, dtype=np.float64)
    if x.shape[-1] % 2 or x.shape[-1] // 2 != thetas.shape[-1]:
        raise DimensionError(
            f"vector length {x.shape[-1]} needs {x.shape[-1] // 2} frequencies, got {thetas.shape[-1]}"
        )
    angles = np.asarray(m, dtype=np.float64)[..., None] * thetas
    return _rotate_pairs(x, np.cos(angles), np.sin(angles))


def apply_axial_2d(x, p, config: RopeConfig) -> np.ndarray:
    """First half of the channels rotated by ``p_x``, second half by ``p_y``."""
    x = _as_vectors(x)
    p = _as_positions(p)
    if x.shape[-1] != config.dim:
        raise DimensionError(f"vector length {x.shape[-1]} != config.dim {config.dim}")
    thetas = make_frequency_pool(config).thetas
    half = config.dim // 2
    first = apply_rope_1d(x[..., :half], p[..., 0], thetas)
    second = apply_rope_1d(x[..., half:], p[..., 1], thetas)
    return np.concatenate([first, second], axis=-1)


def _check_assignment(config: RopeConfig, assignment: FrequencyAssignment) -> None:
    if assignment.k_directions != config.k_directions:
        raise DimensionError(
            f"assignment has {assignment.k_directions} directions, config expects {config.k_directions}"
        )
    per = config.dim // (2 * config.k_directions)
    for k, lst in enumerate(assignment.per_direction):
        if len(lst) != per:
            raise DimensionError(f"direction {k} has {len(lst)} frequencies, expected dim/(2K) = {per}")
        if lst and (min(lst) < 0 or max(lst) >= config.n_frequencies):
            raise DimensionError(f"direction {k} references a frequency outside the pool")


@dataclass(frozen=True)
class SpiralLayout:
    """Flattened per-pair description of a spiral config: which direction and frequency each pair uses."""

    config: RopeConfig
    unit_vectors: np.ndarray  # (K, 2)
    pair_direction: np.ndarray  # (dim/2,)
    pair_theta: np.ndarray  # (dim/2,)

    def angles(self, p: np.ndarray) -> np.ndarray:
        proj = p @ self.unit_vectors.T  # (..., K)
        return proj[..., self.pair_direction] * self.pair_theta


def spiral_layout(config: RopeConfig, assignment: FrequencyAssignment | None = None) -> SpiralLayout:
    config.check_spiral()
    if assignment is None:
        assignment = assign_frequencies(config)
    _check_assignment(config, assignment)
    dirs, idx = assignment.pair_layout()
    thetas = make_frequency_pool(config).thetas
    units = make_direction_set(config.k_directions).unit_vectors
    return SpiralLayout(config, units, dirs, _frozen(thetas[idx]))


def apply_spiral(x, p, config: RopeConfig, assignment: FrequencyAssignment | None = None) -> np.ndarray:
    """Spiral RoPE: group ``k`` rotated by the projection of ``p`` onto direction ``k``."""
    x = _as_vectors(x)
    p = _as_positions(p)
    if x.shape[-1] != config.dim:
        raise DimensionError(f"vector length {x.shape[-1]} != config.dim {config.dim}")
    angles = spiral_layout(config, assignment).angles(p)
    return _rotate_pairs(x, np.cos(angles), np.sin(angles))


def apply_variant(x, p, variant: str, config: RopeConfig) -> np.ndarray:
    """Dispatch on ``variant``; for ``"1d"`` the position is a scalar (or ``p[..., 0]`` if 2D)."""
    if variant == "1d":
        m = np.asarray(p, dtype=np.float64)
        if m.ndim and m.shape[-1] == 2:
            m = m[..., 0]
        thetas = rope1d_frequencies(config.dim, config.theta_base, config.freq_scale)
        return apply_rope_1d(x, m, thetas)
    if variant == "axial":
        return apply_axial_2d(x, p, config)
    if variant == "spiral":
        return apply_spiral(x, p, config)
    raise ConfigError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


@dataclass(frozen=True)
class RotationTable:
    """cos/sin for every grid cell and rotation pair, indexed ``[y, x, pair]``.

    Cell ``(x, y)`` holds the rotation for absolute position ``(x, y)``, so a
    larger table contains any smaller one as its top-left corner.
    """

    config: RopeConfig
    variant: str
    grid_h: int
    grid_w: int
    cos: np.ndarray = field(repr=False)
    sin: np.ndarray = field(repr=False)

    @property
    def n_pairs(self) -> int:
        return self.cos.shape[-1]

    def lookup(self, pos) -> tuple[np.ndarray, np.ndarray]:
        pos = np.asarray(pos)
        if pos.shape[-1] != 2 or not np.issubdtype(pos.dtype, np.integer):
            raise BoundsError(f"table positions must be integer (x, y) pairs, got {pos!r}")
        px, py = pos[..., 0], pos[..., 1]
        if np.any(px < 0) or np.any(px >= self.grid_w) or np.any(py < 0) or np.any(py >= self.grid_h):
            raise BoundsError(f"position outside the {self.grid_w}x{self.grid_h} table: {pos.tolist()}")
        return self.cos[py, px], self.sin[py, px]


def grid_positions(h: int, w: int, origin=(0.0, 0.0)) -> np.ndarray:
    """``(h, w, 2)`` array of ``(x, y)`` positions, ``x`` running along columns."""
    ys, xs = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")
    return np.stack([xs + origin[0], ys + origin[1]], axis=-1)


def pair_angles(positions, variant: str, config: RopeConfig) -> np.ndarray:
    """Rotation angle of every pair at every position, shape ``positions.shape[:-1] + (dim/2,)``."""
    p = _as_positions(positions)
    if variant == "spiral":
        return spiral_layout(config).angles(p)
    if variant == "axial":
        thetas = make_frequency_pool(config).thetas
        return np.concatenate([p[..., 0:1] * thetas, p[..., 1:2] * thetas], axis=-1)
    raise ConfigError(f"tables support 'axial' and 'spiral', got {variant!r}")


def precompute_table(config: RopeConfig, h: int, w: int, variant: str = "spiral") -> RotationTable:
    if h < 1 or w < 1:
        raise ConfigError(f"grid must be at least 1x1, got {h}x{w}")
    angles = pair_angles(grid_positions(h, w), variant, config)
    # fancy indexing in the spiral path yields a transposed layout; store C order
    cos = np.ascontiguousarray(np.cos(angles))
    sin = np.ascontiguousarray(np.sin(angles))
    cos.setflags(write=False)
    sin.setflags(write=False)
    return RotationTable(config, variant, h, w, cos, sin)


def apply_with_table(x, pos, table: RotationTable) -> np.ndarray:
    """Rotate ``x`` at integer grid position(s) ``pos = (x, y)`` using cached cos/sin."""
    x = _as_vectors(x)
    if x.shape[-1] != 2 * table.n_pairs:
        raise DimensionError(f"vector length {x.shape[-1]} != table dim {2 * table.n_pairs}")
    cos, sin = table.lookup(pos)
    return _rotate_pairs(x, cos, sin)


def apply_table_grid(x, table: RotationTable) -> np.ndarray:
    """Rotate a full token grid ``x[y, x, ..., dim]`` in one pass.

    Extra axes between the grid axes and the channel axis (heads, batch) are
    broadcast over.
    """
    x = _as_vectors(x)
    if x.shape[:2] != (table.grid_h, table.grid_w):
        raise DimensionError(f"grid shape {x.shape[:2]} != table {table.grid_h}x{table.grid_w}")
    extra = x.ndim - 3
    idx = (slice(None), slice(None)) + (None,) * extra
    return _rotate_pairs(x, table.cos[idx], table.sin[idx])


def check_relative_identity(q, k, p1, p2, variant: str, config: RopeConfig):
    """``|<R(p1) q, R(p2) k> - <R(p1 - p2) q, k>|``; broadcasts over leading axes."""
    q = _as_vectors(q)
    k = _as_vectors(k)
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    lhs = np.sum(apply_variant(q, p1, variant, config) * apply_variant(k, p2, variant, config), axis=-1)
    origin = np.zeros_like(p2)
    rhs = np.sum(apply_variant(q, p1 - p2, variant, config) * apply_variant(k, origin, variant, config), axis=-1)
    out = np.abs(lhs - rhs)
    return float(out) if out.ndim == 0 else out


def rotation_pair_count(variant: str, config: RopeConfig) -> int:
    if variant == "spiral":
        return len(spiral_layout(config).pair_theta)
    if variant == "axial":
        return 2 * config.n_frequencies
    if variant == "1d":
        return config.dim // 2
    raise ConfigError(f"unknown variant {variant!r}")


def distinct_frequency_count(variant: str, config: RopeConfig) -> int:
    if variant == "spiral":
        return len(np.unique(spiral_layout(config).pair_theta))
    if variant == "axial":
        return len(np.unique(make_frequency_pool(config).thetas))
    raise ConfigError(f"unknown variant {variant!r}")


def degrees_of(direction_indices: Sequence[int], k: int) -> list[float]:
    """Exact degree values ``180 * i / K`` (avoids radians round-trip noise in exports)."""
    return [180.0 * i / k for i in direction_indices]
