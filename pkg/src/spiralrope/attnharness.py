"""Minimal multi-head attention logits with a pluggable positional encoding.

Only the pre-softmax logits ``q . k / sqrt(head_dim)`` are produced; there is
no value path, since every property checked here lives at the logit level.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .rng import XorShiftRng
from .ropecore import (
    ConfigError,
    DimensionError,
    RopeConfig,
    apply_table_grid,
    apply_variant,
    grid_positions,
    precompute_table,
    rotation_pair_count,
)

PE_VARIANTS = ("none", "ape_sinusoidal", "axial", "spiral")


@dataclass(frozen=True)
class AttentionConfig:
    heads: int
    head_dim: int
    grid_h: int
    grid_w: int
    pe_variant: str = "spiral"
    k_directions: int = 2
    theta_base: float = 10000.0
    freq_scale: float = 1.0
    # "pre": APE added to tokens before the q/k projection; "post": added to q and k per head.
    ape_order: str = "pre"

    def __post_init__(self):
        for name in ("heads", "head_dim", "grid_h", "grid_w"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.pe_variant not in PE_VARIANTS:
            raise ConfigError(f"pe_variant must be one of {PE_VARIANTS}, got {self.pe_variant!r}")
        if self.ape_order not in ("pre", "post"):
            raise ConfigError(f"ape_order must be 'pre' or 'post', got {self.ape_order!r}")
        if self.pe_variant == "spiral":
            self.rope_config.check_spiral()
        elif self.pe_variant == "axial":
            _ = self.rope_config
        elif self.pe_variant == "ape_sinusoidal" and self.head_dim % 4:
            raise ConfigError(f"sinusoidal APE needs head_dim divisible by 4, got {self.head_dim}")

    @property
    def model_dim(self) -> int:
        return self.heads * self.head_dim

    @property
    def rope_config(self) -> RopeConfig:
        return RopeConfig(self.head_dim, self.k_directions, self.theta_base, self.freq_scale)

    @property
    def n_tokens(self) -> int:
        return self.grid_h * self.grid_w


@dataclass(frozen=True)
class TokenGrid:
    values: np.ndarray  # (grid_h, grid_w, model_dim)
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.values.ndim != 3:
            raise DimensionError(f"token grid must be (h, w, dim), got shape {self.values.shape}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape[:2]

    def positions(self) -> np.ndarray:
        return grid_positions(*self.shape, origin=self.origin)

    def shifted(self, dx: float, dy: float) -> "TokenGrid":
        return TokenGrid(self.values, (self.origin[0] + dx, self.origin[1] + dy))


@dataclass(frozen=True)
class QKWeights:
    wq: np.ndarray  # (model_dim, heads * head_dim)
    wk: np.ndarray


def random_tokens(cfg: AttentionConfig, rng: XorShiftRng) -> TokenGrid:
    return TokenGrid(rng.uniform(-1.0, 1.0, (cfg.grid_h, cfg.grid_w, cfg.model_dim)))


def random_weights(cfg: AttentionConfig, rng: XorShiftRng) -> QKWeights:
    shape = (cfg.model_dim, cfg.heads * cfg.head_dim)
    return QKWeights(rng.uniform(-1.0, 1.0, shape), rng.uniform(-1.0, 1.0, shape))


def sinusoidal_ape(positions, dim: int, base: float = 10000.0) -> np.ndarray:
    """Fixed 2D sinusoidal embedding: ``dim/2`` channels encode x, ``dim/2`` encode y.

    Each half is ``[sin(p w_0), cos(p w_0), sin(p w_1), ...]`` with
    ``w_i = base ** (-i / (dim/4))``.
    """
    if dim % 4:
        raise ConfigError(f"sinusoidal APE needs dim divisible by 4, got {dim}")
    p = np.asarray(positions, dtype=np.float64)
    quarter = dim // 4
    w = base ** (-np.arange(quarter) / quarter)

    def axis(c):
        a = c[..., None] * w
        out = np.empty(a.shape[:-1] + (2 * quarter,))
        out[..., 0::2] = np.sin(a)
        out[..., 1::2] = np.cos(a)
        return out

    return np.concatenate([axis(p[..., 0]), axis(p[..., 1])], axis=-1)


def project_qk(tokens: TokenGrid, cfg: AttentionConfig, weights: QKWeights) -> tuple[np.ndarray, np.ndarray]:
    """Per-head q and k after positional encoding, each ``(heads, H*W, head_dim)``."""
    x = tokens.values
    if x.shape != (cfg.grid_h, cfg.grid_w, cfg.model_dim):
        raise DimensionError(f"tokens {x.shape} do not match config grid/model dim")
    want = (cfg.model_dim, cfg.heads * cfg.head_dim)
    if weights.wq.shape != want or weights.wk.shape != want:
        raise DimensionError(f"q/k weights must be {want}, got {weights.wq.shape} and {weights.wk.shape}")

    pos = tokens.positions()  # (h, w, 2)
    if cfg.pe_variant == "ape_sinusoidal" and cfg.ape_order == "pre":
        x = x + sinusoidal_ape(pos, cfg.model_dim)

    n = cfg.n_tokens
    q = (x.reshape(n, -1) @ weights.wq).reshape(n, cfg.heads, cfg.head_dim)
    k = (x.reshape(n, -1) @ weights.wk).reshape(n, cfg.heads, cfg.head_dim)
    flat_pos = pos.reshape(n, 1, 2)

    if cfg.pe_variant in ("axial", "spiral"):
        rc = cfg.rope_config
        q = apply_variant(q, flat_pos, cfg.pe_variant, rc)
        k = apply_variant(k, flat_pos, cfg.pe_variant, rc)
    elif cfg.pe_variant == "ape_sinusoidal" and cfg.ape_order == "post":
        ape = sinusoidal_ape(flat_pos, cfg.head_dim)
        q = q + ape
        k = k + ape
    return q.transpose(1, 0, 2), k.transpose(1, 0, 2)


def attention_logits(tokens: TokenGrid, cfg: AttentionConfig, weights: QKWeights) -> np.ndarray:
    """``(heads, H*W, H*W)`` pre-softmax logits."""
    q, k = project_qk(tokens, cfg, weights)
    return q @ k.transpose(0, 2, 1) / np.sqrt(cfg.head_dim)


def softmax(logits: np.ndarray, axis: int = -1) -> np.ndarray:
    z = logits - logits.max(axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def translation_test(cfg: AttentionConfig, tokens: TokenGrid, shift, weights: QKWeights) -> float:
    """Max abs logit change when every position moves by ``shift = (dx, dy)``."""
    base = attention_logits(tokens, cfg, weights)
    moved = attention_logits(tokens.shifted(*shift), cfg, weights)
    return float(np.max(np.abs(base - moved)))


@dataclass(frozen=True)
class ExtrapolationReport:
    variant: str
    small_grid: tuple[int, int]
    large_grid: tuple[int, int]
    shared_positions: int
    max_abs_diff: float

    def passed(self, tol: float = 1e-12) -> bool:
        return self.max_abs_diff <= tol


def extrapolation_test(cfg: AttentionConfig, small_grid, large_grid, seed: int = 0) -> ExtrapolationReport:
    """Rotate random q/k on the small grid with a small table and with a large table; compare.

    The large table must be built for the bigger grid directly, not by
    tiling the small one, so this checks that positions extend by index.
    """
    if cfg.pe_variant not in ("axial", "spiral"):
        raise ConfigError(f"extrapolation needs a RoPE variant, got {cfg.pe_variant!r}")
    (sh, sw), (lh, lw) = small_grid, large_grid
    if sh > lh or sw > lw:
        raise ConfigError(f"small grid {sh}x{sw} does not fit inside {lh}x{lw}")
    rc = cfg.rope_config
    small = precompute_table(rc, sh, sw, cfg.pe_variant)
    large = precompute_table(rc, lh, lw, cfg.pe_variant)
    rng = XorShiftRng(seed)
    vecs = rng.uniform(-1.0, 1.0, (2, sh, sw, cfg.heads, cfg.head_dim))
    worst = 0.0
    for v in vecs:  # q then k
        a = apply_table_grid(v, small)
        padded = np.zeros((lh, lw) + v.shape[2:])
        padded[:sh, :sw] = v
        b = apply_table_grid(padded, large)[:sh, :sw]
        worst = max(worst, float(np.max(np.abs(a - b))))
    return ExtrapolationReport(cfg.pe_variant, (sh, sw), (lh, lw), sh * sw, worst)


@dataclass
class BenchReport:
    iterations: int
    times: dict = field(default_factory=dict)  # variant -> list of seconds
    pair_count: int = 0

    def mean(self, variant: str) -> float | None:
        t = self.times.get(variant, [])
        return float(np.mean(t)) if t else None

    def std(self, variant: str) -> float | None:
        t = self.times.get(variant, [])
        return float(np.std(t)) if t else None

    @property
    def ratio(self) -> float | None:
        a, s = self.mean("axial"), self.mean("spiral")
        if a is None or s is None or a == 0:
            return None
        return s / a

    def lines(self) -> list[str]:
        out = [f"iterations={self.iterations}", f"rotation_pairs={self.pair_count}"]
        for v in ("axial", "spiral"):
            m, s = self.mean(v), self.std(v)
            out.append(f"{v}_mean_s={'' if m is None else format(m, '.9g')}")
            out.append(f"{v}_std_s={'' if s is None else format(s, '.9g')}")
        r = self.ratio
        out.append(f"ratio={'' if r is None else format(r, '.9g')}")
        return out


def overhead_bench(cfg_axial: AttentionConfig, cfg_spiral: AttentionConfig, iterations: int,
                   seed: int = 0, warmup: int = 5) -> BenchReport:
    """Time table-based full-grid rotation for both variants, interleaved run by run."""
    if (cfg_axial.head_dim, cfg_axial.grid_h, cfg_axial.grid_w, cfg_axial.heads) != (
        cfg_spiral.head_dim, cfg_spiral.grid_h, cfg_spiral.grid_w, cfg_spiral.heads
    ):
        raise ConfigError("axial and spiral benchmark configs must share head_dim, heads and grid size")
    if cfg_axial.pe_variant != "axial" or cfg_spiral.pe_variant != "spiral":
        raise ConfigError("overhead_bench expects an axial config and a spiral config")
    pa = rotation_pair_count("axial", cfg_axial.rope_config)
    ps = rotation_pair_count("spiral", cfg_spiral.rope_config)
    if pa != ps:
        raise ConfigError(f"rotation pair counts differ: axial {pa} vs spiral {ps}")
    report = BenchReport(iterations, {"axial": [], "spiral": []}, pa)
    if iterations <= 0:
        report.times = {}
        return report

    tables = {
        "axial": precompute_table(cfg_axial.rope_config, cfg_axial.grid_h, cfg_axial.grid_w, "axial"),
        "spiral": precompute_table(cfg_spiral.rope_config, cfg_spiral.grid_h, cfg_spiral.grid_w, "spiral"),
    }
    x = XorShiftRng(seed).uniform(-1.0, 1.0, (cfg_axial.grid_h, cfg_axial.grid_w, cfg_axial.heads, cfg_axial.head_dim))
    for _ in range(warmup):
        for t in tables.values():
            apply_table_grid(x, t)
    order = ("axial", "spiral")
    for i in range(iterations):
        # alternate which variant goes first to cancel drift
        for v in (order if i % 2 == 0 else order[::-1]):
            t0 = time.perf_counter()
            apply_table_grid(x, tables[v])
            report.times[v].append(time.perf_counter() - t0)
    return report
