import numpy as np
import pytest

from spiralrope.attnharness import (
    AttentionConfig,
    QKWeights,
    TokenGrid,
    attention_logits,
    extrapolation_test,
    overhead_bench,
    random_tokens,
    random_weights,
    sinusoidal_ape,
    softmax,
    translation_test,
)
from spiralrope.rng import XorShiftRng
from spiralrope.ropecore import ConfigError, DimensionError


def _setup(variant, k=2, heads=2, head_dim=32, grid=(4, 5), seed=3, **kw):
    cfg = AttentionConfig(heads, head_dim, *grid, variant, k, **kw)
    rng = XorShiftRng(seed)
    return cfg, random_tokens(cfg, rng), random_weights(cfg, rng)


def test_logit_shape():
    cfg, tokens, w = _setup("spiral", 4)
    assert attention_logits(tokens, cfg, w).shape == (2, 20, 20)


def test_no_pe_identical_tokens_give_equal_logits():
    cfg, _, w = _setup("none")
    tokens = TokenGrid(np.tile(np.linspace(-1, 1, cfg.model_dim), (4, 5, 1)))
    logits = attention_logits(tokens, cfg, w)
    for h in range(cfg.heads):
        np.testing.assert_allclose(logits[h], logits[h, 0, 0], rtol=1e-12)


def test_logits_match_manual_per_head():
    cfg, tokens, w = _setup("none")
    x = tokens.values.reshape(20, -1)
    q = (x @ w.wq)[:, 32:64]
    k = (x @ w.wk)[:, 32:64]
    np.testing.assert_allclose(attention_logits(tokens, cfg, w)[1], q @ k.T / np.sqrt(32), atol=1e-12)


@pytest.mark.parametrize("variant,k", [("axial", 2), ("spiral", 4), ("spiral", 8)])
def test_rope_logits_shift_invariant(variant, k):
    cfg, tokens, w = _setup(variant, k)
    assert translation_test(cfg, tokens, (7, 3), w) <= 1e-8
    assert translation_test(cfg, tokens, (-2.5, 0.75), w) <= 1e-8


def test_zero_shift_is_exact():
    cfg, tokens, w = _setup("ape_sinusoidal")
    assert translation_test(cfg, tokens, (0, 0), w) == 0.0


@pytest.mark.parametrize("order", ["pre", "post"])
def test_ape_is_not_shift_invariant(order):
    cfg, tokens, w = _setup("ape_sinusoidal", ape_order=order)
    assert translation_test(cfg, tokens, (7, 3), w) > 1e-3


def test_ape_orders_differ():
    cfg_pre, tokens, w = _setup("ape_sinusoidal", ape_order="pre")
    cfg_post = AttentionConfig(2, 32, 4, 5, "ape_sinusoidal", ape_order="post")
    assert not np.allclose(attention_logits(tokens, cfg_pre, w), attention_logits(tokens, cfg_post, w))


def test_sinusoidal_ape_layout():
    e = sinusoidal_ape(np.array([2.0, 3.0]), 8)
    np.testing.assert_allclose(e[:4], [np.sin(2), np.cos(2), np.sin(2e-2), np.cos(2e-2)])
    np.testing.assert_allclose(e[4:], [np.sin(3), np.cos(3), np.sin(3e-2), np.cos(3e-2)])


def test_determinism():
    runs = []
    for _ in range(2):
        cfg, tokens, w = _setup("spiral", 4, seed=11)
        runs.append(attention_logits(tokens, cfg, w))
    assert np.array_equal(*runs)


def test_softmax_rows():
    cfg, tokens, w = _setup("spiral", 4)
    probs = softmax(attention_logits(tokens, cfg, w))
    np.testing.assert_allclose(probs.sum(-1), 1.0, atol=1e-9)


def test_shape_errors():
    cfg, tokens, w = _setup("spiral", 4)
    with pytest.raises(DimensionError):
        attention_logits(tokens, cfg, QKWeights(w.wq[:, :10], w.wk))
    with pytest.raises(DimensionError):
        attention_logits(TokenGrid(tokens.values[:2]), cfg, w)


def test_config_validation():
    with pytest.raises(ConfigError):
        AttentionConfig(1, 32, 4, 4, "spiral", 3)
    with pytest.raises(ConfigError):
        AttentionConfig(1, 32, 4, 4, "learned")
    with pytest.raises(ConfigError):
        AttentionConfig(1, 30, 4, 4, "axial")


@pytest.mark.parametrize("small", [(9, 9), (14, 14), (32, 32), (3, 7)])
def test_extrapolation(small):
    cfg = AttentionConfig(2, 64, 32, 32, "spiral", 8)
    rep = extrapolation_test(cfg, small, (32, 32), seed=1)
    assert rep.shared_positions == small[0] * small[1]
    assert rep.max_abs_diff <= 1e-12
    assert rep.passed()


def test_extrapolation_9_in_28():
    assert extrapolation_test(AttentionConfig(1, 64, 28, 28, "axial"), (9, 9), (28, 28)).max_abs_diff <= 1e-12


def test_extrapolation_rejects():
    cfg = AttentionConfig(1, 64, 8, 8, "spiral", 8)
    with pytest.raises(ConfigError):
        extrapolation_test(cfg, (10, 10), (8, 8))
    with pytest.raises(ConfigError):
        extrapolation_test(AttentionConfig(1, 64, 8, 8, "none"), (4, 4), (8, 8))


def test_bench_zero_iterations():
    a = AttentionConfig(1, 64, 8, 8, "axial")
    s = AttentionConfig(1, 64, 8, 8, "spiral", 8)
    rep = overhead_bench(a, s, 0)
    assert rep.ratio is None and rep.mean("axial") is None
    assert "ratio=" in rep.lines()


def test_bench_single_iteration():
    a = AttentionConfig(1, 64, 8, 8, "axial")
    s = AttentionConfig(1, 64, 8, 8, "spiral", 8)
    rep = overhead_bench(a, s, 1)
    assert rep.pair_count == 32
    assert rep.ratio > 0
    assert rep.std("spiral") == 0.0


def test_bench_mismatched_configs():
    with pytest.raises(ConfigError):
        overhead_bench(AttentionConfig(1, 64, 8, 8, "axial"), AttentionConfig(1, 32, 8, 8, "spiral", 8), 3)
    with pytest.raises(ConfigError):
        overhead_bench(AttentionConfig(1, 64, 8, 8, "spiral", 8), AttentionConfig(1, 64, 8, 8, "spiral", 8), 3)
