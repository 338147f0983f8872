"""Property-based checks of the rotation invariants."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spiralrope.ropecore import (
    RopeConfig,
    apply_axial_2d,
    apply_spiral,
    apply_variant,
    assign_frequencies,
    check_relative_identity,
    make_direction_set,
)

coords = st.floats(-64, 64, allow_nan=False, allow_infinity=False)
positions = st.tuples(coords, coords).map(np.array)
spiral_configs = st.sampled_from([(16, 2), (16, 4), (32, 4), (64, 8), (64, 16), (96, 6), (128, 32)]).map(
    lambda dk: RopeConfig(*dk)
)


def vectors(dim):
    return arrays(np.float64, dim, elements=st.floats(-10, 10, allow_nan=False))


@st.composite
def config_and_vector(draw):
    cfg = draw(spiral_configs)
    return cfg, draw(vectors(cfg.dim))


@settings(max_examples=200, deadline=None)
@given(config_and_vector(), positions, st.sampled_from(["1d", "axial", "spiral"]))
def test_isometry(cv, p, variant):
    cfg, x = cv
    y = apply_variant(x, p, variant, cfg)
    assert abs(np.linalg.norm(y) - np.linalg.norm(x)) <= 1e-12 * max(1.0, np.linalg.norm(x))


@settings(max_examples=200, deadline=None)
@given(config_and_vector(), positions)
def test_unapply_recovers_input(cv, p):
    cfg, x = cv
    back = apply_spiral(apply_spiral(x, p, cfg), -p, cfg)
    assert np.max(np.abs(back - x)) <= 1e-11 * max(1.0, np.max(np.abs(x)))


@settings(max_examples=200, deadline=None)
@given(spiral_configs, st.data(), positions, positions)
def test_relative_identity(cfg, data, p1, p2):
    q = data.draw(vectors(cfg.dim))
    k = data.draw(vectors(cfg.dim))
    scale = max(1.0, np.linalg.norm(q) * np.linalg.norm(k) / 100)
    for variant in ("axial", "spiral"):
        assert check_relative_identity(q, k, p1, p2, variant, cfg) <= 1e-9 * scale


@settings(max_examples=100, deadline=None)
@given(vectors(64), positions)
def test_k2_degenerates_to_axial(x, p):
    cfg = RopeConfig(64, 2)
    assert np.max(np.abs(apply_spiral(x, p, cfg) - apply_axial_2d(x, p, cfg))) <= 1e-12 * max(1.0, np.max(np.abs(x)))


@given(spiral_configs)
def test_each_frequency_on_two_perpendicular_directions(cfg):
    lists = assign_frequencies(cfg).per_direction
    deg = make_direction_set(cfg.k_directions).degrees
    for t in range(cfg.dim // 4):
        owners = [d for d, lst in enumerate(lists) if t in lst]
        assert len(owners) == 2
        assert abs(abs(deg[owners[1]] - deg[owners[0]]) - 90.0) < 1e-9
