"""Invariant suites behind ``spiralrope verify``.

Each suite returns a list of :class:`Check` records; a check passes when its
measured value is ``<= tol`` (or ``> tol`` for negative controls).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fourier
from .attnharness import AttentionConfig, extrapolation_test, random_tokens, random_weights, translation_test
from .rng import XorShiftRng
from .ropecore import (
    RopeConfig,
    apply_axial_2d,
    apply_spiral,
    apply_variant,
    apply_with_table,
    assign_frequencies,
    check_relative_identity,
    make_direction_set,
    precompute_table,
)

HEAD_DIM = 64
SPIRAL_KS = (2, 4, 8, 16)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float
    above: bool = False  # negative control: value must exceed tol

    @property
    def passed(self) -> bool:
        return bool(self.value > self.tol) if self.above else bool(self.value <= self.tol)

    def line(self) -> str:
        op = ">" if self.above else "<="
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.value:.3e} (need {op} {self.tol:.0e})"


def _variants():
    yield "1d", RopeConfig(HEAD_DIM)
    yield "axial", RopeConfig(HEAD_DIM)
    for k in SPIRAL_KS:
        yield f"spiral K={k}", RopeConfig(HEAD_DIM, k)


def _kind(label: str) -> str:
    return label.split()[0]


def suite_relative(trials: int, seed: int) -> list[Check]:
    rng = XorShiftRng(seed)
    out = []
    for label, cfg in _variants():
        q = rng.uniform(-1, 1, (trials, HEAD_DIM))
        k = rng.uniform(-1, 1, (trials, HEAD_DIM))
        p1 = rng.uniform(-32, 32, (trials, 2))
        p2 = rng.uniform(-32, 32, (trials, 2))
        if _kind(label) == "1d":
            p1, p2 = p1[:, 0], p2[:, 0]
        d = check_relative_identity(q, k, p1, p2, _kind(label), cfg)
        out.append(Check(f"relative identity [{label}]", float(np.max(d)), 1e-9))
    return out


def suite_degeneracy(trials: int, seed: int) -> list[Check]:
    rng = XorShiftRng(seed)
    cfg = RopeConfig(HEAD_DIM, 2)
    x = rng.uniform(-1, 1, (trials, HEAD_DIM))
    p = rng.uniform(-32, 32, (trials, 2))
    diff = np.max(np.abs(apply_spiral(x, p, cfg) - apply_axial_2d(x, p, cfg)))
    return [Check("spiral K=2 == axial", float(diff), 1e-12)]


def suite_isometry(trials: int, seed: int) -> list[Check]:
    rng = XorShiftRng(seed)
    out = []
    for label, cfg in _variants():
        x = rng.uniform(-1, 1, (trials, HEAD_DIM))
        p = rng.uniform(-32, 32, (trials, 2))
        y = apply_variant(x, p, _kind(label), cfg)
        d = np.max(np.abs(np.linalg.norm(y, axis=-1) - np.linalg.norm(x, axis=-1)))
        out.append(Check(f"isometry [{label}]", float(d), 1e-12))
        d0 = np.max(np.abs(apply_variant(x, np.zeros_like(p), _kind(label), cfg) - x))
        out.append(Check(f"identity at origin [{label}]", float(d0), 0.0))
        back = apply_variant(y, -p, _kind(label), cfg)
        out.append(Check(f"apply then un-apply [{label}]", float(np.max(np.abs(back - x))), 1e-11))
    return out


def suite_assignment(trials: int, seed: int) -> list[Check]:
    bad = 0
    for dim in (16, 32, 64, 128, 256, 1024):
        for k in (2, 4, 6, 8, 16, 32):
            if dim % (4 * k):
                continue
            lists = assign_frequencies(RopeConfig(dim, k)).per_direction
            degs = make_direction_set(k).degrees
            owners: dict[int, list[int]] = {}
            for d, lst in enumerate(lists):
                bad += len(lst) != dim // (2 * k)
                for i in lst:
                    owners.setdefault(i, []).append(d)
            bad += sorted(owners) != list(range(dim // 4))
            for ds in owners.values():
                bad += len(ds) != 2 or not np.isclose(abs(degs[ds[1]] - degs[ds[0]]), 90.0)
    ok = assign_frequencies(RopeConfig(32, 4)).per_direction == ((0, 1, 4, 5), (2, 3, 6, 7)) * 2
    return [
        Check("assignment completeness / perpendicular sharing (violations)", float(bad), 0.0),
        Check("K=4, d=32 worked example (mismatch)", 0.0 if ok else 1.0, 0.0),
    ]


def suite_table(trials: int, seed: int) -> list[Check]:
    rng = XorShiftRng(seed)
    out = []
    for variant, cfg in (("axial", RopeConfig(HEAD_DIM)), ("spiral", RopeConfig(HEAD_DIM, 8))):
        table = precompute_table(cfg, 16, 16, variant)
        x = rng.uniform(-1, 1, (trials, HEAD_DIM))
        pos = rng.integers(0, 16, (trials, 2))
        fast = apply_with_table(x, pos, table)
        direct = apply_variant(x, pos.astype(np.float64), variant, cfg)
        out.append(Check(f"table == direct [{variant}]", float(np.max(np.abs(fast - direct))), 1e-12))
    return out


def suite_extrapolation(trials: int, seed: int) -> list[Check]:
    out = []
    for variant, k in (("axial", 2), ("spiral", 8), ("spiral", 16)):
        cfg = AttentionConfig(1, HEAD_DIM, 32, 32, variant, k)
        for small in ((9, 9), (14, 14)):
            rep = extrapolation_test(cfg, small, (32, 32), seed)
            out.append(Check(f"extrapolation {small[0]}x{small[1]} in 32x32 [{variant} K={k}]", rep.max_abs_diff, 1e-12))
    return out


def suite_translation(trials: int, seed: int) -> list[Check]:
    rng = XorShiftRng(seed)
    n = max(1, min(trials, 100))
    out = []
    for variant, k in (("axial", 2), ("spiral", 8), ("spiral", 16), ("ape_sinusoidal", 2)):
        cfg = AttentionConfig(4, HEAD_DIM, 8, 8, variant, k)
        tokens = random_tokens(cfg, rng)
        weights = random_weights(cfg, rng)
        shifts = rng.uniform(-8, 8, (n, 2))
        worst = max(translation_test(cfg, tokens, s, weights) for s in shifts)
        if variant == "ape_sinusoidal":
            best = min(translation_test(cfg, tokens, s, weights) for s in shifts if np.any(np.abs(s) > 0.5))
            out.append(Check("APE negative control: min logit change", best, 1e-3, above=True))
        else:
            out.append(Check(f"translation invariance [{variant} K={k}]", worst, 1e-8))
    return out


def suite_fourier(trials: int, seed: int) -> list[Check]:
    rng = XorShiftRng(seed)
    out = []
    worst = 0.0
    for n in (2, 3, 5, 8, 16):
        img = rng.uniform(-1, 1, (n, n))
        worst = max(worst, float(np.max(np.abs(fourier.dft2d(img) - fourier.naive_dft2d(img)))))
    out.append(Check("fast DFT == naive DFT (n<=16)", worst, 1e-9))
    img = rng.uniform(-1, 1, (16, 16))
    out.append(Check("DFT round trip", float(np.max(np.abs(fourier.idft2d(fourier.dft2d(img)) - img))), 1e-9))

    cfg = RopeConfig(1024, 8)
    results = {}
    for name, img in (("point", fourier.make_point_image(64)), ("circle", fourier.make_circle_image(64, 16))):
        for variant in ("axial", "spiral"):
            r = fourier.run_reconstruction(img, variant, cfg)
            results[name, variant] = r
            out.append(Check(f"masked reconstruction is real [{name}, {variant}]", r.max_imag, 1e-9))
        gap = results[name, "axial"].mse - results[name, "spiral"].mse
        out.append(Check(f"axial MSE - spiral MSE [{name}]", gap, 0.0, above=True))
    return out


SUITES = {
    "relative": (suite_relative, 10_000),
    "degeneracy": (suite_degeneracy, 1_000),
    "isometry": (suite_isometry, 1_000),
    "assignment": (suite_assignment, 0),
    "table": (suite_table, 1_000),
    "extrapolation": (suite_extrapolation, 0),
    "translation": (suite_translation, 100),
    "fourier": (suite_fourier, 0),
}


def run_suites(names=None, trials: int | None = None, seed: int = 0) -> list[Check]:
    checks = []
    for name in names or SUITES:
        fn, default = SUITES[name]
        checks.extend(fn(trials if trials is not None else default, seed))
    return checks
