"""Frequency support of axial vs spiral RoPE and masked FFT reconstructions.

Frequencies are in radians per position. A continuous frequency vector
``(fx, fy)`` lands on DFT bin ``round(n * f / (2*pi))`` per component
(ties away from zero), clamped to the Nyquist index. Bins are stored as
``(row, col) = (ky mod n, kx mod n)``, i.e. numpy's corner-origin layout;
use :func:`centered` to view a mask with DC in the middle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ropecore import (
    ConfigError,
    DimensionError,
    RopeConfig,
    assign_frequencies,
    make_direction_set,
    make_frequency_pool,
)


@dataclass(frozen=True)
class FrequencyPoint:
    fx: float
    fy: float
    direction_index: int
    direction_deg: float
    theta_index: int
    theta: float
    sign: int

    @property
    def magnitude(self) -> float:
        return float(np.hypot(self.fx, self.fy))


@dataclass(frozen=True)
class SpectrumMask:
    size: int
    kept_bins: frozenset
    clamped: int = 0

    def array(self) -> np.ndarray:
        m = np.zeros((self.size, self.size), dtype=bool)
        if self.kept_bins:
            rows, cols = zip(*self.kept_bins)
            m[list(rows), list(cols)] = True
        return m

    def __len__(self):
        return len(self.kept_bins)

    def __or__(self, other: "SpectrumMask") -> "SpectrumMask":
        if other.size != self.size:
            raise DimensionError(f"mask sizes differ: {self.size} vs {other.size}")
        return SpectrumMask(self.size, self.kept_bins | other.kept_bins, self.clamped + other.clamped)


def full_mask(n: int) -> SpectrumMask:
    return SpectrumMask(n, frozenset((r, c) for r in range(n) for c in range(n)))


def _square(img) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise DimensionError(f"expected a square 2D image, got shape {img.shape}")
    return img


def dft2d(img) -> np.ndarray:
    return np.fft.fft2(_square(img).astype(np.float64))


def idft2d(spectrum) -> np.ndarray:
    """Real part of the inverse transform."""
    return np.fft.ifft2(_square(spectrum)).real


def naive_dft2d(img) -> np.ndarray:
    """Direct quadruple-sum DFT, ``O(n^4)``. Reference for small grids only."""
    img = _square(img).astype(np.complex128)
    n = img.shape[0]
    k = np.arange(n)
    out = np.empty((n, n), dtype=np.complex128)
    # out[u, v] = sum_{y, x} img[y, x] * exp(-2i pi (u y + v x) / n)
    for u in range(n):
        for v in range(n):
            phase = np.exp(-2j * np.pi * (u * k[:, None] + v * k[None, :]) / n)
            out[u, v] = np.sum(img * phase)
    return out


def centered(a: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(a)


def support_points(variant: str, config: RopeConfig) -> list[FrequencyPoint]:
    """All ``+-theta * u`` points a variant can represent; ``dim`` points either way."""
    thetas = make_frequency_pool(config).thetas
    points = []
    if variant == "axial":
        for t, theta in enumerate(thetas):
            for d, deg, ux, uy in ((0, 0.0, 1.0, 0.0), (1, 90.0, 0.0, 1.0)):
                for s in (1, -1):
                    points.append(FrequencyPoint(s * theta * ux + 0.0, s * theta * uy + 0.0, d, deg, t, theta, s))
        return points
    if variant == "spiral":
        k = config.k_directions
        dirs = make_direction_set(k)
        assignment = assign_frequencies(config)
        for d, indices in enumerate(assignment.per_direction):
            ux, uy = dirs.unit_vectors[d]
            deg = 180.0 * d / k
            for t in indices:
                theta = thetas[t]
                for s in (1, -1):
                    points.append(FrequencyPoint(s * theta * ux + 0.0, s * theta * uy + 0.0, d, deg, t, theta, s))
        return points
    raise ConfigError(f"support_points supports 'axial' and 'spiral', got {variant!r}")


def _snap(f: float, n: int) -> tuple[int, bool]:
    v = n * f / (2 * np.pi)
    idx = int(np.sign(v) * np.floor(abs(v) + 0.5))
    nyq = n // 2
    if idx > nyq:
        return nyq, True
    if idx < -nyq:
        return -nyq, True
    return idx, False


def build_mask(points, n: int) -> SpectrumMask:
    if n < 2:
        raise ConfigError(f"grid size must be >= 2, got {n}")
    bins = set()
    clamped = 0
    for pt in points:
        kx, cx = _snap(pt.fx, n)
        ky, cy = _snap(pt.fy, n)
        clamped += cx or cy
        bins.add((ky % n, kx % n))
        bins.add((-ky % n, -kx % n))
    return SpectrumMask(n, frozenset(bins), clamped)


def make_point_image(n: int) -> np.ndarray:
    if n < 1:
        raise ConfigError(f"image size must be positive, got {n}")
    img = np.zeros((n, n), dtype=np.uint8)
    img[n // 2, n // 2] = 1
    return img


def make_circle_image(n: int, radius: int = 16, center=None) -> np.ndarray:
    """Midpoint-circle rasterization of a one-pixel-wide ring."""
    if center is None:
        center = (n // 2, n // 2)
    cx, cy = center
    if radius < 1 or radius >= n / 2:
        raise ConfigError(f"circle radius must satisfy 1 <= radius < n/2 = {n / 2}, got {radius}")
    img = np.zeros((n, n), dtype=np.uint8)
    x, y, err = radius, 0, 1 - radius
    while x >= y:
        for dx, dy in ((x, y), (y, x), (-y, x), (-x, y), (-x, -y), (-y, -x), (y, -x), (x, -y)):
            px, py = cx + dx, cy + dy
            if 0 <= px < n and 0 <= py < n:
                img[py, px] = 1
        y += 1
        if err < 0:
            err += 2 * y + 1
        else:
            x -= 1
            err += 2 * (y - x) + 1
    return img


def masked_spectrum_inverse(img, mask: SpectrumMask) -> np.ndarray:
    """Complex inverse FFT of the masked spectrum (imaginary part should vanish)."""
    img = _square(img)
    if img.shape[0] != mask.size:
        raise DimensionError(f"image size {img.shape[0]} != mask size {mask.size}")
    return np.fft.ifft2(dft2d(img) * mask.array())


def reconstruct(img, mask: SpectrumMask) -> np.ndarray:
    return masked_spectrum_inverse(img, mask).real


def mse(original, reconstruction) -> float:
    a = np.asarray(original, dtype=np.float64)
    b = np.asarray(reconstruction, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def axis_energy_fraction(recon, center=None) -> float:
    """Share of off-center energy lying on the row and column through ``center``.

    The center pixel itself is excluded from both numerator and denominator.
    """
    e = np.asarray(recon, dtype=np.float64) ** 2
    n = e.shape[0]
    cx, cy = center if center is not None else (n // 2, n // 2)
    e = e.copy()
    e[cy, cx] = 0.0
    total = e.sum()
    if total == 0:
        return 0.0
    return float((e[cy, :].sum() + e[:, cx].sum()) / total)


@dataclass(frozen=True)
class ReconstructionResult:
    image: np.ndarray
    reconstruction: np.ndarray
    mask: SpectrumMask
    mse: float
    max_imag: float


def run_reconstruction(img, variant: str, config: RopeConfig, full: bool = False) -> ReconstructionResult:
    """Mask ``img``'s spectrum to a variant's support and invert."""
    img = _square(img)
    n = img.shape[0]
    mask = full_mask(n) if full else build_mask(support_points(variant, config), n)
    rec = masked_spectrum_inverse(img, mask)
    return ReconstructionResult(img, rec.real, mask, mse(img, rec.real), float(np.abs(rec.imag).max()))


def to_uint8(img) -> np.ndarray:
    """Linear rescale of ``[min, max]`` onto ``0..255`` (constant images map to 0)."""
    a = np.asarray(img, dtype=np.float64)
    lo, hi = a.min(), a.max()
    if hi == lo:
        return np.zeros(a.shape, dtype=np.uint8)
    return np.round((a - lo) / (hi - lo) * 255.0).astype(np.uint8)
