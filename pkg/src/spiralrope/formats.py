"""On-disk formats: CSV frequency points, binary PGM images, key=value metrics, vector text files."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

CSV_HEADER = "variant,direction_deg,theta_index,theta,fx,fy,sign"


def fmt(v: float) -> str:
    """Nine significant digits; ``-0`` is normalized to ``0``."""
    return format(float(v) + 0.0, ".9g")


def frequency_csv(rows) -> str:
    """``rows`` is an iterable of ``(variant, FrequencyPoint)``."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for variant, pt in rows:
        buf.write(
            f"{variant},{fmt(pt.direction_deg)},{pt.theta_index},{fmt(pt.theta)},"
            f"{fmt(pt.fx)},{fmt(pt.fy)},{pt.sign}\n"
        )
    return buf.getvalue()


def read_frequency_csv(text: str) -> list[dict]:
    lines = text.strip().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"missing CSV header {CSV_HEADER!r}")
    keys = CSV_HEADER.split(",")
    return [dict(zip(keys, line.split(","))) for line in lines[1:]]


def pgm_bytes(img: np.ndarray) -> bytes:
    """Binary PGM (P5), maxval 255, rows top to bottom."""
    img = np.asarray(img)
    if img.dtype != np.uint8 or img.ndim != 2:
        raise ValueError(f"PGM export needs a 2D uint8 array, got {img.dtype} {img.shape}")
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(img).tobytes()


def read_pgm(data: bytes) -> np.ndarray:
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM (P5) file")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ValueError(f"unsupported maxval {maxval}")
    pixels = parts[4] if len(parts) > 4 else b""
    if len(pixels) != w * h:
        raise ValueError(f"expected {w * h} pixels, got {len(pixels)}")
    return np.frombuffer(pixels, dtype=np.uint8).reshape(h, w)


def metrics_text(metrics: dict) -> str:
    out = []
    for key, value in metrics.items():
        if isinstance(value, float):
            value = fmt(value)
        out.append(f"{key}={value}")
    return "\n".join(out) + "\n"


def parse_metrics(text: str) -> dict[str, str]:
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def read_vectors(text: str) -> np.ndarray:
    """One whitespace-separated vector per non-empty line."""
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        return np.empty((0, 0))
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"vectors have inconsistent lengths {sorted(widths)}")
    return np.array(rows, dtype=np.float64)


def vectors_text(vectors: np.ndarray) -> str:
    # repr-precision so another implementation can diff bit for bit
    return "".join(" ".join(format(float(v) + 0.0, ".17g") for v in row) + "\n" for row in vectors)


def write_text(path: str | Path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def write_bytes(path: str | Path, data: bytes) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e
