"""Pixel-grid images, admissible value sets, and elementary image metrics.

Images are square M x M pixel fields with physical resolution dx, stored
row-major from the top-left pixel. The grid is centered at the origin with
y increasing upward: pixel (r, c) has its center at

    x = (c + 0.5) * dx - m * dx / 2,    y = m * dx / 2 - (r + 0.5) * dx.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Image",
    "AdmissibleSet",
    "make_image",
    "multibang_project",
    "rel_l2_error",
    "pixel_centers",
    "read_image",
    "write_image",
    "write_image_csv",
    "write_pgm",
]


@dataclass(frozen=True)
class Image:
    """Square pixel image with physical resolution.

    values has shape (m, m), float64, row 0 at the top. Flattening in C
    order gives the lexicographic pixel ordering (r * m + c).
    """

    m: int
    dx: float
    values: np.ndarray

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.m, self.m):
            if v.size == self.m * self.m:
                v = v.reshape(self.m, self.m)
            else:
                raise ValueError(
                    f"values has {v.size} entries, expected {self.m * self.m}"
                )
        object.__setattr__(self, "values", v)

    @property
    def extent(self) -> float:
        """Physical side length m * dx."""
        return self.m * self.dx

    def flat(self) -> np.ndarray:
        """Lexicographically ordered copy of the pixel values."""
        return self.values.ravel().copy()

    def with_values(self, values: np.ndarray) -> "Image":
        return Image(self.m, self.dx, np.asarray(values, dtype=float))


@dataclass(frozen=True)
class AdmissibleSet:
    """Strictly increasing finite set of admissible values a0 < a1 < ... < an."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise ValueError("admissible set needs at least 2 values")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("admissible values must be strictly increasing")
        object.__setattr__(self, "values", vals)

    @property
    def lo(self) -> float:
        return self.values[0]

    @property
    def hi(self) -> float:
        return self.values[-1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def make_image(m: int, dx: float, fill: float = 0.0) -> Image:
    """Constant-filled m x m image with pixel size dx."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not dx > 0:
        raise ValueError(f"dx must be positive, got {dx}")
    return Image(m, dx, np.full((m, m), float(fill)))


def pixel_centers(m: int, dx: float) -> tuple[np.ndarray, np.ndarray]:
    """Physical center coordinates: xs per column, ys per row (top to bottom)."""
    half = m * dx / 2.0
    xs = (np.arange(m) + 0.5) * dx - half
    ys = half - (np.arange(m) + 0.5) * dx
    return xs, ys


def multibang_project(img: Image, admissible: AdmissibleSet) -> Image:
    """Replace every pixel by the nearest admissible value.

    Exact midpoints between two adjacent admissible values go to the smaller
    one, so background (the smallest value) wins at ambiguity.
    """
    a = admissible.as_array()
    mids = (a[:-1] + a[1:]) / 2.0
    idx = np.searchsorted(mids, img.values, side="left")
    return img.with_values(a[idx])


def rel_l2_error(x: Image, ref: Image) -> float:
    """||x - ref||_2 / ||ref||_2, or ||x||_2 when ref is identically zero."""
    if x.m != ref.m or x.dx != ref.dx:
        raise ValueError(
            f"shape mismatch: ({x.m}, {x.dx}) vs ({ref.m}, {ref.dx})"
        )
    diff = np.linalg.norm(x.values - ref.values)
    denom = np.linalg.norm(ref.values)
    if denom == 0.0:
        return float(np.linalg.norm(x.values))
    return float(diff / denom)


# ---------------------------------------------------------------------------
# File formats: raw little-endian float64 + JSON sidecar, CSV, binary PGM.
# ---------------------------------------------------------------------------

def _sidecar_path(path: Path) -> Path:
    return path.with_suffix(path.suffix + ".json")


def write_image(img: Image, path: str | Path) -> list[Path]:
    """Write raw little-endian float64 pixels plus a JSON sidecar.

    Returns the paths written ([data, sidecar]).
    """
    path = Path(path)
    data = img.values.astype("<f8").tobytes(order="C")
    path.write_bytes(data)
    sidecar = _sidecar_path(path)
    sidecar.write_text(
        json.dumps({"m": img.m, "dx": img.dx, "order": "row-major-top-left"})
        + "\n"
    )
    return [path, sidecar]


def read_image(path: str | Path) -> Image:
    path = Path(path)
    meta = json.loads(_sidecar_path(path).read_text())
    m = int(meta["m"])
    raw = np.frombuffer(path.read_bytes(), dtype="<f8")
    if raw.size != m * m:
        raise ValueError(f"{path}: expected {m * m} float64 values, got {raw.size}")
    return Image(m, float(meta["dx"]), raw.reshape(m, m).astype(float))


def write_image_csv(img: Image, path: str | Path) -> Path:
    """CSV export, one row per pixel row, 17 significant digits."""
    path = Path(path)
    header = ",".join(f"c{c}" for c in range(img.m))
    rows = [header]
    for r in range(img.m):
        rows.append(",".join(f"{v:.17g}" for v in img.values[r]))
    path.write_text("\n".join(rows) + "\n")
    return path


def write_pgm(img: Image, path: str | Path,
              window: tuple[float, float] | None = None) -> Path:
    """8-bit binary PGM (P5) export, min-max windowed unless given."""
    path = Path(path)
    if window is None:
        lo, hi = float(img.values.min()), float(img.values.max())
    else:
        lo, hi = float(window[0]), float(window[1])
    span = hi - lo
    if span <= 0:
        gray = np.zeros((img.m, img.m), dtype=np.uint8)
    else:
        scaled = np.clip((img.values - lo) / span, 0.0, 1.0)
        gray = np.round(scaled * 255.0).astype(np.uint8)
    header = f"P5\n{img.m} {img.m}\n255\n".encode("ascii")
    path.write_bytes(header + gray.tobytes(order="C"))
    return path
