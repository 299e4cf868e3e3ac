"""CT geometry preprocessing.

Black-border cropping, resampling to a common voxel spacing, RECIST
pseudo-mask rasterization, and deterministic affine augmentation. Volumes
travel as raw little-endian float32 files with a JSON sidecar header; masks
are written as binary 8-bit PGM.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import DegenerateMeasurement, NonPositiveSpacing, ParamOutOfRange

#: HU threshold below which a pixel counts as black border. Air reconstructs
#: at -1024; the 24 HU margin absorbs scanner noise.
BLACK_THRESHOLD_HU = -1000.0

DEFAULT_TARGET_SPACING = (0.8, 0.8, 2.0)  # mm, (x, y, inter-slice)


@dataclass(frozen=True)
class Volume:
    """A CT volume: voxels indexed (slice, row, col), spacing as (x, y, z) mm."""

    voxels: np.ndarray
    spacing_mm: tuple[float, float, float]

    def __post_init__(self) -> None:
        if self.voxels.ndim != 3 or self.voxels.size == 0:
            raise NonPositiveSpacing("volume must be a non-empty 3-D grid")
        if not all(s > 0 for s in self.spacing_mm):
            raise NonPositiveSpacing(f"spacings must be > 0, got {self.spacing_mm}")


@dataclass(frozen=True)
class CropRect:
    """Half-open pixel bounds of a crop: columns [x0, x1), rows [y0, y1)."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self) -> None:
        if not (0 <= self.x0 < self.x1 and 0 <= self.y0 < self.y1):
            raise ValueError(f"invalid crop rect {self}")


@dataclass(frozen=True)
class AugmentParams:
    hflip: bool
    vflip: bool
    scale: float  # in [0.8, 1.2]
    translate: tuple[float, float]  # (dx, dy) pixels, each in [-8, 8]

    def validate(self) -> None:
        if not 0.8 <= self.scale <= 1.2:
            raise ParamOutOfRange(f"scale {self.scale} outside [0.8, 1.2]")
        if not all(-8.0 <= t <= 8.0 for t in self.translate):
            raise ParamOutOfRange(f"translate {self.translate} outside [-8, 8]")


def crop_black_border(slice_hu, threshold: float = BLACK_THRESHOLD_HU):
    """Crop to the tight bounding box of pixels with HU above ``threshold``.

    Returns ``(cropped, rect)``. If no pixel exceeds the threshold the full
    frame is returned unchanged.
    """
    grid = np.asarray(slice_hu, dtype=np.float64)
    mask = grid > threshold
    h, w = grid.shape
    if not mask.any():
        return grid.copy(), CropRect(0, 0, w, h)
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    rect = CropRect(int(cols[0]), int(rows[0]), int(cols[-1]) + 1, int(rows[-1]) + 1)
    return grid[rect.y0 : rect.y1, rect.x0 : rect.x1].copy(), rect


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def resample(vol: Volume, target_spacing=DEFAULT_TARGET_SPACING) -> Volume:
    """Trilinearly resample a volume to ``target_spacing``.

    Output dims are ``round(src_dim * src_spacing / target_spacing)``
    (half-up, minimum 1) per axis. Grids are origin-aligned: target index j
    samples source coordinate ``j * target / source``; coordinates past the
    last sample clamp to the edge.
    """
    if not all(s > 0 for s in target_spacing):
        raise NonPositiveSpacing(f"target spacings must be > 0, got {target_spacing}")
    sx, sy, sz = vol.spacing_mm
    tx, ty, tz = target_spacing
    ns, nh, nw = vol.voxels.shape
    out_shape = (
        max(1, _round_half_up(ns * sz / tz)),
        max(1, _round_half_up(nh * sy / ty)),
        max(1, _round_half_up(nw * sx / tx)),
    )
    zc = np.arange(out_shape[0], dtype=np.float64) * (tz / sz)
    yc = np.arange(out_shape[1], dtype=np.float64) * (ty / sy)
    xc = np.arange(out_shape[2], dtype=np.float64) * (tx / sx)
    coords = np.meshgrid(zc, yc, xc, indexing="ij")
    out = map_coordinates(vol.voxels.astype(np.float64), coords, order=1, mode="nearest")
    return Volume(out, (tx, ty, tz))


def _ordered_quad(endpoints) -> np.ndarray:
    pts = np.asarray(endpoints, dtype=np.float64).reshape(4, 2)
    for pair in (pts[0:2], pts[2:4]):
        if np.hypot(*(pair[0] - pair[1])) < 1e-12:
            raise DegenerateMeasurement("zero-length measurement axis")
    centroid = pts.mean(axis=0)
    angles = np.arctan2(pts[:, 1] - centroid[1], pts[:, 0] - centroid[0])
    quad = pts[np.argsort(angles)]
    # Shoelace area; colinear endpoint sets collapse to (near) zero.
    x, y = quad[:, 0], quad[:, 1]
    area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    if abs(area) < 1e-9:
        raise DegenerateMeasurement("colinear RECIST endpoints")
    if area < 0:
        quad = quad[::-1]
    return quad


def recist_to_mask(endpoints, frame: tuple[int, int]) -> np.ndarray:
    """Rasterize the filled convex quadrilateral spanned by RECIST endpoints.

    ``endpoints`` are 8 floats (long-axis pair then short-axis pair, x,y
    interleaved); ``frame`` is (H, W). A pixel is set when its center lies
    inside or on the boundary; parts outside the frame are clipped.
    """
    quad = _ordered_quad(endpoints)
    h, w = frame
    yy, xx = np.mgrid[0:h, 0:w]
    inside = np.ones((h, w), dtype=bool)
    for i in range(4):
        x1, y1 = quad[i]
        x2, y2 = quad[(i + 1) % 4]
        cross = (x2 - x1) * (yy - y1) - (y2 - y1) * (xx - x1)
        inside &= cross >= -1e-9
    return inside


def _integer_shift(img: np.ndarray, dx: int, dy: int) -> np.ndarray:
    out = np.zeros_like(img)
    h, w = img.shape
    ys0, ys1 = max(-dy, 0), h - max(dy, 0)
    xs0, xs1 = max(-dx, 0), w - max(dx, 0)
    if ys1 > ys0 and xs1 > xs0:
        out[ys0 + dy : ys1 + dy, xs0 + dx : xs1 + dx] = img[ys0:ys1, xs0:xs1]
    return out


def augment(image, params: AugmentParams) -> np.ndarray:
    """Apply flips, centered bilinear scaling, then integer-rounded translation.

    Scale > 1 magnifies content about the image center; pixels mapped from
    outside the frame are filled with 0.
    """
    params.validate()
    out = np.array(image, dtype=np.float64)
    if params.hflip:
        out = out[:, ::-1]
    if params.vflip:
        out = out[::-1, :]
    h, w = out.shape
    if params.scale != 1.0:
        cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
        yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
        ys = (yy - cy) / params.scale + cy
        xs = (xx - cx) / params.scale + cx
        out = map_coordinates(out, [ys, xs], order=1, mode="constant", cval=0.0)
    dx = int(round(params.translate[0]))
    dy = int(round(params.translate[1]))
    if dx or dy:
        out = _integer_shift(out, dx, dy)
    return np.ascontiguousarray(out)


def sample_augment(seed: int) -> AugmentParams:
    """Draw augmentation parameters uniformly over their ranges, seeded."""
    rng = np.random.default_rng(seed)
    return AugmentParams(
        hflip=bool(rng.integers(2)),
        vflip=bool(rng.integers(2)),
        scale=float(rng.uniform(0.8, 1.2)),
        translate=(float(rng.uniform(-8.0, 8.0)), float(rng.uniform(-8.0, 8.0))),
    )


# --- file formats ---

def write_volume(vol: Volume, path) -> None:
    """Write raw little-endian float32 voxels plus a JSON sidecar header."""
    path = Path(path)
    path.write_bytes(np.ascontiguousarray(vol.voxels, dtype="<f4").tobytes())
    header = {"dims": list(vol.voxels.shape), "spacing_mm": list(vol.spacing_mm)}
    Path(str(path) + ".json").write_text(json.dumps(header) + "\n", encoding="utf-8")


def read_volume(path) -> Volume:
    path = Path(path)
    header = json.loads(Path(str(path) + ".json").read_text(encoding="utf-8"))
    dims = tuple(header["dims"])
    voxels = np.frombuffer(path.read_bytes(), dtype="<f4").reshape(dims).astype(np.float64)
    return Volume(voxels, tuple(float(s) for s in header["spacing_mm"]))


def write_pgm(mask, path) -> None:
    """Write a binary mask as 8-bit binary PGM (set pixels become 255)."""
    arr = (np.asarray(mask) > 0).astype(np.uint8) * 255
    h, w = arr.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(arr.tobytes())
