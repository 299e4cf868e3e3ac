"""Hounsfield-unit window transforms and the multi-intensity view stack.

A window ``(level, width)`` maps the HU range ``level +/- width/2`` linearly
onto ``[0, 255]``; values outside the range saturate. Stacking several
windowed copies of the same slices gives the multi-intensity input that
highlights different organs (bone, lung, mediastinum, abdomen, soft tissue).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveWidth, ShapeMismatch


@dataclass(frozen=True)
class HuWindow:
    level: float  # window center, HU
    width: float  # window span, HU, > 0

    def __post_init__(self) -> None:
        if not self.width > 0:
            raise NonPositiveWidth(f"window width must be > 0, got {self.width}")

    @property
    def low(self) -> float:
        return self.level - self.width / 2.0

    @property
    def high(self) -> float:
        return self.level + self.width / 2.0


@dataclass(frozen=True)
class WindowSet:
    """Ordered collection of windows; order fixes the view order downstream."""

    windows: tuple[HuWindow, ...]

    def __post_init__(self) -> None:
        if not self.windows:
            raise NonPositiveWidth("window set must be non-empty")

    def __len__(self) -> int:
        return len(self.windows)

    def __iter__(self):
        return iter(self.windows)

    def __getitem__(self, i: int) -> HuWindow:
        return self.windows[i]


def default_window_set() -> WindowSet:
    """Five-window preset: bone, lung, mediastinum, abdomen, soft tissue."""
    return WindowSet(
        (
            HuWindow(400.0, 2000.0),
            HuWindow(-600.0, 1500.0),
            HuWindow(50.0, 350.0),
            HuWindow(30.0, 150.0),
            HuWindow(50.0, 400.0),
        )
    )


def apply_window(slice_hu, window: HuWindow) -> np.ndarray:
    """Map HU values through a window onto [0.0, 255.0].

    out = clip((hu - (level - width/2)) / width, 0, 1) * 255, elementwise.
    """
    hu = np.asarray(slice_hu, dtype=np.float64)
    scaled = (hu - window.low) / window.width
    return np.clip(scaled, 0.0, 1.0) * 255.0


def parse_window_config(text: str) -> WindowSet:
    """Read a window set from config text: one ``level,width`` pair per line."""
    windows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'level,width', got {raw!r}")
        windows.append(HuWindow(float(parts[0]), float(parts[1])))
    return WindowSet(tuple(windows))


def multi_intensity_stack(slices, window_set: WindowSet) -> np.ndarray:
    """Apply every window to a group of slices.

    ``slices`` is an array (or sequence) of same-shaped 2-D HU grids, three
    consecutive slices in the standard configuration. Returns an array of
    shape (views, channels, H, W) where view v, channel c is
    ``apply_window(slices[c], window_set[v])``.
    """
    arrs = [np.asarray(s, dtype=np.float64) for s in slices]
    if not arrs:
        raise ShapeMismatch("need at least one slice")
    shape = arrs[0].shape
    if any(a.shape != shape for a in arrs) or len(shape) != 2:
        raise ShapeMismatch(f"slices must share a 2-D shape, got {[a.shape for a in arrs]}")
    channels = np.stack(arrs)
    return np.stack([apply_window(channels, w) for w in window_set])
