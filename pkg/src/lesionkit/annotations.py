"""Lesion annotation records: CSV parsing, validation, splits, size buckets.

CSV schema (UTF-8, LF line endings, ``.`` decimal point):

    image_key,x1,y1,x2,y2,recist,long_mm,short_mm,organ,split,spacing_x,spacing_y,slice_mm

``recist`` holds 8 semicolon-separated floats: the long-axis endpoint pair
followed by the short-axis pair, as interleaved x,y pixel coordinates.
``organ`` is an integer code 1..8, ``split`` one of train/val/test.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvariantViolation, MalformedRow, UnknownOrganCode

HEADER = "image_key,x1,y1,x2,y2,recist,long_mm,short_mm,organ,split,spacing_x,spacing_y,slice_mm"

#: Organ names in code order; code n maps to ORGAN_NAMES[n - 1].
ORGAN_NAMES = (
    "bone",
    "abdomen",
    "mediastinum",
    "liver",
    "lung",
    "kidney",
    "soft-tissue",
    "pelvis",
)

SPLITS = ("train", "val", "test")


def organ_name(code: int) -> str:
    if not 1 <= code <= len(ORGAN_NAMES):
        raise UnknownOrganCode(f"organ code {code} not in 1..{len(ORGAN_NAMES)}")
    return ORGAN_NAMES[code - 1]


@dataclass(frozen=True)
class LesionRecord:
    """One annotated lesion on one CT slice."""

    image_key: str
    bbox: tuple[float, float, float, float]  # x1, y1, x2, y2 in pixels
    recist_endpoints: tuple[float, ...]  # 8 floats, long axis then short axis
    diameters_mm: tuple[float, float]  # long, short
    organ_code: int
    split: str
    pixel_spacing_mm: tuple[float, float]
    slice_interval_mm: float

    def __post_init__(self) -> None:
        x1, y1, x2, y2 = self.bbox
        if not (x2 > x1 and y2 > y1):
            raise InvariantViolation(f"bbox: needs x2 > x1 and y2 > y1, got {self.bbox}")
        if len(self.recist_endpoints) != 8:
            raise InvariantViolation(
                f"recist: expected 8 values, got {len(self.recist_endpoints)}"
            )
        long_mm, short_mm = self.diameters_mm
        if not (long_mm >= short_mm > 0):
            raise InvariantViolation(
                f"diameters_mm: needs long >= short > 0, got {self.diameters_mm}"
            )
        if not (isinstance(self.organ_code, int) and 1 <= self.organ_code <= 8):
            raise UnknownOrganCode(f"organ: code {self.organ_code} not in 1..8")
        if self.split not in SPLITS:
            raise InvariantViolation(f"split: {self.split!r} not in {SPLITS}")
        if not all(s > 0 for s in self.pixel_spacing_mm) or self.slice_interval_mm <= 0:
            raise InvariantViolation("spacing: all spacings must be positive")
        if not all(map(math.isfinite, self.bbox + self.recist_endpoints + self.diameters_mm)):
            raise InvariantViolation("non-finite value in record")

    @property
    def width(self) -> float:
        return self.bbox[2] - self.bbox[0]

    @property
    def height(self) -> float:
        return self.bbox[3] - self.bbox[1]


class SizeBucket(enum.Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


def bucket_for_diameter(long_mm: float) -> SizeBucket:
    """Bucket a lesion by its long diameter: <10 small, 10..30 medium, >30 large."""
    if long_mm < 10.0:
        return SizeBucket.SMALL
    if long_mm <= 30.0:
        return SizeBucket.MEDIUM
    return SizeBucket.LARGE


def size_bucket(record: LesionRecord) -> SizeBucket:
    return bucket_for_diameter(record.diameters_mm[0])


def _parse_float(cell: str, lineno: int, column: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise MalformedRow(f"line {lineno}, column {column}: not a number: {cell!r}") from None


def parse_annotations(stream) -> list[LesionRecord]:
    """Parse annotation CSV text into validated records.

    ``stream`` may be a string or any iterable of lines. The first line must
    be the documented header. Raises with the line number (and column where
    known) of the first violation.
    """
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = [ln.rstrip("\n").rstrip("\r") for ln in stream]
    if not lines or lines[0] != HEADER:
        raise MalformedRow("line 1: missing or wrong header")

    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if line == "":
            continue
        cells = line.split(",")
        if len(cells) != 13:
            raise MalformedRow(f"line {lineno}: expected 13 fields, got {len(cells)}")
        recist_cells = cells[5].split(";")
        if len(recist_cells) != 8:
            raise MalformedRow(
                f"line {lineno}, column recist: expected 8 values, got {len(recist_cells)}"
            )
        try:
            organ = int(cells[8])
        except ValueError:
            raise MalformedRow(
                f"line {lineno}, column organ: not an integer: {cells[8]!r}"
            ) from None
        try:
            record = LesionRecord(
                image_key=cells[0],
                bbox=(
                    _parse_float(cells[1], lineno, "x1"),
                    _parse_float(cells[2], lineno, "y1"),
                    _parse_float(cells[3], lineno, "x2"),
                    _parse_float(cells[4], lineno, "y2"),
                ),
                recist_endpoints=tuple(
                    _parse_float(c, lineno, "recist") for c in recist_cells
                ),
                diameters_mm=(
                    _parse_float(cells[6], lineno, "long_mm"),
                    _parse_float(cells[7], lineno, "short_mm"),
                ),
                organ_code=organ,
                split=cells[9],
                pixel_spacing_mm=(
                    _parse_float(cells[10], lineno, "spacing_x"),
                    _parse_float(cells[11], lineno, "spacing_y"),
                ),
                slice_interval_mm=_parse_float(cells[12], lineno, "slice_mm"),
            )
        except (InvariantViolation, UnknownOrganCode) as err:
            raise type(err)(f"line {lineno}: {err}") from None
        records.append(record)
    return records


def serialize_annotations(records) -> str:
    """Render records back to CSV text; inverse of :func:`parse_annotations`."""
    out = [HEADER]
    for r in records:
        out.append(
            ",".join(
                [
                    r.image_key,
                    *(str(v) for v in r.bbox),
                    ";".join(str(v) for v in r.recist_endpoints),
                    str(r.diameters_mm[0]),
                    str(r.diameters_mm[1]),
                    str(r.organ_code),
                    r.split,
                    str(r.pixel_spacing_mm[0]),
                    str(r.pixel_spacing_mm[1]),
                    str(r.slice_interval_mm),
                ]
            )
        )
    return "\n".join(out) + "\n"


def split_records(records) -> tuple[list[LesionRecord], list[LesionRecord], list[LesionRecord]]:
    """Partition records by their split tag, preserving relative order."""
    parts: dict[str, list[LesionRecord]] = {s: [] for s in SPLITS}
    for r in records:
        parts[r.split].append(r)
    return parts["train"], parts["val"], parts["test"]
