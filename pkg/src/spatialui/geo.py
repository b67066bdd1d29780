"""Geospatial demo data: EV charger records, map projection, point clouds."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    FormatError,
    InvalidArgumentError,
    OutOfDomainError,
    TruncatedFileError,
    UnsupportedFormatError,
)
from .math3d import Vec3

MAX_LATITUDE = 85.05113  # Web Mercator domain edge, degrees


class ChargerType(str, Enum):
    SLOW = "slow"
    FAST = "fast"
    RAPID = "rapid"

    @staticmethod
    def parse(text: str) -> "ChargerType":
        try:
            return ChargerType(text.strip().lower())
        except ValueError:
            raise FormatError(
                f"unknown charger type {text!r} (expected slow, fast or rapid)"
            ) from None


@dataclass(frozen=True)
class ChargerRecord:
    id: str
    latitude: float
    longitude: float
    charger_type: ChargerType
    available: bool
    scan_path: str | None = None


@dataclass(frozen=True)
class ChargerQuery:
    """Filter by type set and availability; an empty type set means all types."""

    types: frozenset[ChargerType] = frozenset()
    available_only: bool = False

    def matches(self, record: ChargerRecord) -> bool:
        if self.types and record.charger_type not in self.types:
            return False
        if self.available_only and not record.available:
            return False
        return True


@dataclass(frozen=True)
class MapPlaneSpec:
    extent: float = 2.0  # plane spans [-extent/2, +extent/2] in x and y
    scale: float = 1.0

    def __post_init__(self):
        if self.extent <= 0 or self.scale <= 0:
            raise InvalidArgumentError("map extent and scale must be positive")


def mercator_project(latitude: float, longitude: float, spec: MapPlaneSpec) -> tuple[float, float]:
    """Normalized Web Mercator onto the map plane, in meters."""
    if not (-MAX_LATITUDE <= latitude <= MAX_LATITUDE):
        raise OutOfDomainError(f"latitude {latitude} outside +/-{MAX_LATITUDE}")
    if not (-180.0 <= longitude <= 180.0):
        raise OutOfDomainError(f"longitude {longitude} outside [-180, 180]")
    u = longitude / 180.0
    # asinh(tan(lat)) == ln(tan(pi/4 + lat/2)), but exact at lat = 0.
    v = math.asinh(math.tan(math.radians(latitude))) / math.pi
    half = spec.extent / 2.0 * spec.scale
    return (u * half, v * half)


def mercator_unproject(x: float, y: float, spec: MapPlaneSpec) -> tuple[float, float]:
    """Inverse of mercator_project; (x, y) must lie within the scaled extent."""
    half = spec.extent / 2.0 * spec.scale
    bound = half * (1.0 + 1e-12)
    if abs(x) > bound or abs(y) > bound:
        raise OutOfDomainError(f"({x}, {y}) outside map extent {half}")
    longitude = (x / half) * 180.0
    v = y / half
    latitude = math.degrees(math.atan(math.sinh(v * math.pi)))
    return (latitude, longitude)


def query_chargers(records: list[ChargerRecord], query: ChargerQuery) -> list[ChargerRecord]:
    return [r for r in records if query.matches(r)]


_CSV_COLUMNS = ("id", "lat", "lon", "type", "available", "scan_path")
_TRUE_WORDS = {"true", "1"}
_FALSE_WORDS = {"false", "0"}


@dataclass(frozen=True)
class RowError:
    line: int
    message: str


def load_chargers(csv_text: str) -> tuple[list[ChargerRecord], list[RowError]]:
    """Parse the charger CSV; malformed rows become RowErrors, valid rows load."""
    reader = csv.DictReader(io.StringIO(csv_text))
    if reader.fieldnames is None:
        raise FormatError("charger CSV is empty; expected a header row")
    header = [name.strip() for name in reader.fieldnames]
    missing = [c for c in _CSV_COLUMNS if c not in header]
    if missing:
        raise FormatError(f"charger CSV header missing columns: {', '.join(missing)}")

    records: list[ChargerRecord] = []
    errors: list[RowError] = []
    seen_ids: set[str] = set()
    for row in reader:
        line = reader.line_num
        try:
            records.append(_parse_row(row, seen_ids))
        except FormatError as exc:
            errors.append(RowError(line, str(exc)))
    return records, errors


def _parse_row(row: dict[str, str], seen_ids: set[str]) -> ChargerRecord:
    rid = (row.get("id") or "").strip()
    if not rid:
        raise FormatError("missing id")
    if rid in seen_ids:
        raise FormatError(f"duplicate id {rid!r}")
    try:
        lat = float(row.get("lat") or "")
        lon = float(row.get("lon") or "")
    except ValueError:
        raise FormatError("lat/lon must be numeric") from None
    if not (-MAX_LATITUDE <= lat <= MAX_LATITUDE):
        raise FormatError(f"latitude {lat} outside +/-{MAX_LATITUDE}")
    if not (-180.0 <= lon < 180.0):
        raise FormatError(f"longitude {lon} outside [-180, 180)")
    ctype = ChargerType.parse(row.get("type") or "")
    avail_text = (row.get("available") or "").strip().lower()
    if avail_text in _TRUE_WORDS:
        available = True
    elif avail_text in _FALSE_WORDS:
        available = False
    else:
        raise FormatError(f"availability {row.get('available')!r} not one of true/false/0/1")
    scan = (row.get("scan_path") or "").strip() or None
    seen_ids.add(rid)
    return ChargerRecord(rid, lat, lon, ctype, available, scan)


@dataclass(frozen=True)
class PointCloud:
    points: tuple[tuple[Vec3, tuple[int, int, int]], ...]

    def __len__(self) -> int:
        return len(self.points)


_COLOR_NAMES = {"red": 0, "r": 0, "green": 1, "g": 1, "blue": 2, "b": 2}


def load_point_cloud(ply_text: str) -> PointCloud:
    """Parse an ASCII PLY with float x,y,z and optional uchar r,g,b."""
    lines = ply_text.splitlines()
    if not lines or lines[0].strip() != "ply":
        raise FormatError("not a PLY file (missing 'ply' magic)", line=1)

    vertex_count: int | None = None
    xyz_index: dict[str, int] = {}
    rgb_index: dict[int, int] = {}
    header_end: int | None = None
    in_vertex_element = False
    prop_index = 0

    for i, raw in enumerate(lines[1:], start=2):
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "format":
            if len(parts) < 2 or parts[1] != "ascii":
                raise UnsupportedFormatError(f"only ascii PLY is supported, got {raw!r}", line=i)
        elif parts[0] == "element":
            in_vertex_element = parts[1] == "vertex"
            if in_vertex_element:
                try:
                    vertex_count = int(parts[2])
                except (IndexError, ValueError):
                    raise FormatError(f"bad vertex element declaration {raw!r}", line=i) from None
                prop_index = 0
        elif parts[0] == "property" and in_vertex_element:
            name = parts[-1]
            if name in ("x", "y", "z"):
                xyz_index[name] = prop_index
            elif name in _COLOR_NAMES:
                rgb_index[_COLOR_NAMES[name]] = prop_index
            prop_index += 1
        elif parts[0] == "end_header":
            header_end = i
            break

    if header_end is None:
        raise FormatError("PLY header never ends (missing end_header)")
    if vertex_count is None:
        raise FormatError("PLY header declares no vertex element")
    if vertex_count == 0:
        raise FormatError("PLY declares zero vertices; point cloud would be empty")
    if set(xyz_index) != {"x", "y", "z"}:
        raise FormatError("PLY vertex element must declare float x, y, z properties")

    data_lines = [ln for ln in lines[header_end:] if ln.strip()]
    if len(data_lines) < vertex_count:
        raise TruncatedFileError(
            f"header declares {vertex_count} vertices but file has {len(data_lines)}"
        )

    points: list[tuple[Vec3, tuple[int, int, int]]] = []
    for k in range(vertex_count):
        fields = data_lines[k].split()
        try:
            pos = Vec3(
                float(fields[xyz_index["x"]]),
                float(fields[xyz_index["y"]]),
                float(fields[xyz_index["z"]]),
            )
            if len(rgb_index) == 3:
                color = tuple(int(fields[rgb_index[ch]]) for ch in (0, 1, 2))
            else:
                color = (255, 255, 255)
        except (IndexError, ValueError) as exc:
            raise FormatError(f"bad vertex row: {exc}", line=header_end + 1 + k) from None
        if not pos.is_finite():
            raise FormatError("vertex position must be finite", line=header_end + 1 + k)
        points.append((pos, color))  # type: ignore[arg-type]
    return PointCloud(tuple(points))
