"""Reading and writing point configurations (JSON and CSV)."""
from __future__ import annotations

import csv
import json
from pathlib import Path

from .geometry import PointConfig


class ConfigFormatError(ValueError):
    pass


def _coord(value):
    # JSON floats arrive as strings (parse_float=str) so decimals stay exact
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ConfigFormatError(f"bad coordinate {value!r}")
    return value


def parse_json(text: str, exact: bool | None = None) -> PointConfig:
    try:
        data = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ConfigFormatError(f"invalid JSON: {exc}") from exc
    if isinstance(data, list):
        data = {"points": data}
    if not isinstance(data, dict) or "points" not in data:
        raise ConfigFormatError('expected an object {"m": int, "points": [[...], ...]}')
    points = data["points"]
    if not isinstance(points, list) or not points or not all(isinstance(p, list) for p in points):
        raise ConfigFormatError("'points' must be a non-empty list of coordinate lists")
    m = data.get("m", len(points[0]))
    if any(len(p) != m for p in points):
        raise ConfigFormatError(f"every point must have m = {m} coordinates")
    try:
        return PointConfig.from_points([[_coord(c) for c in p] for p in points], exact=exact)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigFormatError(str(exc)) from exc


def parse_csv(text: str, exact: bool | None = None) -> PointConfig:
    rows = [r for r in csv.reader(text.splitlines()) if r and any(c.strip() for c in r)]
    if rows and not _numeric(rows[0]):
        rows = rows[1:]  # header
    if not rows:
        raise ConfigFormatError("no points in CSV input")
    m = len(rows[0])
    if any(len(r) != m for r in rows):
        raise ConfigFormatError("every CSV row must have the same number of columns")
    try:
        return PointConfig.from_points([[c.strip() for c in r] for r in rows], exact=exact)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigFormatError(str(exc)) from exc


def _numeric(row) -> bool:
    try:
        for c in row:
            float(c)
    except ValueError:
        return False
    return True


def load_config(path, exact: bool | None = None) -> PointConfig:
    """Load by extension: ``.json`` or ``.csv`` (anything else is tried as JSON)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigFormatError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".csv":
        return parse_csv(text, exact)
    return parse_json(text, exact)


def dump_json(P: PointConfig) -> str:
    pts = [[str(c) if P.exact else float(c) for c in row] for row in P.coords.tolist()]
    return json.dumps({"m": P.m, "points": pts})
