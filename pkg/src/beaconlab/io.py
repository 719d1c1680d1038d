"""Plain-text polygon format.

Lines starting with # (or trailing # fragments) are comments. The first
data line holds the vertex count n, the next n lines hold "x y" pairs in
CCW order. Any further data lines are named extras in the form
"NAME x y", e.g. the start point "P 1.5 0.25".

Coordinates are written with repr-faithful precision (%.17g) so that
parse(emit(P)) reproduces the exact same floats.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .geom import Point2, Tolerance
from .polygon import SimplePolygon


def _data_lines(text: str) -> List[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _parse_point(fields: List[str], where: str) -> Point2:
    if len(fields) != 2:
        raise ValueError(f"expected two coordinates {where}, got {fields!r}")
    try:
        return (float(fields[0]), float(fields[1]))
    except ValueError as exc:
        raise ValueError(f"bad coordinate {where}: {exc}") from exc


def parse_instance(text: str, tol: Optional[Tolerance] = None
                   ) -> Tuple[SimplePolygon, Dict[str, Point2]]:
    """Parse a polygon plus any named extra points."""
    lines = _data_lines(text)
    if not lines:
        raise ValueError("empty polygon file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ValueError(f"first data line must be the vertex count: {exc}") \
            from exc
    if len(lines) < 1 + n:
        raise ValueError(f"expected {n} vertex lines, found {len(lines) - 1}")
    verts = [_parse_point(lines[1 + i].split(), f"on vertex line {i}")
             for i in range(n)]
    extras: Dict[str, Point2] = {}
    for line in lines[1 + n:]:
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"malformed extra line {line!r}")
        name = fields[0]
        if name in extras:
            raise ValueError(f"duplicate extra point {name!r}")
        extras[name] = _parse_point(fields[1:], f"for extra {name!r}")
    return SimplePolygon(verts, tol=tol), extras


def parse(text: str, tol: Optional[Tolerance] = None) -> SimplePolygon:
    """Parse a polygon, ignoring any extra points."""
    return parse_instance(text, tol=tol)[0]


def fmt(x: float) -> str:
    return "%.17g" % float(x)


def emit(polygon: SimplePolygon,
         extras: Optional[Mapping[str, Point2]] = None,
         comments: Iterable[str] = ()) -> str:
    """Serialize a polygon (and extras) in the plain-text format."""
    out = [f"# {c}" for c in comments]
    out.append(str(polygon.n))
    out.extend(f"{fmt(x)} {fmt(y)}" for x, y in polygon.vertices)
    if extras:
        out.extend(f"{name} {fmt(p[0])} {fmt(p[1])}"
                   for name, p in extras.items())
    return "\n".join(out) + "\n"
