"""Exact geometric primitives on integer-coordinate polygons.

Every decision (simplicity, convexity, containment, interior overlap) is made
with integer or rational arithmetic only; Python's arbitrary-precision ints
mean cross products never overflow.  Areas are returned as `Fraction` so the
shoelace half is kept exact.

Interior-overlap semantics: two placements conflict only if their *open*
interiors intersect.  Touching boundaries (shared edges or vertices) is legal,
which is what lets cut-up container pieces be reassembled exactly.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class GeometryError(ValueError):
    pass


class AllCollinear(GeometryError):
    """Raised when a point set has no 2D extent (no hull exists)."""


@dataclass(frozen=True)
class Point:
    x: int
    y: int

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __iter__(self):
        return iter((self.x, self.y))


Coord = tuple[int, int]


def round_nearest(q: Fraction) -> int:
    """Round to the nearest integer, ties toward +infinity."""
    return (2 * q.numerator + q.denominator) // (2 * q.denominator)


def _coords(poly) -> tuple[Coord, ...]:
    """Accept a Polygon or any sequence of Point / (x, y) pairs.

    Coordinates must be integral; operator.index raises on floats rather
    than silently truncating.
    """
    if isinstance(poly, Polygon):
        return poly.coords
    return tuple((p.x, p.y) if isinstance(p, Point)
                 else (operator.index(p[0]), operator.index(p[1]))
                 for p in poly)


def cross(o: Coord, a: Coord, b: Coord) -> int:
    """Signed parallelogram area of (a-o) x (b-o): >0 means b left of o->a."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def signed_area2(poly) -> int:
    """Twice the signed shoelace area; positive iff counterclockwise."""
    pts = _coords(poly)
    total = 0
    x0, y0 = pts[-1]
    for x1, y1 in pts:
        total += x0 * y1 - x1 * y0
        x0, y0 = x1, y1
    return total


def signed_area(poly) -> Fraction:
    return Fraction(signed_area2(poly), 2)


def _on_segment(p: Coord, q: Coord, r: Coord) -> bool:
    # q collinear with p-r assumed; is q within the bounding span?
    return (min(p[0], r[0]) <= q[0] <= max(p[0], r[0])
            and min(p[1], r[1]) <= q[1] <= max(p[1], r[1]))


def segments_intersect(p1: Coord, p2: Coord, q1: Coord, q2: Coord) -> bool:
    """True iff closed segments share at least one point (touching counts)."""
    d1 = cross(q1, q2, p1)
    d2 = cross(q1, q2, p2)
    d3 = cross(p1, p2, q1)
    d4 = cross(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0) or d1 == 0 or d2 == 0) and \
       ((d3 > 0) != (d4 > 0) or d3 == 0 or d4 == 0):
        # Sign pattern permits intersection; settle collinear/touching cases.
        if d1 == 0 and _on_segment(q1, p1, q2):
            return True
        if d2 == 0 and _on_segment(q1, p2, q2):
            return True
        if d3 == 0 and _on_segment(p1, q1, p2):
            return True
        if d4 == 0 and _on_segment(p1, q2, p2):
            return True
        return d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0
    return False


def is_simple(poly) -> bool:
    """No repeated vertices, no zero-length edges, and non-adjacent edges
    never meet; adjacent edges meet only at their shared endpoint."""
    pts = _coords(poly)
    n = len(pts)
    if n < 3:
        return False
    if len(set(pts)) != n:
        return False
    for i in range(n):
        a1, a2 = pts[i], pts[(i + 1) % n]
        # Adjacent pair: reject spikes (next edge folding back over this one).
        b1, b2 = pts[(i + 1) % n], pts[(i + 2) % n]
        if cross(a1, a2, b2) == 0:
            dx1, dy1 = a1[0] - b1[0], a1[1] - b1[1]
            dx2, dy2 = b2[0] - b1[0], b2[1] - b1[1]
            if dx1 * dx2 + dy1 * dy2 > 0:
                return False
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # adjacent around the wrap
            if segments_intersect(a1, a2, pts[j], pts[(j + 1) % n]):
                return False
    return True


def is_convex(poly) -> bool:
    """Every consecutive triple turns left or goes straight (CCW input)."""
    pts = _coords(poly)
    n = len(pts)
    for i in range(n):
        if cross(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]) < 0:
            return False
    return True


def ensure_ccw(points: Sequence) -> list[Coord]:
    pts = list(_coords(points))
    if signed_area2(pts) < 0:
        pts.reverse()
    return pts


class Polygon:
    """Immutable simple polygon, counterclockwise, integer vertices.

    Construction validates the full invariant (simplicity, positive area), so
    holding a Polygon is proof the shape is usable; predicates never
    re-validate.  Derived data (bounding box, triangulation) is cached.
    """

    __slots__ = ("coords", "_area2", "_bbox", "_convex", "_triangles")

    def __init__(self, vertices: Iterable):
        pts = _coords(vertices)
        if len(pts) < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        a2 = signed_area2(pts)
        if a2 <= 0:
            raise GeometryError("polygon must be counterclockwise with positive area")
        if not is_simple(pts):
            raise GeometryError("polygon is not simple")
        self.coords = pts
        self._area2 = a2
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        self._bbox = (min(xs), min(ys), max(xs), max(ys))
        self._convex = None
        self._triangles = None

    @property
    def vertices(self) -> tuple[Point, ...]:
        return tuple(Point(x, y) for x, y in self.coords)

    @property
    def bbox(self) -> tuple[int, int, int, int]:
        return self._bbox

    @property
    def area2(self) -> int:
        return self._area2

    @property
    def area(self) -> Fraction:
        return Fraction(self._area2, 2)

    @property
    def convex(self) -> bool:
        if self._convex is None:
            self._convex = is_convex(self.coords)
        return self._convex

    @property
    def triangles(self) -> tuple[tuple[Coord, Coord, Coord], ...]:
        if self._triangles is None:
            self._triangles = tuple(triangulate(self.coords))
        return self._triangles

    def translated_coords(self, dx: int, dy: int) -> tuple[Coord, ...]:
        return tuple((x + dx, y + dy) for x, y in self.coords)

    def __eq__(self, other):
        return isinstance(other, Polygon) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"Polygon({len(self.coords)} vertices, area={self.area})"


def convex_hull(points: Iterable) -> Polygon:
    """Strict counterclockwise hull (collinear boundary points dropped)."""
    pts = sorted(set(_coords(points)))
    if len(pts) < 3:
        raise AllCollinear("need at least 3 distinct points")
    lower: list[Coord] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Coord] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise AllCollinear("all points collinear")
    return Polygon(hull)


def _min_rect(pts: Sequence[Coord]) -> tuple[Fraction, Fraction]:
    """(area, aspect>=1) of the minimum-area enclosing rectangle.

    One candidate orientation per hull edge; extents along and across the
    edge direction are exact, and the squared edge length cancels out of
    the area ratio so everything stays rational.
    """
    hull = convex_hull(pts).coords
    h = len(hull)
    best_area = None
    best_aspect = None
    for i in range(h):
        ax, ay = hull[i]
        bx, by = hull[(i + 1) % h]
        dx, dy = bx - ax, by - ay
        us = [dx * (x - ax) + dy * (y - ay) for x, y in hull]
        ws = [dx * (y - ay) - dy * (x - ax) for x, y in hull]
        du = max(us) - min(us)
        dw = max(ws) - min(ws)
        area = Fraction(du * dw, dx * dx + dy * dy)
        if best_area is None or area < best_area:
            best_area = area
            best_aspect = Fraction(du, dw) if du >= dw else Fraction(dw, du)
    return best_area, best_aspect


def min_area_bounding_rect(poly) -> Fraction:
    """Area of the smallest enclosing rectangle over all orientations."""
    return _min_rect(_coords(poly))[0]


def _point_in_closed_triangle(p: Coord, a: Coord, b: Coord, c: Coord) -> bool:
    return cross(a, b, p) >= 0 and cross(b, c, p) >= 0 and cross(c, a, p) >= 0


def triangulate(poly) -> list[tuple[Coord, Coord, Coord]]:
    """Ear-clip a simple CCW polygon into n-2 CCW triangles.

    An ear is accepted only if no other remaining vertex lies in the closed
    candidate triangle, which is exactly diagonal validity for simple
    polygons; straight (collinear) vertices are dropped as they carry no
    area.  Meisters' two-ears theorem guarantees progress.
    """
    work = list(_coords(poly))
    triangles: list[tuple[Coord, Coord, Coord]] = []
    while len(work) > 3:
        n = len(work)
        straight = None
        for i in range(n):
            if cross(work[i - 1], work[i], work[(i + 1) % n]) == 0:
                straight = i
                break
        if straight is not None:
            del work[straight]
            continue
        clipped = False
        for i in range(n):
            a, b, c = work[i - 1], work[i], work[(i + 1) % n]
            if cross(a, b, c) <= 0:
                continue
            if any(_point_in_closed_triangle(p, a, b, c)
                   for j, p in enumerate(work)
                   if j not in (i - 1 if i else n - 1, i, (i + 1) % n)):
                continue
            triangles.append((a, b, c))
            del work[i]
            clipped = True
            break
        if not clipped:
            raise GeometryError("ear clipping stalled; polygon not simple?")
    if cross(work[0], work[1], work[2]) > 0:
        triangles.append(tuple(work))
    return triangles


def _bbox_interiors_overlap(b1, b2) -> bool:
    return (b1[0] < b2[2] and b2[0] < b1[2]
            and b1[1] < b2[3] and b2[1] < b1[3])


def _separated_by_edge_of(pa: Sequence[Coord], pb: Sequence[Coord],
                          dx: int, dy: int) -> bool:
    # pb is shifted by (dx, dy).  CCW pa keeps its interior left of each
    # edge; an edge separates if every pb vertex sits right-of-or-on it.
    n = len(pa)
    ax, ay = pa[-1]
    for bx, by in pa:
        ex, ey = bx - ax, by - ay
        for qx, qy in pb:
            if ex * (qy + dy - ay) - ey * (qx + dx - ax) > 0:
                break
        else:
            return True
        ax, ay = bx, by
    return False


def _convex_open_overlap(pa: Sequence[Coord], pb: Sequence[Coord],
                         dx: int, dy: int) -> bool:
    """Open interiors of two convex CCW polygons intersect (pb offset by d).

    Separating-axis over the edge lines of both polygons; allowing contact
    on the axis makes this the open-interior test.
    """
    if _separated_by_edge_of(pa, pb, dx, dy):
        return False
    if _separated_by_edge_of(pb, pa, -dx, -dy):
        return False
    return True


def _tri_bboxes(tris):
    out = []
    for t in tris:
        xs = (t[0][0], t[1][0], t[2][0])
        ys = (t[0][1], t[1][1], t[2][1])
        out.append((min(xs), min(ys), max(xs), max(ys)))
    return out


def interiors_overlap(a: Polygon, ta, b: Polygon, tb) -> bool:
    """True iff the open interiors of the translated polygons intersect.

    Boundary contact is not overlap.  Nonconvex shapes are handled through
    their cached triangulations: interiors meet iff some triangle pair's
    interiors meet, and each triangle pair is decided by exact SAT.
    """
    tax, tay = int(ta[0]), int(ta[1])
    tbx, tby = int(tb[0]), int(tb[1])
    dx, dy = tbx - tax, tby - tay  # work in a's frame
    ab = a.bbox
    bb = b.bbox
    if not _bbox_interiors_overlap(ab, (bb[0] + dx, bb[1] + dy, bb[2] + dx, bb[3] + dy)):
        return False
    if a.convex and b.convex:
        return _convex_open_overlap(a.coords, b.coords, dx, dy)
    tris_a = ((a.coords,) if a.convex else a.triangles)
    tris_b = ((b.coords,) if b.convex else b.triangles)
    boxes_a = _tri_bboxes(tris_a) if len(tris_a) > 1 else [ab]
    boxes_b = _tri_bboxes(tris_b) if len(tris_b) > 1 else [bb]
    for ia, pa in enumerate(tris_a):
        bxa = boxes_a[ia]
        for ib, pb in enumerate(tris_b):
            bxb = boxes_b[ib]
            if not _bbox_interiors_overlap(bxa, (bxb[0] + dx, bxb[1] + dy,
                                                 bxb[2] + dx, bxb[3] + dy)):
                continue
            if _convex_open_overlap(pa, pb, dx, dy):
                return True
    return False


def point_in_convex(container: Sequence[Coord], x: int, y: int) -> bool:
    """Inside-or-on test against a convex CCW polygon."""
    n = len(container)
    ax, ay = container[-1]
    for bx, by in container:
        if (bx - ax) * (y - ay) - (by - ay) * (x - ax) < 0:
            return False
        ax, ay = bx, by
    return True


def contained_in_convex(container: Polygon, item: Polygon, t) -> bool:
    """All translated item vertices inside-or-on the convex container.

    Vertex membership suffices because the container is convex.
    """
    tx, ty = int(t[0]), int(t[1])
    cpts = container.coords
    n = len(cpts)
    for x, y in item.coords:
        px, py = x + tx, y + ty
        ax, ay = cpts[-1]
        for bx, by in cpts:
            if (bx - ax) * (py - ay) - (by - ay) * (px - ax) < 0:
                return False
            ax, ay = bx, by
    return True
