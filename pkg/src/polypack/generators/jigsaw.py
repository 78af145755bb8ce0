"""Jigsaw instances: cut a rectangular container into convex faces with
random lines, merge random adjacent faces into more complex pieces, then
nudge vertices to hinder trivial reassembly.

Exactness is the point of this family: every cut chord runs between lattice
points that lie exactly on face boundaries, so at all times the faces
partition the container with integer coordinates and exactly summing areas.
A cutting line is realized per crossed face as the chord between the two
boundary contact points snapped to their nearest lattice points on the
crossed edges; the snapped chord still splits the face into two convex
integer pieces, so the tiling invariant survives every cut.  With
perturbation disabled the identity placement of one copy reassembles the
container bit for bit.
"""
from __future__ import annotations

import math
from fractions import Fraction

from ..geom import Polygon, cross, is_simple, round_nearest, signed_area2
from ..model import Instance, Item
from ..rng import Rng
from ..valuation import ValueSpec, assign_values
from .config import (STREAM_LINES, STREAM_MERGE, STREAM_PERTURB,
                     STREAM_VALUES, GenConfig, GenerationFailed)

Coord = tuple[int, int]

MIN_PIECE_AREA_FRACTION = Fraction(1, 500)  # reject merges below 0.2% of container
MAX_PIECE_AREA_FRACTION = Fraction(1, 5)
MAX_PIECE_ASPECT = 25
LINE_RETRIES = 50
PERTURB_RETRIES = 20


def _boundary_point(rng: Rng, width: int, height: int) -> Coord:
    side = rng.below(4)
    if side == 0:
        return (rng.in_range(0, width), 0)
    if side == 1:
        return (width, rng.in_range(0, height))
    if side == 2:
        return (rng.in_range(0, width), height)
    return (0, rng.in_range(0, height))


def _cut_line(rng: Rng, width: int, height: int) -> tuple[Coord, Coord]:
    for _ in range(LINE_RETRIES):
        p1 = _boundary_point(rng, width, height)
        p2 = _boundary_point(rng, width, height)
        if p1 == p2:
            continue
        if p1[0] == p2[0] and p1[0] in (0, width):
            continue  # collinear with a vertical side
        if p1[1] == p2[1] and p1[1] in (0, height):
            continue
        return p1, p2
    raise GenerationFailed("could not draw a usable cutting line")


def _midpoint_strictly_inside(pts, a: Coord, b: Coord) -> bool:
    # doubled coordinates keep the midpoint integral
    mx, my = a[0] + b[0], a[1] + b[1]
    n = len(pts)
    for i in range(n):
        (x1, y1), (x2, y2) = pts[i], pts[(i + 1) % n]
        if (2 * x2 - 2 * x1) * (my - 2 * y1) - (2 * y2 - 2 * y1) * (mx - 2 * x1) <= 0:
            return False
    return True


def _split_face(pts, p1: Coord, p2: Coord):
    """Split a convex CCW face by the lattice chord approximating line
    (p1, p2); returns two pieces or None when the line misses the face or
    snapping degenerates the cut."""
    n = len(pts)
    crs = [cross(p1, p2, v) for v in pts]
    if not (any(c > 0 for c in crs) and any(c < 0 for c in crs)):
        return None
    aug: list[Coord] = []
    contacts: list[Coord] = []
    for i, v in enumerate(pts):
        aug.append(v)
        if crs[i] == 0:
            contacts.append(v)
        ci, cj = crs[i], crs[(i + 1) % n]
        if ci != 0 and cj != 0 and (ci > 0) != (cj > 0):
            w = pts[(i + 1) % n]
            dx, dy = w[0] - v[0], w[1] - v[1]
            g = math.gcd(abs(dx), abs(dy))
            k = min(max(round_nearest(Fraction(ci, ci - cj) * g), 0), g)
            q = (v[0] + k * (dx // g), v[1] + k * (dy // g))
            if q == v or q == w:
                contacts.append(q)
            else:
                aug.append(q)
                contacts.append(q)
    contacts = sorted(set(contacts))
    if len(contacts) != 2:
        return None
    a, b = contacts
    if not _midpoint_strictly_inside(pts, a, b):
        return None
    ia, ib = aug.index(a), aug.index(b)
    if ia > ib:
        ia, ib = ib, ia
    piece1 = aug[ia:ib + 1]
    piece2 = aug[ib:] + aug[:ia + 1]
    if len(piece1) < 3 or len(piece2) < 3:
        return None
    if signed_area2(piece1) <= 0 or signed_area2(piece2) <= 0:
        return None
    return piece1, piece2


def _drop_straight(pts):
    out = list(pts)
    changed = True
    while changed and len(out) > 3:
        changed = False
        for i in range(len(out)):
            if cross(out[i - 1], out[i], out[(i + 1) % len(out)]) == 0:
                del out[i]
                changed = True
                break
    return out


def _edge_overlap(a: Coord, b: Coord, c: Coord, d: Coord):
    """Positive-length overlap of collinear edges (a,b) and (c,d), or None."""
    if cross(a, b, c) != 0 or cross(a, b, d) != 0:
        return None
    axis = 0 if abs(b[0] - a[0]) >= abs(b[1] - a[1]) else 1
    pts = {p[axis]: p for p in (a, b, c, d)}
    lo = max(min(a[axis], b[axis]), min(c[axis], d[axis]))
    hi = min(max(a[axis], b[axis]), max(c[axis], d[axis]))
    if lo >= hi:
        return None
    return pts[lo], pts[hi], axis


def _shared_boundary(f, g):
    """Maximal shared segment of two interior-disjoint convex faces."""
    best = None
    nf, ng = len(f), len(g)
    for i in range(nf):
        a, b = f[i], f[(i + 1) % nf]
        for j in range(ng):
            ov = _edge_overlap(a, b, g[j], g[(j + 1) % ng])
            if ov is None:
                continue
            p, q, axis = ov
            if best is None:
                best = (p, q, axis)
            else:
                bp, bq, axis = best
                lo = min((bp, bq, p, q), key=lambda t: t[axis])
                hi = max((bp, bq, p, q), key=lambda t: t[axis])
                best = (lo, hi, axis)
    if best is None:
        return None
    return best[0], best[1]


def _insert_on_boundary(pts, p: Coord):
    if p in pts:
        return list(pts)
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if cross(a, b, p) == 0 and \
           min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and \
           min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
            return pts[:i + 1] + [p] + pts[i + 1:]
    raise GenerationFailed("shared point not on face boundary")


def _on_segment(p: Coord, q: Coord, v: Coord) -> bool:
    if cross(p, q, v) != 0:
        return False
    return min(p[0], q[0]) <= v[0] <= max(p[0], q[0]) and \
        min(p[1], q[1]) <= v[1] <= max(p[1], q[1])


def _path_keeping_outer(pts, p: Coord, q: Coord):
    """Boundary path that avoids the shared segment, as an endpoint-to-
    endpoint vertex list (start and end are p/q in some order)."""
    cyc = _insert_on_boundary(pts, p)
    cyc = _insert_on_boundary(cyc, q)
    n = len(cyc)
    ip = cyc.index(p)
    # walk forward from p while staying on [p, q]; if that reaches q the
    # forward arc is the shared side and the kept path runs q -> ... -> p
    k = ip
    on_shared = True
    while True:
        k = (k + 1) % n
        if cyc[k] == q:
            break
        if not _on_segment(p, q, cyc[k]):
            on_shared = False
            break
    if on_shared:
        start = cyc.index(q)
        end = ip
    else:
        start = ip
        end = cyc.index(q)
    path = []
    k = start
    while True:
        path.append(cyc[k])
        if k == end:
            break
        k = (k + 1) % n
    return path


def _merge_faces(f, g):
    """Union of two edge-adjacent convex faces, or None when not adjacent."""
    seg = _shared_boundary(f, g)
    if seg is None:
        return None
    p, q = seg
    path_f = _path_keeping_outer(f, p, q)
    path_g = _path_keeping_outer(g, p, q)
    if path_f[-1] != path_g[0]:
        path_g.reverse()  # both paths traverse CCW; endpoints must chain
    if path_f[-1] != path_g[0] or path_f[0] != path_g[-1]:
        return None
    merged = _drop_straight(path_f + path_g[1:-1])
    if len(merged) < 3 or signed_area2(merged) != signed_area2(f) + signed_area2(g):
        return None
    if not is_simple(merged):
        return None
    return merged


def _bbox(pts):
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    return min(xs), min(ys), max(xs), max(ys)


def _merge_phase(faces, cfg: GenConfig, rng: Rng, container_area2: int):
    order = list(range(len(faces)))
    rng.shuffle(order)
    used = [False] * len(faces)
    merged_out = []
    boxes = [_bbox(f) for f in faces]
    min_area2 = MIN_PIECE_AREA_FRACTION * container_area2
    max_area2 = MAX_PIECE_AREA_FRACTION * container_area2
    for idx in order:
        if used[idx] or not rng.chance(cfg.jigsaw_merge_fraction):
            continue
        bx = boxes[idx]
        partners = []
        for jdx in order:
            if jdx == idx or used[jdx]:
                continue
            bj = boxes[jdx]
            if bx[0] > bj[2] or bj[0] > bx[2] or bx[1] > bj[3] or bj[1] > bx[3]:
                continue
            partners.append(jdx)
        rng.shuffle(partners)
        for jdx in partners:
            merged = _merge_faces(faces[idx], faces[jdx])
            if merged is None:
                continue
            a2 = signed_area2(merged)
            if not min_area2 <= a2 <= max_area2:
                continue
            _, aspect = _min_rect_of(merged)
            if aspect > MAX_PIECE_ASPECT:
                continue
            used[idx] = used[jdx] = True
            merged_out.append(merged)
            break
    kept = [faces[i] for i in range(len(faces)) if not used[i]]
    return merged_out + kept


def _min_rect_of(pts):
    from ..geom import _min_rect
    return _min_rect(pts)


def _perturb(pts, rng: Rng, amplitude: int):
    for _ in range(PERTURB_RETRIES):
        cand = [(x + rng.in_range(-amplitude, amplitude),
                 y + rng.in_range(-amplitude, amplitude)) for x, y in pts]
        if signed_area2(cand) > 0 and is_simple(cand):
            return cand
    return list(pts)


def gen_jigsaw(cfg: GenConfig) -> Instance:
    width = cfg.container_width or 600
    height = cfg.container_height or 400
    container = Polygon([(0, 0), (width, 0), (width, height), (0, height)])
    pieces: list[tuple[list[Coord], Coord, int]] = []  # (points, origin, copy)

    for copy in range(cfg.jigsaw_copies):
        faces = [list(container.coords)]
        rng_lines = Rng(cfg.seed, stream=STREAM_LINES + copy)
        for _ in range(cfg.jigsaw_line_count):
            for _ in range(LINE_RETRIES):
                p1, p2 = _cut_line(rng_lines, width, height)
                new_faces = []
                cut_happened = False
                for f in faces:
                    split = _split_face(f, p1, p2)
                    if split is None:
                        new_faces.append(f)
                    else:
                        new_faces.extend(split)
                        cut_happened = True
                if cut_happened:
                    faces = new_faces
                    break
            else:
                raise GenerationFailed("arrangement degenerated; no line cuts any face")
        if sum(signed_area2(f) for f in faces) != container.area2:
            raise GenerationFailed("cutting broke the exact tiling invariant")

        rng_merge = Rng(cfg.seed, stream=STREAM_MERGE + copy)
        faces = _merge_phase(faces, cfg, rng_merge, container.area2)
        if sum(signed_area2(f) for f in faces) != container.area2:
            raise GenerationFailed("merging broke the exact tiling invariant")

        rng_pert = Rng(cfg.seed, stream=STREAM_PERTURB + copy)
        for f in faces:
            f = _drop_straight(f)
            if cfg.jigsaw_perturb_amplitude > 0:
                f = _perturb(f, rng_pert, cfg.jigsaw_perturb_amplitude)
            minx = min(x for x, _ in f)
            miny = min(y for _, y in f)
            pieces.append(([(x - minx, y - miny) for x, y in f], (minx, miny), copy))

    name = f"jigsaw_s{cfg.seed}_l{cfg.jigsaw_line_count}_c{cfg.jigsaw_copies}"
    meta: dict = {"generator": "jigsaw", "seed": cfg.seed,
                  "lines": cfg.jigsaw_line_count, "copies": cfg.jigsaw_copies}
    if cfg.jigsaw_perturb_amplitude == 0:
        # unperturbed pieces of the first copy reassemble the container
        first = [(i, org) for i, (_, org, cp) in enumerate(pieces) if cp == 0]
        meta["identity"] = {
            "item_indices": [i for i, _ in first],
            "x_translations": [org[0] for _, org in first],
            "y_translations": [org[1] for _, org in first],
        }
    items = tuple(Item(Polygon(pts), 1) for pts, _, _ in pieces)
    draft = Instance(name, container, items, meta)
    spec = ValueSpec(cfg.value_kind, cfg.value_noise,
                     seed=Rng(cfg.seed, stream=STREAM_VALUES).next_u64(),
                     global_scale=cfg.value_scale)
    return assign_values(draft, spec)
