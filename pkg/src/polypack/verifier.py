"""Exact solution verification with a quad-tree broad phase.

The quad tree stores translated item bounding boxes and only pairs whose box
interiors overlap are handed to the exact polygon predicate.  Because a
polygon's open interior is strictly inside its bounding box, two placements
whose boxes merely touch can never conflict, so the tree's candidate set is a
true superset of the overlapping pairs and nothing is missed.

Checks run in a fixed order (indices, containment, pairwise overlap) and the
first violation in deterministic scan order is reported; a valid solution's
packed value is the exact sum of its item values.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .geom import contained_in_convex, interiors_overlap
from .model import Instance, Solution

LEAF_CAPACITY = 16
MAX_DEPTH = 20

Box = tuple[int, int, int, int]  # minx, miny, maxx, maxy


def boxes_interior_overlap(a: Box, b: Box) -> bool:
    return a[0] < b[2] and b[0] < a[2] and a[1] < b[3] and b[1] < a[3]


class _Node:
    __slots__ = ("region", "depth", "entries", "children")

    def __init__(self, region: Box, depth: int):
        self.region = region
        self.depth = depth
        self.entries: list[tuple[int, Box]] = []
        self.children: Optional[list["_Node"]] = None

    def _split(self):
        minx, miny, maxx, maxy = self.region
        mx, my = (minx + maxx) // 2, (miny + maxy) // 2
        if mx == minx or my == miny:
            return False
        d = self.depth + 1
        self.children = [
            _Node((minx, miny, mx, my), d),
            _Node((mx, miny, maxx, my), d),
            _Node((minx, my, mx, maxy), d),
            _Node((mx, my, maxx, maxy), d),
        ]
        old = self.entries
        self.entries = []
        for ent in old:
            for child in self.children:
                if boxes_interior_overlap(ent[1], child.region):
                    child.insert(ent)
        return True

    def insert(self, ent: tuple[int, Box]):
        if self.children is None:
            self.entries.append(ent)
            if len(self.entries) > LEAF_CAPACITY and self.depth < MAX_DEPTH:
                self._split()
            return
        for child in self.children:
            if boxes_interior_overlap(ent[1], child.region):
                child.insert(ent)

    def remove(self, ent: tuple[int, Box]):
        if self.children is None:
            try:
                self.entries.remove(ent)
            except ValueError:
                pass
            return
        for child in self.children:
            if boxes_interior_overlap(ent[1], child.region):
                child.remove(ent)

    def query(self, box: Box, out: set):
        if self.children is None:
            for ident, b in self.entries:
                if boxes_interior_overlap(b, box):
                    out.add(ident)
            return
        for child in self.children:
            if boxes_interior_overlap(box, child.region):
                child.query(box, out)

    def leaves(self):
        if self.children is None:
            yield self.entries
        else:
            for child in self.children:
                yield from child.leaves()


class QuadTree:
    """Midpoint quad tree over integer boxes; entries may live in several
    leaves, queries deduplicate by entry id."""

    def __init__(self, bounds: Box):
        minx, miny, maxx, maxy = bounds
        # guard against degenerate bounds so splitting is always meaningful
        self._root = _Node((minx, miny, max(maxx, minx + 1), max(maxy, miny + 1)), 0)
        self._outside: list[tuple[int, Box]] = []

    def insert(self, ident: int, box: Box) -> None:
        if boxes_interior_overlap(box, self._root.region):
            self._root.insert((ident, box))
        else:
            self._outside.append((ident, box))

    def remove(self, ident: int, box: Box) -> None:
        if boxes_interior_overlap(box, self._root.region):
            self._root.remove((ident, box))
        elif (ident, box) in self._outside:
            self._outside.remove((ident, box))

    def query(self, box: Box) -> set[int]:
        """Ids of all stored boxes whose interiors overlap `box` (superset)."""
        out: set[int] = set()
        self._root.query(box, out)
        for ident, b in self._outside:
            if boxes_interior_overlap(b, box):
                out.add(ident)
        return out

    def candidate_pairs(self) -> list[tuple[int, int]]:
        """Sorted id pairs whose box interiors overlap; no false negatives."""
        pairs: set[tuple[int, int]] = set()
        buckets = list(self._root.leaves())
        if self._outside:
            buckets.append(self._outside)
            # outside entries never co-locate with tree entries; compare directly
            inside = [e for leaf in self._root.leaves() for e in leaf]
            for io, bo in self._outside:
                for ii, bi in inside:
                    if boxes_interior_overlap(bo, bi):
                        pairs.add((min(io, ii), max(io, ii)))
        for leaf in buckets:
            n = len(leaf)
            for i in range(n):
                ia, ba = leaf[i]
                for j in range(i + 1, n):
                    ib, bb = leaf[j]
                    if ia != ib and boxes_interior_overlap(ba, bb):
                        pairs.add((min(ia, ib), max(ia, ib)))
        return sorted(pairs)


class ViolationKind(enum.Enum):
    DUPLICATE_ITEM = "DuplicateItem"
    INDEX_OUT_OF_RANGE = "IndexOutOfRange"
    NOT_CONTAINED = "NotContained"
    OVERLAP = "Overlap"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    item_indices: tuple[int, ...]


@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    packed_value: int
    violation: Optional[Violation] = None

    def to_json_obj(self, instance_name: str = "") -> dict:
        obj = {
            "type": "cgshop2024_verification",
            "instance_name": instance_name,
            "valid": self.valid,
            "packed_value": self.packed_value,
            "violation": None,
        }
        if self.violation is not None:
            obj["violation"] = {
                "kind": self.violation.kind.value,
                "item_indices": list(self.violation.item_indices),
            }
        return obj


class InstanceMismatch(ValueError):
    """Solution names a different instance."""


def placement_box(instance: Instance, item_index: int, offset) -> Box:
    b = instance.items[item_index].polygon.bbox
    dx, dy = offset
    return (b[0] + dx, b[1] + dy, b[2] + dx, b[3] + dy)


def build_index(instance: Instance, solution: Solution) -> QuadTree:
    """Quad tree over the translated item bounding boxes, keyed by placement
    position within the solution."""
    bounds = list(instance.container.bbox)
    boxes = []
    for pos, pl in enumerate(solution.placements):
        box = placement_box(instance, pl.item_index, pl.offset)
        boxes.append((pos, box))
        bounds[0] = min(bounds[0], box[0])
        bounds[1] = min(bounds[1], box[1])
        bounds[2] = max(bounds[2], box[2])
        bounds[3] = max(bounds[3], box[3])
    tree = QuadTree(tuple(bounds))
    for pos, box in boxes:
        tree.insert(pos, box)
    return tree


def verify(instance: Instance, solution: Solution) -> VerifyReport:
    """Check index validity, containment and pairwise interior disjointness.

    Returns the first violation found in deterministic order; a valid report
    carries the exact packed value.
    """
    if solution.instance_name != instance.name:
        raise InstanceMismatch(
            f"solution is for {solution.instance_name!r}, not {instance.name!r}")
    n = instance.n_items
    seen: set[int] = set()
    for pl in solution.placements:
        if not 0 <= pl.item_index < n:
            return VerifyReport(False, 0, Violation(
                ViolationKind.INDEX_OUT_OF_RANGE, (pl.item_index,)))
        if pl.item_index in seen:
            return VerifyReport(False, 0, Violation(
                ViolationKind.DUPLICATE_ITEM, (pl.item_index,)))
        seen.add(pl.item_index)
    container = instance.container
    for pl in solution.placements:
        if not contained_in_convex(container, instance.items[pl.item_index].polygon,
                                   pl.offset):
            return VerifyReport(False, 0, Violation(
                ViolationKind.NOT_CONTAINED, (pl.item_index,)))
    tree = build_index(instance, solution)
    placements = solution.placements
    for pa, pb in tree.candidate_pairs():
        a, b = placements[pa], placements[pb]
        if interiors_overlap(instance.items[a.item_index].polygon, a.offset,
                             instance.items[b.item_index].polygon, b.offset):
            return VerifyReport(False, 0, Violation(
                ViolationKind.OVERLAP, (a.item_index, b.item_index)))
    packed = sum(instance.items[pl.item_index].value for pl in placements)
    return VerifyReport(True, packed, None)
