"""Baseline packing solver: priority-driven greedy placement on a
coarse-to-fine integer grid, followed by local-search improvement.

Candidate offsets live on integer grids only, so every intermediate state is
exactly verifiable; the shared occupancy quad tree keeps feasibility checks
local.  The greedy pass prefers the lowest-then-leftmost feasible cell
(bottom-left heuristic) and refines the grid around the first hit.  Local
search applies value-positive moves only (insert, relocate+insert, swap,
depth-2 eject), so the packed value never decreases.

An item reported unplaced may still fit at some non-grid offset; the solver
never claims infeasibility, it only stops looking.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .geom import contained_in_convex, interiors_overlap
from .model import Instance, Placement, Solution
from .rng import Rng
from .verifier import QuadTree


class Ordering(enum.Enum):
    VALUE_DENSITY = "density"
    VALUE_DESC = "value"
    AREA_DESC = "area"


class PlacementMode(enum.Enum):
    GRID = "grid"
    SHELF = "shelf"


class Move(enum.Enum):
    INSERT = "insert"
    RELOCATE = "relocate"
    SWAP_PAIR = "swap"
    EJECT_CHAIN = "eject"


ALL_MOVES = frozenset(Move)


@dataclass(frozen=True)
class SolverConfig:
    ordering: Ordering = Ordering.VALUE_DENSITY
    grid_levels: int = 6
    time_budget: float = 60.0
    ls_moves: frozenset = ALL_MOVES
    seed: int = 0
    ls_max_no_improve: int = 15
    placement: PlacementMode = PlacementMode.GRID
    coarse_cells: int = 24  # coarse-grid resolution across the longer span

    def __post_init__(self):
        if self.time_budget <= 0:
            raise ValueError("time_budget must be positive")
        if self.grid_levels < 1:
            raise ValueError("grid_levels must be >= 1")
        object.__setattr__(self, "ls_moves", frozenset(self.ls_moves))


def _is_axis_rect(poly) -> bool:
    if len(poly.coords) != 4:
        return False
    b = poly.bbox
    corners = {(b[0], b[1]), (b[2], b[1]), (b[2], b[3]), (b[0], b[3])}
    return set(poly.coords) == corners


class PlacementState:
    """Current placements plus the occupancy index; mutations keep the state
    feasible, so a snapshot is always a valid solution."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.polys = [it.polygon for it in instance.items]
        self.values = [it.value for it in instance.items]
        self.bboxes = [p.bbox for p in self.polys]
        self.container = instance.container
        self.cbox = instance.container.bbox
        self.rect_container = _is_axis_rect(instance.container)
        self.tree = QuadTree(self.cbox)
        self.offsets: dict[int, tuple[int, int]] = {}
        self.value = 0
        self.free_area2 = instance.container.area2

    def _moved_box(self, idx: int, off):
        b = self.bboxes[idx]
        return (b[0] + off[0], b[1] + off[1], b[2] + off[0], b[3] + off[1])

    def can_place(self, idx: int, off) -> bool:
        box = self._moved_box(idx, off)
        cb = self.cbox
        if box[0] < cb[0] or box[1] < cb[1] or box[2] > cb[2] or box[3] > cb[3]:
            return False
        if not self.rect_container and \
                not contained_in_convex(self.container, self.polys[idx], off):
            return False
        poly = self.polys[idx]
        for other in self.tree.query(box):
            if interiors_overlap(poly, off, self.polys[other], self.offsets[other]):
                return False
        return True

    def place(self, idx: int, off) -> None:
        self.offsets[idx] = (off[0], off[1])
        self.tree.insert(idx, self._moved_box(idx, off))
        self.value += self.values[idx]
        self.free_area2 -= self.polys[idx].area2

    def remove(self, idx: int) -> None:
        off = self.offsets.pop(idx)
        self.tree.remove(idx, self._moved_box(idx, off))
        self.value -= self.values[idx]
        self.free_area2 += self.polys[idx].area2

    def unpacked(self) -> list[int]:
        return [i for i in range(len(self.polys)) if i not in self.offsets]

    def to_solution(self) -> Solution:
        placements = tuple(Placement(i, self.offsets[i])
                           for i in sorted(self.offsets))
        return Solution(self.instance.name, placements)


def priority_order(instance: Instance, ordering: Ordering) -> list[int]:
    items = instance.items

    def density(i):
        return Fraction(items[i].value * 2, items[i].polygon.area2)

    idx = list(range(len(items)))
    if ordering is Ordering.VALUE_DENSITY:
        idx.sort(key=lambda i: (-density(i), -items[i].value, i))
    elif ordering is Ordering.VALUE_DESC:
        idx.sort(key=lambda i: (-items[i].value, i))
    else:
        idx.sort(key=lambda i: (-items[i].polygon.area2, i))
    return idx


def _offset_range(state: PlacementState, idx: int):
    cb = state.cbox
    b = state.bboxes[idx]
    lox, hix = cb[0] - b[0], cb[2] - b[2]
    loy, hiy = cb[1] - b[1], cb[3] - b[3]
    if lox > hix or loy > hiy:
        return None
    return lox, hix, loy, hiy


def _scan_bottom_left(state, idx, lox, hix, loy, hiy, step):
    ty = loy
    while ty <= hiy:
        tx = lox
        while tx <= hix:
            if state.can_place(idx, (tx, ty)):
                return (tx, ty)
            tx += step
        ty += step
    return None


def find_offset(state: PlacementState, idx: int, grid_levels: int,
                coarse_cells: int) -> Optional[tuple[int, int]]:
    """Bottom-left feasible offset on a coarse grid, refined around the hit."""
    if state.polys[idx].area2 > state.free_area2:
        return None
    rng_range = _offset_range(state, idx)
    if rng_range is None:
        return None
    lox, hix, loy, hiy = rng_range
    span = max(hix - lox, hiy - loy)
    step = max(1, -(-span // coarse_cells))  # ceil division
    best = _scan_bottom_left(state, idx, lox, hix, loy, hiy, step)
    if best is None:
        return None
    for _ in range(grid_levels):
        if step == 1:
            break
        prev = step
        step = max(1, step // 2)
        cand = _scan_bottom_left(
            state, idx,
            max(lox, best[0] - prev), min(hix, best[0] + prev),
            max(loy, best[1] - prev), min(hiy, best[1] + prev), step)
        if cand is not None:
            best = cand
    return best


def _shelf_pack(state: PlacementState, deadline: float) -> None:
    """Next-fit decreasing-height shelves; packs any set of squares of total
    area at most half the container square."""
    if not state.rect_container:
        raise ValueError("shelf placement requires an axis-aligned rectangular container")
    cb = state.cbox
    width = cb[2] - cb[0]
    height = cb[3] - cb[1]
    order = sorted(range(len(state.polys)),
                   key=lambda i: (-(state.bboxes[i][3] - state.bboxes[i][1]),
                                  -(state.bboxes[i][2] - state.bboxes[i][0]), i))
    shelf_y = 0
    shelf_h = 0
    cursor = 0
    for idx in order:
        if time.monotonic() > deadline:
            break
        b = state.bboxes[idx]
        w, h = b[2] - b[0], b[3] - b[1]
        if shelf_h == 0:
            shelf_h = h
        if cursor + w > width:
            if shelf_y + shelf_h + h > height:
                continue  # no room for a new shelf; later items may still fit here
            shelf_y += shelf_h
            shelf_h = h
            cursor = 0
        if shelf_y + h > height or cursor + w > width:
            continue
        off = (cb[0] + cursor - b[0], cb[1] + shelf_y - b[1])
        if state.can_place(idx, off):
            state.place(idx, off)
            cursor += w
    return


def solve_greedy(instance: Instance, cfg: SolverConfig,
                 deadline: Optional[float] = None,
                 state: Optional[PlacementState] = None,
                 order: Optional[list[int]] = None) -> Solution:
    """Greedy sequential fill in priority order; output always verifies."""
    state = state or PlacementState(instance)
    deadline = deadline or time.monotonic() + cfg.time_budget
    if cfg.placement is PlacementMode.SHELF:
        _shelf_pack(state, deadline)
        return state.to_solution()
    order = order if order is not None else priority_order(instance, cfg.ordering)
    for idx in order:
        if time.monotonic() > deadline:
            break
        if idx in state.offsets:
            continue
        off = find_offset(state, idx, cfg.grid_levels, cfg.coarse_cells)
        if off is not None:
            state.place(idx, off)
    return state.to_solution()


def _state_from_solution(instance: Instance, solution: Solution) -> PlacementState:
    state = PlacementState(instance)
    for pl in solution.placements:
        if not 0 <= pl.item_index < len(state.polys) or \
                not state.can_place(pl.item_index, pl.offset):
            raise ValueError("starting solution does not verify")
        state.place(pl.item_index, pl.offset)
    return state


def _move_insert(state, cfg, failed_cache=None, limit=None):
    """Place the highest-value unpacked item that fits anywhere.

    failed_cache remembers items that found no offset since the last applied
    move, so quiet rounds cost almost nothing."""
    unpacked = sorted(state.unpacked(), key=lambda i: (-state.values[i], i))
    if limit is not None:
        unpacked = unpacked[:limit]
    for idx in unpacked:
        if failed_cache is not None and idx in failed_cache:
            continue
        off = find_offset(state, idx, cfg.grid_levels, cfg.coarse_cells * 2)
        if off is not None:
            state.place(idx, off)
            return state.values[idx]
        if failed_cache is not None:
            failed_cache.add(idx)
    return 0


def _move_relocate(state, cfg, rng):
    """Compact one placed item toward the bottom-left, then try an insert."""
    placed = sorted(state.offsets)
    if not placed:
        return 0
    idx = placed[rng.below(len(placed))]
    old = state.offsets[idx]
    state.remove(idx)
    new = find_offset(state, idx, cfg.grid_levels, cfg.coarse_cells * 2)
    if new is None or (new[1], new[0]) >= (old[1], old[0]):
        state.place(idx, old)
        return 0
    state.place(idx, new)
    gained = _move_insert(state, cfg, limit=10)
    if gained == 0:
        state.remove(idx)
        state.place(idx, old)
    return gained


def _move_swap(state, cfg, rng, depth=1):
    """Remove `depth` placed items, insert higher-value unpacked ones; revert
    unless the net change is positive."""
    if len(state.offsets) < depth:
        return 0
    removed = []
    for _ in range(depth):
        pool = [i for i in sorted(state.offsets) if i not in {r[0] for r in removed}]
        if not pool:
            break
        pick = pool[rng.below(len(pool))]
        removed.append((pick, state.offsets[pick]))
        state.remove(pick)
    removed_value = sum(state.values[i] for i, _ in removed)
    inserted = []
    budget = 4
    unpacked = sorted((i for i in state.unpacked()
                       if i not in {r[0] for r in removed}),
                      key=lambda i: (-state.values[i], i))
    for idx in unpacked[:8]:
        if budget == 0:
            break
        off = find_offset(state, idx, cfg.grid_levels, cfg.coarse_cells)
        if off is not None:
            state.place(idx, off)
            inserted.append(idx)
            budget -= 1
    # the ejected items may re-enter too
    for idx, _ in removed:
        off = find_offset(state, idx, cfg.grid_levels, cfg.coarse_cells)
        if off is not None:
            state.place(idx, off)
            inserted.append(idx)
    gain = sum(state.values[i] for i in inserted) - removed_value
    if gain > 0:
        return gain
    for idx in inserted:
        state.remove(idx)
    for idx, off in removed:
        state.place(idx, off)
    return 0


def improve_local(instance: Instance, start: Solution, cfg: SolverConfig,
                  deadline: Optional[float] = None,
                  progress: Optional[Callable] = None) -> Solution:
    """Local search from a feasible start; packed value never decreases."""
    state = _state_from_solution(instance, start)
    deadline = deadline or time.monotonic() + cfg.time_budget
    rng = Rng(cfg.seed, stream=0x15EA9C4)
    moves = cfg.ls_moves
    no_improve = 0
    iteration = 0
    insert_failed: set[int] = set()
    while no_improve < cfg.ls_max_no_improve and time.monotonic() < deadline:
        iteration += 1
        gained = 0
        if Move.INSERT in moves:
            gained = _move_insert(state, cfg, failed_cache=insert_failed)
        if gained == 0 and Move.RELOCATE in moves:
            gained = _move_relocate(state, cfg, rng)
        if gained == 0 and Move.SWAP_PAIR in moves:
            gained = _move_swap(state, cfg, rng, depth=1)
        if gained == 0 and Move.EJECT_CHAIN in moves:
            gained = _move_swap(state, cfg, rng, depth=2)
        if gained > 0:
            no_improve = 0
            insert_failed.clear()  # the landscape changed; rescan everything
            if progress is not None:
                progress(iteration, state.value)
        else:
            no_improve += 1
    return state.to_solution()


def solution_value(instance: Instance, solution: Solution) -> int:
    return sum(instance.items[p.item_index].value for p in solution.placements)


def solve(instance: Instance, cfg: SolverConfig,
          progress: Optional[Callable] = None) -> Solution:
    """Size-dispatched pipeline; always returns a verifying solution."""
    deadline = time.monotonic() + cfg.time_budget
    n = instance.n_items
    if n == 0:
        return Solution(instance.name)
    if cfg.placement is PlacementMode.SHELF:
        return solve_greedy(instance, cfg, deadline)

    if n <= 25:
        # small: greedy under every ordering plus a few shuffles, then full LS
        starts = []
        for ordering in Ordering:
            starts.append(solve_greedy(
                instance, cfg, deadline,
                order=priority_order(instance, ordering)))
        shuffle_rng = Rng(cfg.seed, stream=0x5132)
        base = priority_order(instance, cfg.ordering)
        for _ in range(3):
            order = list(base)
            shuffle_rng.shuffle(order)
            starts.append(solve_greedy(instance, cfg, deadline, order=order))
        best = max(starts, key=lambda s: solution_value(instance, s))
        return improve_local(instance, best, cfg, deadline, progress)

    greedy = solve_greedy(instance, cfg, deadline)
    if progress is not None:
        progress(0, solution_value(instance, greedy))
    if n <= 5000:
        return improve_local(instance, greedy, cfg, deadline, progress)
    insert_only = SolverConfig(
        ordering=cfg.ordering, grid_levels=cfg.grid_levels,
        time_budget=cfg.time_budget, ls_moves=frozenset({Move.INSERT}),
        seed=cfg.seed, ls_max_no_improve=cfg.ls_max_no_improve,
        placement=cfg.placement, coarse_cells=cfg.coarse_cells)
    return improve_local(instance, greedy, insert_only, deadline, progress)
