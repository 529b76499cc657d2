"""Grid pathfinding and the fog-of-war visibility ball.

Movement is 4-connected over floor tiles. :func:`shortest_path` is A* with
the Manhattan heuristic; neighbor expansion order is N, E, S, W and ties
between equal f-scores resolve to the node pushed first, which pins down
one deterministic path among the many optimal ones.
"""

from __future__ import annotations

from functools import lru_cache
from heapq import heappop, heappush
from typing import Iterable

from .errors import OutOfBoundsError, PlacementError
from .scene import FLOOR, Coord, Scene


@lru_cache(maxsize=256)
def _neighbor_table(
    tiles: tuple[str, ...], width: int
) -> tuple[list[bool], list[tuple[int, ...]], list[int], list[int]]:
    """Per-grid cache: floor mask, N/E/S/W floor neighbors, and x/y by flat index."""
    height = len(tiles)
    floor = [ch == FLOOR for row in tiles for ch in row]
    neighbors: list[tuple[int, ...]] = []
    xs = [idx % width for idx in range(width * height)]
    ys = [idx // width for idx in range(width * height)]
    for idx in range(width * height):
        x, y = xs[idx], ys[idx]
        steps = []
        for nx, ny in ((x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)):  # N E S W
            if 0 <= nx < width and 0 <= ny < height and floor[ny * width + nx]:
                steps.append(ny * width + nx)
        neighbors.append(tuple(steps))
    return floor, neighbors, xs, ys


def shortest_path(
    scene: Scene,
    start: Coord,
    goal: Coord,
    blocked: Iterable[Coord] = (),
) -> list[Coord] | None:
    """Minimal 4-connected path over floor tiles, endpoints included.

    Returns None when the goal is unreachable. ``blocked`` marks extra
    impassable tiles (occupied by zombies, say) on top of walls and void;
    a blocked *goal* is unreachable, a blocked start is ignored.
    """
    width = scene.width
    for name, pos in (("start", start), ("goal", goal)):
        if not scene.in_bounds(pos):
            raise OutOfBoundsError(f"{name} {pos} outside {width}x{scene.height} grid")
        if not scene.is_floor(pos):
            raise PlacementError(f"{name} {pos} is not a floor tile")
    if start == goal:
        return [start]

    floor, neighbors, xs, ys = _neighbor_table(scene.tiles, width)
    start_idx = start[1] * width + start[0]
    goal_idx = goal[1] * width + goal[0]
    gx, gy = goal
    blocked_idx = {y * width + x for x, y in blocked}
    blocked_idx.discard(start_idx)
    if goal_idx in blocked_idx:
        return None

    size = len(floor)
    dist = [-1] * size
    parent = [-1] * size
    dist[start_idx] = 0
    counter = 0
    heap = [(abs(start[0] - gx) + abs(start[1] - gy), 0, start_idx, 0)]
    while heap:
        _f, _, idx, d = heappop(heap)
        if d > dist[idx]:
            continue  # stale entry
        if idx == goal_idx:
            break
        nd = d + 1
        for n in neighbors[idx]:
            if n in blocked_idx:
                continue
            if dist[n] == -1 or nd < dist[n]:
                dist[n] = nd
                parent[n] = idx
                counter += 1
                heappush(heap, (nd + abs(xs[n] - gx) + abs(ys[n] - gy), counter, n, nd))
    else:
        return None

    path = [goal_idx]
    while path[-1] != start_idx:
        path.append(parent[path[-1]])
    path.reverse()
    return [(i % width, i // width) for i in path]


def visible_tiles(scene: Scene, pos: Coord, radius: int) -> set[Coord]:
    """All in-bounds tiles (walls included) within Chebyshev distance of pos."""
    if not scene.in_bounds(pos):
        raise OutOfBoundsError(f"{pos} outside {scene.width}x{scene.height} grid")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    x, y = pos
    return {
        (nx, ny)
        for ny in range(max(0, y - radius), min(scene.height, y + radius + 1))
        for nx in range(max(0, x - radius), min(scene.width, x + radius + 1))
    }
