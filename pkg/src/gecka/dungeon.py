"""Seeded procedural dungeons: rectangular rooms joined by L-shaped corridors.

Layouts are a pure function of the parameters (seed included): the same
params always carve the same grid, place the same portals and spawn the
same zombies, which is what lets a recorded playthrough be replayed
anywhere. Generated scenes always pass validation: rooms are carved in
placement order and each is tied to the previous one by a corridor, so
every floor tile is reachable from the entry.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .rng import PRNG_ID, SplitMix64
from .scene import ENTRY, EXIT, FLOOR, WALL, Portal, Scene

PLACEMENT_ATTEMPTS = 1000


@dataclass(frozen=True)
class DungeonParams:
    width: int = 32
    height: int = 32
    room_count: tuple[int, int] = (4, 8)
    room_size: tuple[tuple[int, int], tuple[int, int]] = ((3, 7), (3, 7))
    zombie_count: int = 3
    seed: int = 0

    def __post_init__(self):
        (w_lo, w_hi), (h_lo, h_hi) = self.room_size
        lo, hi = self.room_count
        if not (1 <= lo <= hi):
            raise ValidationError(f"empty room count range {self.room_count}")
        if not (1 <= w_lo <= w_hi and 1 <= h_lo <= h_hi):
            raise ValidationError(f"empty room size range {self.room_size}")
        if self.zombie_count < 0:
            raise ValidationError("zombie count must be non-negative")
        if w_lo + 2 > self.width or h_lo + 2 > self.height:
            raise ValidationError(
                f"grid {self.width}x{self.height} too small for {w_lo}x{h_lo} rooms"
            )


@dataclass(frozen=True)
class Room:
    x: int
    y: int
    w: int
    h: int

    @property
    def center(self) -> tuple[int, int]:
        return (self.x + self.w // 2, self.y + self.h // 2)

    def intersects(self, other: "Room") -> bool:
        # expanded by one so rooms keep a wall between them
        return (
            self.x - 1 < other.x + other.w
            and other.x - 1 < self.x + self.w
            and self.y - 1 < other.y + other.h
            and other.y - 1 < self.y + self.h
        )


def generate_dungeon(params: DungeonParams, scene_id: str | None = None) -> Scene:
    """Generate a playable scene from seeded params.

    Rooms are placed by rejection sampling (up to 1000 attempts each;
    giving up just yields fewer rooms), corridors run horizontal leg first
    between consecutive room centers, the entry portal sits at the first
    room's center and the exit at the last room's center. Zombies spawn on
    distinct floor tiles outside the first room.
    """
    rng = SplitMix64(params.seed)
    width, height = params.width, params.height
    grid = [[WALL] * width for _ in range(height)]

    (w_lo, w_hi), (h_lo, h_hi) = params.room_size
    target = rng.randint(*params.room_count)
    rooms: list[Room] = []
    for _ in range(target):
        for _attempt in range(PLACEMENT_ATTEMPTS):
            w = min(rng.randint(w_lo, w_hi), width - 2)
            h = min(rng.randint(h_lo, h_hi), height - 2)
            x = rng.randint(1, width - w - 1)
            y = rng.randint(1, height - h - 1)
            room = Room(x, y, w, h)
            if not any(room.intersects(r) for r in rooms):
                rooms.append(room)
                break

    for room in rooms:
        for y in range(room.y, room.y + room.h):
            for x in range(room.x, room.x + room.w):
                grid[y][x] = FLOOR

    for prev, room in zip(rooms, rooms[1:]):
        x1, y1 = prev.center
        x2, y2 = room.center
        for x in range(min(x1, x2), max(x1, x2) + 1):  # horizontal leg first
            grid[y1][x] = FLOOR
        for y in range(min(y1, y2), max(y1, y2) + 1):
            grid[y][x2] = FLOOR

    entry_pos = rooms[0].center
    exit_pos = rooms[-1].center
    if exit_pos == entry_pos:
        # single room: nudge the exit onto a neighboring floor tile
        x, y = exit_pos
        for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if 0 <= nx < width and 0 <= ny < height and grid[ny][nx] == FLOOR:
                exit_pos = (nx, ny)
                break

    first = rooms[0]
    outside_first = [
        (x, y)
        for y in range(height)
        for x in range(width)
        if grid[y][x] == FLOOR
        and not (first.x <= x < first.x + first.w and first.y <= y < first.y + first.h)
    ]
    count = min(params.zombie_count, len(outside_first))
    spawns = tuple(rng.sample_distinct(outside_first, count))

    tiles = tuple("".join(row) for row in grid)
    return Scene(
        id=scene_id or f"dungeon-{params.seed}",
        name=f"generated dungeon (seed {params.seed}, {PRNG_ID})",
        width=width,
        height=height,
        tiles=tiles,
        portals=(
            Portal(kind=ENTRY, position=entry_pos),
            Portal(kind=EXIT, position=exit_pos),
        ),
        monster_spawns=spawns,
        start_position=entry_pos,
    )
