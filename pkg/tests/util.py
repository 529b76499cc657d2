"""Shared fixture builders and independent oracles.

The oracles here (plain BFS flood fill / distances, exhaustive rule
matching) are deliberately written from scratch rather than importing the
engine's implementations, so tests compare two independent routes to the
same answer.
"""

from __future__ import annotations

import random
from collections import Counter, deque

from gecka.knowledge import KnowledgeBase, Poag, Prerequisite
from gecka.scene import ENTRY, EXIT, Portal, Scene
from gecka.session import Session, SessionAction, new_session, validate_payload

# ---------------------------------------------------------------------------
# Table 1 pilot rules: (item, action, [(prereq name, state)], [(outcome, state)], goal)

TABLE1_ROWS = [
    ("blender", "blend", [("orange", None)], [("orange juice", None)], "quench thirst"),
    ("bread", "cut", [("knife", None)], [("bread slices", None)], None),
    ("bread slices", "stack", [("cheese", None), ("ham", None)], [("sandwich", None)], "satisfy hunger"),
    ("coffee beans", "hit", [("pestle", None)], [("coffee powder", None)], None),
    ("coffee maker", "fill", [("coffee powder", None), ("water", "boiled")], [("coffee", None)], None),
    ("kettle", "fill", [("water", None)], [("water", "boiled")], None),
    ("chair", "hit", [("hammer", None)], [("wood pieces", None)], None),
    ("can", "open", [("can opener", None)], [("food", None)], "satisfy hunger"),
    ("towel", "cut", [("scissors", None)], [("bandage", None)], None),
    ("bag", "fill", [("sand", None)], [("sandbag", None)], "flood control"),
]

# Rendered (item, action, prereqs, outcome, goal) rows as printed in stats.
TABLE1_RENDERED = [
    ("blender", "blend", "orange", "orange juice", "quench thirst"),
    ("bread", "cut", "knife", "bread slices", None),
    ("bread slices", "stack", "cheese, ham", "sandwich", "satisfy hunger"),
    ("coffee beans", "hit", "pestle", "coffee powder", None),
    ("coffee maker", "fill", "coffee powder, boiled water", "coffee", None),
    ("kettle", "fill", "water", "boiled water", None),
    ("chair", "hit", "hammer", "wood pieces", None),
    ("can", "open", "can opener", "food", "satisfy hunger"),
    ("towel", "cut", "scissors", "bandage", None),
    ("bag", "fill", "sand", "sandbag", "flood control"),
]


def poag_payload(item, action, prereqs, outcome, goal):
    payload = {
        "item": item,
        "action": action,
        "prerequisites": [
            {"kind": "object-present", "name": n, **({"state": s} if s else {})}
            for n, s in prereqs
        ],
        "outcome": [{"name": n, **({"state": s} if s else {})} for n, s in outcome],
    }
    if goal:
        payload["goal"] = goal
    return validate_payload("define-poag", payload)


def table1_session(session_id="pilot-table1", designer="pilot", timestamp="2026-08-01T10:00:00Z") -> Session:
    session = new_session(session_id, designer, timestamp)
    for item, action, prereqs, outcome, goal in TABLE1_ROWS:
        session.append("define-poag", poag_payload(item, action, prereqs, outcome, goal))
    return session


def table1_kb() -> KnowledgeBase:
    kb = KnowledgeBase()
    for item, action, prereqs, outcome, goal in TABLE1_ROWS:
        kb.record_rule(
            item,
            action,
            [("object-present", n, s) for n, s in prereqs],
            outcome,
            goal,
        )
    return kb


# ---------------------------------------------------------------------------
# Random sessions for round-trip testing

_WORDS = (
    "bread water blender orange kettle towel chair sand bag ham cheese "
    "knife hammer scissors pestle stone portal lamp rope torch crate troll "
    "barrel apple goblin sword shield lantern pickle jam spoon cart wheel "
    "café a&b he\"llo it's <odd> two words"
).split()

_SHAPES = ("cube", "sphere", "cone", "cylinder", "wedge", "slab")
_TRANSFORMS = ("scale:0.5", "rotate:90", "tint:green", "stretch:2", "flip:x")


def _word(rng: random.Random) -> str:
    if rng.random() < 0.2:
        return f"{rng.choice(_WORDS)} {rng.choice(_WORDS)}"
    return rng.choice(_WORDS)


def _terms(rng: random.Random, n_max: int, kinded: bool) -> list[dict]:
    out = []
    for _ in range(rng.randint(0, n_max)):
        entry = {}
        if kinded:
            kind = rng.choice(["object-present", "object-present", "state-holds", "action-done"])
            entry["kind"] = kind
        entry["name"] = _word(rng)
        if entry.get("kind") != "action-done" and rng.random() < 0.3:
            entry["state"] = rng.choice(["boiled", "broken", "wet", "hot"])
        out.append(entry)
    return out


def _random_poag_payload(rng: random.Random) -> dict:
    payload = {
        "item": _word(rng),
        "action": rng.choice(["cut", "fill", "hit", "stack", "blend", "open"]),
        "prerequisites": _terms(rng, 3, kinded=True),
        "outcome": _terms(rng, 2, kinded=False),
    }
    if rng.random() < 0.4:
        payload["goal"] = rng.choice(["quench thirst", "satisfy hunger", "flood control", "stay warm"])
    return payload


def random_session(rng: random.Random) -> Session:
    session = new_session(
        f"s-{rng.randrange(10**9)}",
        rng.choice(["ana", "bo b", "designer&co", ""]),
        f"2026-0{rng.randint(1, 9)}-1{rng.randint(0, 9)}T{rng.randint(0, 23):02d}:{rng.randint(0, 59):02d}:00Z",
    )
    session.scenes = [f"scene-{i}" for i in range(rng.randint(0, 3))]
    for _ in range(rng.randint(0, 12)):
        kind = rng.choice(
            ["define-type", "define-poag", "define-combination", "place-object",
             "edit-tile", "place-portal", "play-event"]
        )
        if kind == "define-type":
            payload = {"name": _word(rng)}
            if rng.random() < 0.4:
                payload["parent"] = _word(rng)
            if rng.random() < 0.4:
                payload["recipe"] = [
                    {"shape": rng.choice(_SHAPES), "transform": rng.choice(_TRANSFORMS)}
                    for _ in range(rng.randint(1, 3))
                ]
        elif kind == "define-poag":
            payload = _random_poag_payload(rng)
        elif kind == "define-combination":
            payload = {
                "item": _word(rng),
                "action": rng.choice(["stack", "combine", "attach"]),
                "ingredients": _terms(rng, 3, kinded=False),
                "outcome": _terms(rng, 2, kinded=False),
            }
        elif kind == "place-object":
            payload = {
                "scene": "scene-0",
                "type": _word(rng),
                "x": rng.randint(0, 31),
                "y": rng.randint(0, 31),
            }
            if rng.random() < 0.3:
                payload["states"] = [rng.choice(["broken", "wet", "boiled"])]
            if rng.random() < 0.2:
                payload["overrides"] = {
                    str(rng.randint(1, 9)): None if rng.random() < 0.5 else _random_poag_payload(rng)
                }
        elif kind == "edit-tile":
            op = rng.choice(["set-tile", "remove-instance", "add-spawn", "add-goal", "set-start"])
            payload = {"scene": "scene-0", "op": op}
            if op == "set-tile":
                payload.update(x=rng.randint(0, 31), y=rng.randint(0, 31),
                               tile=rng.choice(["floor", "wall", "void"]))
            elif op in ("add-spawn", "set-start"):
                payload.update(x=rng.randint(0, 31), y=rng.randint(0, 31))
            elif op == "remove-instance":
                payload["ref"] = rng.randint(1, 99)
            else:
                payload["goal"] = rng.choice(["quench thirst", "satisfy hunger"])
        elif kind == "place-portal":
            payload = {
                "scene": "scene-0",
                "kind": rng.choice(["entry", "exit"]),
                "x": rng.randint(0, 31),
                "y": rng.randint(0, 31),
            }
            if payload["kind"] == "exit" and rng.random() < 0.5:
                payload["target"] = "scene-1"
        else:
            payload = {
                "game": f"g{rng.randint(1, 9)}",
                "turn": rng.randint(0, 200),
                "kind": rng.choice(["move", "damage", "poag", "won"]),
                "data": {
                    rng.choice(["x", "y", "zombie", "note"]): str(rng.randint(0, 50))
                    for _ in range(rng.randint(0, 3))
                },
            }
        session.append(kind, validate_payload(kind, payload))
    return session


# ---------------------------------------------------------------------------
# Grid oracles (independent of gecka.pathfind / gecka.scene)

def bfs_distances(tiles: list[str], start: tuple[int, int]) -> dict[tuple[int, int], int]:
    """Plain BFS over '.' tiles, 4-connected."""
    width, height = len(tiles[0]), len(tiles)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for nx, ny in ((x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)):
            if 0 <= nx < width and 0 <= ny < height and tiles[ny][nx] == "." and (nx, ny) not in dist:
                dist[(nx, ny)] = dist[(x, y)] + 1
                queue.append((nx, ny))
    return dist


def random_grid(rng: random.Random, width=15, height=15, wall_density=0.3) -> Scene:
    tiles = [
        "".join("#" if rng.random() < wall_density else "." for _ in range(width))
        for _ in range(height)
    ]
    return Scene(id="grid", name="grid", width=width, height=height, tiles=tuple(tiles))


def corridor_scene(length=12, zombie_at: int | None = None) -> Scene:
    """1-tile corridor: entry on the left, exit on the right, optional zombie."""
    tiles = (
        "#" * length,
        "#" + "." * (length - 2) + "#",
        "#" * length,
    )
    return Scene(
        id="corridor",
        name="corridor",
        width=length,
        height=3,
        tiles=tiles,
        portals=(
            Portal(kind=ENTRY, position=(1, 1)),
            Portal(kind=EXIT, position=(length - 2, 1)),
        ),
        monster_spawns=((zombie_at, 1),) if zombie_at is not None else (),
        start_position=(1, 1),
    )


# ---------------------------------------------------------------------------
# Exhaustive combination-matching oracle

def brute_force_match(kb: KnowledgeBase, candidates: list[Poag], action_id: int,
                      available: list[tuple[int, object]], done_actions=()) -> Poag | None:
    """Exhaustive scan with permutation-based containment; mirrors the documented
    tie-break (largest prerequisite multiset, then smallest id) independently."""
    import itertools

    def entry_tags(state):
        if state is None:
            return frozenset()
        if isinstance(state, str):
            return frozenset((state,))
        return frozenset(state)

    entries = [(kb.object_type(t).name, entry_tags(s)) for t, s in available]
    done = Counter(done_actions)

    def contained(prereqs: tuple[Prerequisite, ...]) -> bool:
        needed = [p for p in prereqs if p.kind == "action-done"]
        have = Counter(done)
        for p in needed:
            if have[p.name] <= 0:
                return False
            have[p.name] -= 1
        object_prereqs = [p for p in prereqs if p.kind != "action-done"]
        if len(object_prereqs) > len(entries):
            return False
        for combo in itertools.permutations(range(len(entries)), len(object_prereqs)):
            ok = True
            for p, j in zip(object_prereqs, combo):
                name, tags = entries[j]
                if p.name != name or (p.state is not None and p.state not in tags):
                    ok = False
                    break
            if ok:
                return True
        return False

    best = None
    for poag in candidates:
        if poag.action != action_id or not contained(poag.prerequisites):
            continue
        if best is None or len(poag.prerequisites) > len(best.prerequisites) or (
            len(poag.prerequisites) == len(best.prerequisites) and poag.id < best.id
        ):
            best = poag
    return best
