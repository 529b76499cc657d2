"""Turn-based player-mode runtime.

One :func:`step` call advances exactly one turn through a fixed phase
order: player command, fog reveal, zombie pursuit, then win/loss
resolution. Everything is deterministic: pathfinding ties are pinned,
zombies move in id order, and the only randomness (the dungeon itself)
comes from the seeded generator, so a (scene, seed, command script)
triple always produces the same event stream.

The knowledge base passed in is the game's entity store and is mutated by
play (combining consumes prerequisite instances and registers outcome
instances), so give every game its own materialized copy, e.g. from
:func:`gecka.scene.scene_from_doc`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    CommandError,
    GameOverError,
    InvalidSceneError,
    OutOfBoundsError,
    PlacementError,
    UnknownReferenceError,
)
from .jsonutil import compact_dumps, content_hash
from .knowledge import KnowledgeBase, match_prerequisites
from .pathfind import shortest_path, visible_tiles
from .rng import MASK64, PRNG_ID
from .scene import EXIT, Coord, Scene, scene_to_doc, validate_scene

VISION_RADIUS = 3
INITIAL_HEALTH = 3

RUNNING = "running"
WON = "won"
LOST = "lost"

TRACE_FORMAT = "gecka-trace-1"


# -- commands ---------------------------------------------------------------

@dataclass(frozen=True)
class MoveTo:
    target: Coord


@dataclass(frozen=True)
class Interact:
    instance: int
    action: str


@dataclass(frozen=True)
class Combine:
    item: int
    action: str
    ingredients: tuple[int, ...] = ()


@dataclass(frozen=True)
class UsePortal:
    pass


@dataclass(frozen=True)
class Wait:
    pass


Command = Union[MoveTo, Interact, Combine, UsePortal, Wait]


def command_to_doc(cmd: Command) -> dict:
    if isinstance(cmd, MoveTo):
        return {"kind": "move-to", "x": cmd.target[0], "y": cmd.target[1]}
    if isinstance(cmd, Interact):
        return {"kind": "interact", "instance": cmd.instance, "action": cmd.action}
    if isinstance(cmd, Combine):
        return {
            "kind": "combine",
            "item": cmd.item,
            "action": cmd.action,
            "ingredients": list(cmd.ingredients),
        }
    if isinstance(cmd, UsePortal):
        return {"kind": "use-portal"}
    return {"kind": "wait"}


def command_from_doc(doc: Mapping) -> Command:
    kind = doc.get("kind")
    try:
        if kind == "move-to":
            return MoveTo(target=(int(doc["x"]), int(doc["y"])))
        if kind == "interact":
            return Interact(instance=int(doc["instance"]), action=str(doc["action"]))
        if kind == "combine":
            return Combine(
                item=int(doc["item"]),
                action=str(doc["action"]),
                ingredients=tuple(int(i) for i in doc.get("ingredients", ())),
            )
        if kind == "use-portal":
            return UsePortal()
        if kind == "wait":
            return Wait()
    except (KeyError, TypeError, ValueError) as exc:
        raise CommandError(f"malformed {kind} command: {exc}") from exc
    raise CommandError(f"unknown command kind {kind!r}")


def parse_script_line(line: str) -> Command | None:
    """One command per line: ``move x y``, ``interact id verb``,
    ``combine item verb ing1,ing2``, ``portal``, ``wait``.

    Blank lines and ``#`` comments are skipped (returns None).
    """
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    parts = stripped.split()
    try:
        if parts[0] == "move" and len(parts) == 3:
            return MoveTo(target=(int(parts[1]), int(parts[2])))
        if parts[0] == "interact" and len(parts) == 3:
            return Interact(instance=int(parts[1]), action=parts[2])
        if parts[0] == "combine" and len(parts) in (3, 4):
            raw = parts[3] if len(parts) == 4 else ""
            ingredients = tuple(int(i) for i in raw.split(",") if i and i != "-")
            return Combine(item=int(parts[1]), action=parts[2], ingredients=ingredients)
        if parts[0] == "portal" and len(parts) == 1:
            return UsePortal()
        if parts[0] == "wait" and len(parts) == 1:
            return Wait()
    except ValueError as exc:
        raise CommandError(f"bad script line {stripped!r}: {exc}") from exc
    raise CommandError(f"bad script line {stripped!r}")


# -- state ------------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    position: Coord
    inventory: tuple[int, ...] = ()
    health: int = INITIAL_HEALTH
    pending_path: tuple[Coord, ...] = ()
    pending_target: Coord | None = None


@dataclass(frozen=True)
class Zombie:
    id: int
    position: Coord


@dataclass(frozen=True)
class Event:
    turn: int
    kind: str
    payload: dict = field(default_factory=dict)

    def to_line(self) -> str:
        return compact_dumps({"turn": self.turn, "kind": self.kind, "payload": self.payload})


@dataclass(frozen=True)
class GameState:
    """Snapshot between turns; treat as immutable (step returns a new one)."""

    scene: str
    character: Character
    zombies: tuple[Zombie, ...]
    revealed_by_scene: Mapping[str, frozenset[Coord]]
    floor_by_scene: Mapping[str, tuple[int, ...]]
    completed_goals: frozenset[int] = frozenset()
    turn: int = 0
    rng_state: int = 0
    status: str = RUNNING
    action_history: tuple[tuple[str, str], ...] = ()
    radius: int = VISION_RADIUS
    zombie_seq: int = 0

    @property
    def revealed(self) -> frozenset[Coord]:
        return self.revealed_by_scene.get(self.scene, frozenset())

    @property
    def floor_instances(self) -> tuple[int, ...]:
        return self.floor_by_scene.get(self.scene, ())


def start_game(
    scene: Scene,
    kb: KnowledgeBase,
    seed: int,
    radius: int = VISION_RADIUS,
) -> GameState:
    """Initial state: character on the entry portal, zombies on their spawns."""
    report = validate_scene(scene, kb)
    if not report.ok:
        details = "; ".join(f.message for f in report.errors)
        raise InvalidSceneError(f"scene {scene.id} is not playable: {details}")
    start = scene.start_position
    zombies = tuple(
        Zombie(id=i + 1, position=pos) for i, pos in enumerate(scene.monster_spawns)
    )
    return GameState(
        scene=scene.id,
        character=Character(position=start),
        zombies=zombies,
        revealed_by_scene={scene.id: frozenset(visible_tiles(scene, start, radius))},
        floor_by_scene={scene.id: tuple(scene.instances)},
        rng_state=seed & MASK64,
        radius=radius,
        zombie_seq=len(zombies),
    )


# -- stepping -----------------------------------------------------------------

def step(
    state: GameState,
    cmd: Command,
    kb: KnowledgeBase,
    scenes: Mapping[str, Scene],
) -> tuple[GameState, list[Event]]:
    """Advance one turn; returns the new state and the events it produced.

    Phases: player command, fog reveal, zombie pursuit (ascending id, one
    hop each, other zombies' tiles treated as walls, walking into the
    character deals 1 damage instead of moving), then resolution (death
    first, then a portal win). Raises :class:`GameOverError` once the game
    is decided and :class:`CommandError` for unreachable references; a
    command that merely fails to match knowledge still consumes the turn
    and reports a ``no-match`` event.
    """
    if state.status != RUNNING:
        raise GameOverError(f"game already {state.status}")
    if state.scene not in scenes:
        raise UnknownReferenceError(f"scene {state.scene} not in the provided world")
    turn = state.turn
    events: list[Event] = []

    def emit(kind: str, **payload):
        events.append(Event(turn=turn, kind=kind, payload=payload))

    scene_id = state.scene
    scene = scenes[scene_id]
    char = state.character
    zombies = state.zombies
    zombie_seq = state.zombie_seq
    floor_by_scene = {k: v for k, v in state.floor_by_scene.items()}
    completed = state.completed_goals
    history = state.action_history
    pending_win = False

    # ---- phase 1: player
    if isinstance(cmd, MoveTo):
        char = _move_player(scene, state, cmd.target, emit)
    elif isinstance(cmd, (Interact, Combine)):
        char, completed, history = _apply_knowledge_command(
            state, cmd, kb, scene, floor_by_scene, completed, history, emit
        )
    elif isinstance(cmd, UsePortal):
        portal = scene.portal_at(char.position)
        if portal is None or portal.kind != EXIT:
            emit("no-portal", position=list(char.position))
        elif portal.target_scene is not None:
            target = scenes.get(portal.target_scene)
            if target is None or target.start_position is None:
                emit("portal-error", target=portal.target_scene, reason="unknown-scene")
            else:
                scene_id, scene = target.id, target
                char = replace(
                    char,
                    position=target.start_position,
                    pending_path=(),
                    pending_target=None,
                )
                zombies = tuple(
                    Zombie(id=zombie_seq + i + 1, position=pos)
                    for i, pos in enumerate(target.monster_spawns)
                )
                zombie_seq += len(zombies)
                floor_by_scene.setdefault(target.id, tuple(target.instances))
                emit("scene-transfer", origin=state.scene, target=target.id)
        else:
            missing = [g for g in scene.goals if not _goal_done(kb, g, completed)]
            if missing:
                emit("portal-blocked", missing=missing)
            else:
                pending_win = True
    elif isinstance(cmd, Wait):
        emit("wait")
    else:
        raise CommandError(f"unknown command {cmd!r}")

    # ---- phase 2: reveal
    revealed = {k: v for k, v in state.revealed_by_scene.items()}
    seen = revealed.get(scene_id, frozenset())
    revealed[scene_id] = seen | frozenset(visible_tiles(scene, char.position, state.radius))

    # ---- phase 3: zombies
    health = char.health
    moved: list[Zombie] = []
    positions = {z.id: z.position for z in zombies}
    for z in sorted(zombies, key=lambda z: z.id):
        blocked = [p for zid, p in positions.items() if zid != z.id]
        path = shortest_path(scene, z.position, char.position, blocked=blocked)
        if path is None or len(path) < 2:
            moved.append(z)
            continue
        hop = path[1]
        if hop == char.position:
            health -= 1
            emit("damage", zombie=z.id, health=health)
            moved.append(z)
        else:
            emit("zombie-move", zombie=z.id, origin=list(z.position), target=list(hop))
            positions[z.id] = hop
            moved.append(replace(z, position=hop))
    char = replace(char, health=max(health, 0))

    # ---- phase 4: resolution
    status = RUNNING
    if char.health <= 0:
        status = LOST
        emit("lost")
    elif pending_win:
        status = WON
        emit("won", goals=[g for g in scene.goals])

    new_state = GameState(
        scene=scene_id,
        character=char,
        zombies=tuple(moved),
        revealed_by_scene=revealed,
        floor_by_scene=floor_by_scene,
        completed_goals=completed,
        turn=turn + 1,
        rng_state=state.rng_state,
        status=status,
        action_history=history,
        radius=state.radius,
        zombie_seq=zombie_seq,
    )
    return new_state, events


def _goal_done(kb: KnowledgeBase, goal: str, completed: frozenset[int]) -> bool:
    goal_obj = kb.find_goal(goal)
    return goal_obj is not None and goal_obj.id in completed


def _move_player(scene: Scene, state: GameState, target: Coord, emit) -> Character:
    char = state.character
    if not scene.in_bounds(target):
        raise CommandError(f"move target {target} outside the grid")
    blocked = {z.position for z in state.zombies}
    pending = ()
    if (
        char.pending_target == target
        and char.pending_path
        and char.pending_path[0] not in blocked
        and _adjacent(char.position, char.pending_path[0])
    ):
        pending = char.pending_path
    else:
        try:
            path = shortest_path(scene, char.position, target, blocked=blocked)
        except (OutOfBoundsError, PlacementError):
            path = None
        if path is None:
            emit("no-path", target=list(target))
            return replace(char, pending_path=(), pending_target=None)
        pending = tuple(path[1:])
    if not pending:
        return replace(char, pending_path=(), pending_target=None)  # already there
    hop, rest = pending[0], pending[1:]
    emit("move", origin=list(char.position), target=list(hop))
    return replace(
        char,
        position=hop,
        pending_path=rest,
        pending_target=target if rest else None,
    )


def _adjacent(a: Coord, b: Coord) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def _reachable_ids(state: GameState, kb: KnowledgeBase) -> list[int]:
    """Instances the character can use: held, underfoot, or 4-adjacent."""
    char = state.character
    ids = list(char.inventory)
    for instance_id in state.floor_instances:
        pos = kb.instance(instance_id).position
        if pos == char.position or _adjacent(pos, char.position):
            ids.append(instance_id)
    return ids


def _apply_knowledge_command(
    state: GameState,
    cmd: Interact | Combine,
    kb: KnowledgeBase,
    scene: Scene,
    floor_by_scene: dict[str, tuple[int, ...]],
    completed: frozenset[int],
    history: tuple[tuple[str, str], ...],
    emit,
):
    char = state.character
    reachable = _reachable_ids(state, kb)
    item_id = cmd.instance if isinstance(cmd, Interact) else cmd.item
    if item_id not in reachable:
        raise CommandError(f"instance {item_id} is neither held nor adjacent")
    if isinstance(cmd, Combine):
        for ing in cmd.ingredients:
            if ing not in reachable:
                raise CommandError(f"ingredient {ing} is neither held nor adjacent")
        pool = list(dict.fromkeys(cmd.ingredients))
    else:
        # interact draws prerequisites from everything in reach
        pool = list(dict.fromkeys(reachable))

    item_inst = kb.instance(item_id)
    action = kb.find_action(cmd.action)
    verbs = [verb for verb, _item in history]
    item_name = kb.object_type(item_inst.type).name
    if action is None:
        emit("no-match", item=item_name, action=cmd.action, reason="unknown-action")
        return char, completed, history

    entries = [(kb.instance(i).type, kb.instance(i).state_tags) for i in pool]
    poag = kb.resolve_combination(
        action.id, entries, instance=item_id, done_actions=verbs
    )
    if poag is None:
        emit("no-match", item=item_name, action=action.verb)
        return char, completed, history

    assignment = match_prerequisites(kb, poag.prerequisites, entries, verbs)
    assert assignment is not None  # resolve_combination just matched
    consumed = sorted(
        pool[entry_idx]
        for prereq_idx, entry_idx in assignment.items()
        if poag.prerequisites[prereq_idx].kind == "object-present"
    )
    inventory = [i for i in char.inventory if i not in consumed]
    floor_by_scene[state.scene] = tuple(
        i for i in floor_by_scene.get(state.scene, ()) if i not in consumed
    )
    consumed_view = []
    for instance_id in consumed:
        consumed_view.append(
            {"id": instance_id, "type": kb.object_type(kb.instance(instance_id).type).name}
        )
        kb.remove_instance(instance_id)
    produced_view = []
    for type_id, tag in poag.outcome:
        new_id = kb.instantiate(
            type_id, state.scene, char.position, state_tags=(tag,) if tag else ()
        )
        inventory.append(new_id)
        produced_view.append({"id": new_id, "type": kb.object_type(type_id).name})

    emit(
        "poag",
        poag=poag.id,
        item=item_name,
        action=action.verb,
        consumed=consumed_view,
        produced=produced_view,
    )
    history = history + ((action.verb, item_name),)
    if poag.goal is not None and poag.goal not in completed:
        completed = completed | {poag.goal}
        emit("goal-completed", goal=kb.goal(poag.goal).description)
    return replace(char, inventory=tuple(inventory)), completed, history


# -- masked view & traces -----------------------------------------------------

def state_view(state: GameState, kb: KnowledgeBase, scenes: Mapping[str, Scene]) -> dict:
    """Player-facing snapshot: tiles, items and zombies outside the revealed
    set are withheld ('?' rows for tiles), which is what keeps thin clients
    honest about the fog of war."""
    scene = scenes[state.scene]
    revealed = state.revealed
    rows = []
    for y in range(scene.height):
        rows.append(
            "".join(
                scene.tiles[y][x] if (x, y) in revealed else "?"
                for x in range(scene.width)
            )
        )
    inventory = [
        {
            "id": i,
            "type": kb.object_type(kb.instance(i).type).name,
            "states": sorted(kb.instance(i).state_tags),
        }
        for i in state.character.inventory
    ]
    items = []
    for i in state.floor_instances:
        inst = kb.instance(i)
        if inst.position in revealed:
            items.append(
                {
                    "id": i,
                    "type": kb.object_type(inst.type).name,
                    "pos": list(inst.position),
                    "states": sorted(inst.state_tags),
                }
            )
    goals = [
        {"goal": g, "done": _goal_done(kb, g, state.completed_goals)} for g in scene.goals
    ]
    return {
        "scene": state.scene,
        "width": scene.width,
        "height": scene.height,
        "tiles": rows,
        "position": list(state.character.position),
        "health": state.character.health,
        "status": state.status,
        "turn": state.turn,
        "inventory": inventory,
        "items": items,
        "zombies": [
            {"id": z.id, "pos": list(z.position)}
            for z in state.zombies
            if z.position in revealed
        ],
        "portals": [
            {
                "kind": p.kind,
                "pos": list(p.position),
                **({"target": p.target_scene} if p.target_scene else {}),
            }
            for p in scene.portals
            if p.position in revealed
        ],
        "goals": goals,
    }


def trace_header(scene: Scene, kb: KnowledgeBase, seed: int) -> dict:
    return {
        "format": TRACE_FORMAT,
        "seed": seed & MASK64,
        "prng": PRNG_ID,
        "scene": content_hash(scene_to_doc(scene, kb)),
    }


def trace_lines(header: dict, events: Iterable[Event]) -> list[str]:
    """JSON-lines trace: one header line, then one line per event."""
    return [compact_dumps(header)] + [e.to_line() for e in events]


def run_script(
    scene: Scene,
    kb: KnowledgeBase,
    seed: int,
    commands: Sequence[Command],
    radius: int = VISION_RADIUS,
    scenes: Mapping[str, Scene] | None = None,
) -> tuple[GameState, list[Event]]:
    """Run a command list from a fresh start; stops early once decided."""
    world = dict(scenes) if scenes else {}
    world.setdefault(scene.id, scene)
    state = start_game(scene, kb, seed, radius=radius)
    events: list[Event] = []
    for cmd in commands:
        state, new_events = step(state, cmd, kb, world)
        events.extend(new_events)
        if state.status != RUNNING:
            break
    return state, events
