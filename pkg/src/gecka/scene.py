"""Tile-based levels: the grid, placed entities, portals, and validation.

A scene is an immutable value; :func:`apply_edit` returns an edited copy
and optionally logs the edit into a session so a level can be replayed
from its edit history. Grid connectivity is 4-connected everywhere.

The on-disk format is a canonical JSON document described in
``docs/scene-format.md``: tiles are encoded one string per row using
``.`` (floor), ``#`` (wall) and a space (void). A scene file may embed a
``knowledge`` section so it stays playable on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Union

from .errors import (
    DuplicateError,
    OutOfBoundsError,
    PlacementError,
    UnknownReferenceError,
    ValidationError,
)
from .knowledge import (
    ACTION_DONE,
    KnowledgeBase,
    Poag,
    Prerequisite,
)
from .text import normalize_term

FLOOR = "."
WALL = "#"
VOID = " "
TILE_KINDS = {"floor": FLOOR, "wall": WALL, "void": VOID}
TILE_NAMES = {v: k for k, v in TILE_KINDS.items()}

DEFAULT_SIZE = 32
MAX_SIZE = 256

ENTRY = "entry"
EXIT = "exit"

Coord = tuple[int, int]


@dataclass(frozen=True)
class Portal:
    kind: str
    position: Coord
    target_scene: str | None = None

    def __post_init__(self):
        if self.kind not in (ENTRY, EXIT):
            raise ValidationError(f"unknown portal kind {self.kind!r}")
        if self.kind == ENTRY and self.target_scene is not None:
            raise ValidationError("entry portals cannot target another scene")


@dataclass(frozen=True)
class Scene:
    id: str
    name: str
    width: int
    height: int
    tiles: tuple[str, ...]
    instances: tuple[int, ...] = ()
    portals: tuple[Portal, ...] = ()
    monster_spawns: tuple[Coord, ...] = ()
    goals: tuple[str, ...] = ()
    start_position: Coord | None = None

    def in_bounds(self, pos: Coord) -> bool:
        x, y = pos
        return 0 <= x < self.width and 0 <= y < self.height

    def tile_at(self, pos: Coord) -> str:
        if not self.in_bounds(pos):
            raise OutOfBoundsError(f"{pos} outside {self.width}x{self.height} grid")
        return self.tiles[pos[1]][pos[0]]

    def is_floor(self, pos: Coord) -> bool:
        return self.tile_at(pos) == FLOOR

    def entry_portal(self) -> Portal | None:
        for p in self.portals:
            if p.kind == ENTRY:
                return p
        return None

    def exit_portals(self) -> list[Portal]:
        return [p for p in self.portals if p.kind == EXIT]

    def portal_at(self, pos: Coord) -> Portal | None:
        for p in self.portals:
            if p.position == pos:
                return p
        return None


def new_scene(scene_id: str, name: str = "", width: int = DEFAULT_SIZE,
              height: int = DEFAULT_SIZE, fill: str = "floor") -> Scene:
    """Blank editing canvas; replaying a scene's edit log starts from here."""
    if not (1 <= width <= MAX_SIZE and 1 <= height <= MAX_SIZE):
        raise ValidationError(f"grid {width}x{height} outside 1..{MAX_SIZE}")
    ch = TILE_KINDS[fill]
    return Scene(
        id=scene_id,
        name=name or scene_id,
        width=width,
        height=height,
        tiles=tuple(ch * width for _ in range(height)),
    )


# -- edit operations ------------------------------------------------------

@dataclass(frozen=True)
class SetTile:
    pos: Coord
    kind: str  # floor | wall | void


@dataclass(frozen=True)
class PlaceInstance:
    type_id: int
    pos: Coord
    state_tags: tuple[str, ...] = ()
    overrides: Mapping[int, Poag | None] = field(default_factory=dict)


@dataclass(frozen=True)
class RemoveInstance:
    instance_id: int


@dataclass(frozen=True)
class PlacePortal:
    kind: str
    pos: Coord
    target_scene: str | None = None


@dataclass(frozen=True)
class AddSpawn:
    pos: Coord


@dataclass(frozen=True)
class AddGoal:
    goal: str


@dataclass(frozen=True)
class SetStart:
    pos: Coord


EditOp = Union[SetTile, PlaceInstance, RemoveInstance, PlacePortal, AddSpawn, AddGoal, SetStart]


def _occupied(scene: Scene, kb: KnowledgeBase, pos: Coord) -> bool:
    if any(kb.instances[i].position == pos for i in scene.instances if i in kb.instances):
        return True
    if scene.portal_at(pos) is not None:
        return True
    if pos in scene.monster_spawns:
        return True
    return False


def apply_edit(scene: Scene, op: EditOp, kb: KnowledgeBase, session=None) -> Scene:
    """Apply one editor action, returning the edited scene.

    Accepted edits always preserve the scene invariants (bounds,
    floor-only placement, single entry portal). When ``session`` is given,
    the edit is appended to it with the next sequence number, which is what
    makes authored levels replayable and uploadable.
    """
    edited = _apply(scene, op, kb)
    if session is not None:
        from .session import log_edit  # local import to avoid a cycle

        log_edit(session, scene, op, kb)
    return edited


def _apply(scene: Scene, op: EditOp, kb: KnowledgeBase) -> Scene:
    if isinstance(op, SetTile):
        if op.kind not in TILE_KINDS:
            raise ValidationError(f"unknown tile kind {op.kind!r}")
        x, y = op.pos
        scene.tile_at(op.pos)  # bounds check
        if op.kind != "floor" and _occupied(scene, kb, op.pos):
            raise PlacementError(f"tile {op.pos} hosts an entity; cannot make it {op.kind}")
        if op.kind != "floor" and scene.start_position == op.pos:
            raise PlacementError(f"tile {op.pos} is the start position")
        row = scene.tiles[y]
        new_row = row[:x] + TILE_KINDS[op.kind] + row[x + 1:]
        return replace(scene, tiles=scene.tiles[:y] + (new_row,) + scene.tiles[y + 1:])

    if isinstance(op, PlaceInstance):
        if not scene.is_floor(op.pos):
            raise PlacementError(f"cannot place an object on a non-floor tile {op.pos}")
        instance_id = kb.instantiate(
            op.type_id, scene.id, op.pos,
            overrides=dict(op.overrides), state_tags=op.state_tags,
        )
        return replace(scene, instances=scene.instances + (instance_id,))

    if isinstance(op, RemoveInstance):
        if op.instance_id not in scene.instances:
            raise UnknownReferenceError(f"instance {op.instance_id} is not in scene {scene.id}")
        kb.remove_instance(op.instance_id)
        return replace(
            scene, instances=tuple(i for i in scene.instances if i != op.instance_id)
        )

    if isinstance(op, PlacePortal):
        if not scene.is_floor(op.pos):
            raise PlacementError(f"cannot place a portal on a non-floor tile {op.pos}")
        portal = Portal(kind=op.kind, position=op.pos, target_scene=op.target_scene)
        edited = scene
        if portal.kind == ENTRY:
            if scene.entry_portal() is not None:
                raise DuplicateError("scene already has an entry portal")
            # the entry portal defines where the character starts
            edited = replace(edited, start_position=portal.position)
        return replace(edited, portals=edited.portals + (portal,))

    if isinstance(op, AddSpawn):
        if not scene.is_floor(op.pos):
            raise PlacementError(f"cannot spawn a monster on a non-floor tile {op.pos}")
        if op.pos in scene.monster_spawns:
            return scene
        return replace(scene, monster_spawns=scene.monster_spawns + (op.pos,))

    if isinstance(op, AddGoal):
        goal = normalize_term(op.goal)
        if not goal:
            raise ValidationError("goal is empty after normalization")
        if goal in scene.goals:
            return scene
        return replace(scene, goals=scene.goals + (goal,))

    if isinstance(op, SetStart):
        entry = scene.entry_portal()
        if entry is None:
            raise ValidationError("place an entry portal before setting the start")
        if entry.position != op.pos:
            raise ValidationError(
                f"start must coincide with the entry portal at {entry.position}"
            )
        return replace(scene, start_position=op.pos)

    raise ValidationError(f"unknown edit op {op!r}")


# -- validation -----------------------------------------------------------

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    code: str
    severity: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == SEVERITY_ERROR]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == SEVERITY_WARNING]

    @property
    def ok(self) -> bool:
        return not self.errors


def flood_fill(scene: Scene, start: Coord) -> set[Coord]:
    """4-connected floor tiles reachable from start (including start)."""
    if not scene.in_bounds(start) or not scene.is_floor(start):
        return set()
    seen = {start}
    stack = [start]
    while stack:
        x, y = stack.pop()
        for nx, ny in ((x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)):
            pos = (nx, ny)
            if pos in seen or not scene.in_bounds(pos):
                continue
            if scene.tiles[ny][nx] == FLOOR:
                seen.add(pos)
                stack.append(pos)
    return seen


def validate_scene(scene: Scene, kb: KnowledgeBase) -> ValidationReport:
    """Report every problem in a scene; never raises.

    Hard errors (missing/duplicate entry, unreachable exit, out-of-bounds
    or badly-placed entities, dangling references) make a scene unplayable;
    goal satisfiability is only a warning because designers may rely on
    objects created during play.
    """
    findings: list[Finding] = []

    def err(code: str, message: str):
        findings.append(Finding(code, SEVERITY_ERROR, message))

    def warn(code: str, message: str):
        findings.append(Finding(code, SEVERITY_WARNING, message))

    entries = [p for p in scene.portals if p.kind == ENTRY]
    exits = scene.exit_portals()
    if not entries:
        err("missing-entry", "scene has no entry portal")
    elif len(entries) > 1:
        err("multiple-entry", f"scene has {len(entries)} entry portals")
    if not exits:
        err("missing-exit", "scene has no exit portal")

    if entries and scene.start_position != entries[0].position:
        err("start-mismatch", "start position does not coincide with the entry portal")

    def check_pos(what: str, pos: Coord):
        if not scene.in_bounds(pos):
            err("out-of-bounds", f"{what} at {pos} is outside the grid")
        elif not scene.is_floor(pos):
            err("non-floor", f"{what} at {pos} is not on a floor tile")

    for p in scene.portals:
        check_pos(f"{p.kind} portal", p.position)
    for pos in scene.monster_spawns:
        check_pos("monster spawn", pos)

    placed: list = []
    for instance_id in scene.instances:
        if instance_id not in kb.instances:
            err("dangling-instance", f"instance {instance_id} is unknown to the knowledge base")
            continue
        inst = kb.instances[instance_id]
        if inst.type not in kb.object_types:
            err("dangling-type", f"instance {instance_id} has unknown type {inst.type}")
            continue
        placed.append(inst)
        check_pos(kb.object_types[inst.type].name, inst.position)

    if entries and scene.in_bounds(entries[0].position) and scene.is_floor(entries[0].position):
        reachable = flood_fill(scene, entries[0].position)
        for p in exits:
            if p.position not in reachable:
                err("unreachable-exit", f"exit portal at {p.position} is not reachable from the entry")

    for goal in scene.goals:
        goal_obj = kb.find_goal(goal)
        if goal_obj is None:
            warn("goal-unsatisfiable", f"goal {goal!r} is not defined in the knowledge base")
            continue
        if not _goal_satisfiable(scene, kb, placed, goal_obj.id):
            warn("goal-unsatisfiable", f"no placed objects can lead to goal {goal!r}")

    return ValidationReport(tuple(findings))


def _goal_satisfiable(scene: Scene, kb: KnowledgeBase, placed, goal_id: int) -> bool:
    """Relaxed-plan check: can the placed objects ever produce the goal?

    Computes the closure of obtainable (type name, state) facts under every
    type-level POAG, treating availability as a set (consumption and
    per-instance overrides are ignored; this is a warning, so optimism is
    the right bias) and non-object prerequisites as satisfiable.
    """
    have: set[tuple[str, str | None]] = set()
    for inst in placed:
        name = kb.object_types[inst.type].name
        if inst.state_tags:
            have.update((name, tag) for tag in inst.state_tags)
        have.add((name, None))

    def holds(name: str, state: str | None) -> bool:
        if state is None:
            return any(n == name for n, _ in have)
        return (name, state) in have

    poags = list(kb.poags.values())
    changed = True
    while changed:
        changed = False
        for poag in poags:
            item_name = kb.object_types[poag.item].name
            if not holds(item_name, None):
                continue
            ok = all(
                p.kind == ACTION_DONE or holds(p.name, p.state)
                for p in poag.prerequisites
            )
            if not ok:
                continue
            if poag.goal == goal_id:
                return True
            for type_id, state in poag.outcome:
                fact = (kb.object_types[type_id].name, state)
                if fact not in have:
                    have.add(fact)
                    if state is not None:
                        have.add((fact[0], None))
                    changed = True
    return False


# -- serialization --------------------------------------------------------

def scene_to_doc(scene: Scene, kb: KnowledgeBase | None = None) -> dict:
    """Scene as a JSON-able document; embeds the knowledge base when given.

    Pass the knowledge base whenever the file should be playable on its
    own (instances resolve their types and POAGs through it).
    """
    doc: dict = {
        "id": scene.id,
        "name": scene.name,
        "width": scene.width,
        "height": scene.height,
        "tiles": list(scene.tiles),
        "portals": [
            {
                "kind": p.kind,
                "pos": list(p.position),
                **({"target": p.target_scene} if p.target_scene else {}),
            }
            for p in scene.portals
        ],
        "monster_spawns": [list(pos) for pos in scene.monster_spawns],
        "goals": list(scene.goals),
        "start_position": list(scene.start_position) if scene.start_position else None,
        "instances": [],
    }
    if kb is not None:
        for instance_id in scene.instances:
            inst = kb.instance(instance_id)
            entry: dict = {
                "id": inst.id,
                "type": kb.object_type(inst.type).name,
                "pos": list(inst.position),
            }
            if inst.state_tags:
                entry["states"] = sorted(inst.state_tags)
            if inst.overrides:
                entry["overrides"] = {
                    str(pid): (None if ov is None else poag_to_doc(kb, ov))
                    for pid, ov in sorted(inst.overrides.items())
                }
            doc["instances"].append(entry)
        knowledge = kb_to_doc(kb)
        if any(knowledge.values()):
            doc["knowledge"] = knowledge
    return doc


def poag_to_doc(kb: KnowledgeBase, poag: Poag, with_id: bool = False) -> dict:
    doc: dict = {
        "item": kb.object_type(poag.item).name,
        "action": kb.action(poag.action).verb,
        "prerequisites": [
            {"kind": p.kind, "name": p.name, **({"state": p.state} if p.state else {})}
            for p in poag.prerequisites
        ],
        "outcome": [
            {"name": kb.object_type(t).name, **({"state": s} if s else {})}
            for t, s in poag.outcome
        ],
    }
    if poag.goal is not None:
        doc["goal"] = kb.goal(poag.goal).description
    if with_id:
        doc["id"] = poag.id
    return doc


def kb_to_doc(kb: KnowledgeBase) -> dict:
    """Serializable view of the knowledge entities (instances excluded)."""
    types = []
    for t in sorted(kb.object_types.values(), key=lambda t: t.id):
        entry: dict = {"name": t.name}
        if t.parent is not None:
            entry["parent"] = kb.object_type(t.parent).name
        if t.recipe:
            entry["recipe"] = [{"shape": s, "transform": tr} for s, tr in t.recipe]
        if t.is_custom:
            entry["custom"] = True
        if t.auto_registered:
            entry["auto"] = True
        types.append(entry)
    attached = {pid for ids in kb.poags_by_type.values() for pid in ids}
    return {
        "types": types,
        "actions": [a.verb for a in sorted(kb.actions.values(), key=lambda a: a.id)],
        "goals": [g.description for g in sorted(kb.goals.values(), key=lambda g: g.id)],
        "poags": [
            poag_to_doc(kb, kb.poags[pid], with_id=True) for pid in sorted(attached)
        ],
    }


def _require(condition: bool, message: str):
    if not condition:
        raise ValidationError(message)


def kb_from_doc(doc: Mapping, kb: KnowledgeBase) -> dict[int, int]:
    """Load a knowledge section into ``kb``; returns {doc poag id -> kb poag id}."""
    for entry in doc.get("types", ()):
        name = entry["name"]
        parent_name = entry.get("parent")
        parent = None
        if parent_name:
            parent_type = kb.find_type_by_name(parent_name)
            _require(parent_type is not None, f"type {name!r} references unknown parent {parent_name!r}")
            parent = parent_type.id
        if kb.find_type(name, parent) is None:
            recipe = [(r["shape"], r["transform"]) for r in entry.get("recipe", [])] or None
            kb.define_object_type(name, parent, recipe, auto_registered=bool(entry.get("auto")))
    for verb in doc.get("actions", ()):
        kb.define_action(verb)
    for goal in doc.get("goals", ()):
        kb.define_goal(goal)
    poag_ids: dict[int, int] = {}
    for entry in doc.get("poags", ()):
        poag, item_id = poag_from_doc(entry, kb)
        existing = _find_equal_poag(kb, item_id, poag)
        new_id = existing if existing is not None else kb.attach_poag(item_id, poag)
        if "id" in entry:
            poag_ids[int(entry["id"])] = new_id
    return poag_ids


def _find_equal_poag(kb: KnowledgeBase, item_id: int, poag: Poag) -> int | None:
    """Structural duplicate check, so merging scene files stays idempotent."""
    for pid in kb.poags_by_type.get(item_id, ()):
        other = kb.poags[pid]
        if (
            other.action == poag.action
            and other.goal == poag.goal
            and sorted(other.prerequisites, key=repr) == sorted(poag.prerequisites, key=repr)
            and sorted(other.outcome, key=repr) == sorted(poag.outcome, key=repr)
        ):
            return pid
    return None


def poag_from_doc(entry: Mapping, kb: KnowledgeBase) -> tuple[Poag, int]:
    item = kb.find_type_by_name(entry["item"])
    _require(item is not None, f"POAG references unknown item {entry['item']!r}")
    action = kb.define_action(entry["action"])
    goal = kb.define_goal(entry["goal"]) if entry.get("goal") else None
    prereqs = tuple(
        Prerequisite(
            kind=p.get("kind", "object-present"),
            name=normalize_term(p["name"]),
            state=normalize_term(p["state"]) if p.get("state") else None,
        )
        for p in entry.get("prerequisites", ())
    )
    outcome = tuple(
        (kb.ensure_type(o["name"]), normalize_term(o["state"]) if o.get("state") else None)
        for o in entry.get("outcome", ())
    )
    return (
        Poag(item=item.id, action=action, prerequisites=prereqs, outcome=outcome, goal=goal),
        item.id,
    )


def scene_from_doc(doc: Mapping) -> tuple[Scene, KnowledgeBase]:
    """Materialize a scene document into a fresh knowledge base.

    Instance and POAG ids are reassigned during materialization (override
    keys are remapped alongside), so loading is deterministic regardless
    of what the authoring knowledge base looked like.
    """
    kb = KnowledgeBase()
    scenes, _ = load_world([doc], kb)
    return scenes[str(doc["id"])], kb


def load_world(docs: Iterable[Mapping], kb: KnowledgeBase | None = None) -> tuple[dict[str, Scene], KnowledgeBase]:
    """Materialize several scene documents into one shared knowledge base."""
    kb = kb or KnowledgeBase()
    scenes: dict[str, Scene] = {}
    for doc in docs:
        scene_id = str(doc["id"])
        width, height = int(doc["width"]), int(doc["height"])
        tiles = tuple(doc["tiles"])
        _require(len(tiles) == height, "tile rows do not match height")
        _require(all(len(row) == width for row in tiles), "tile row width mismatch")
        _require(
            all(ch in TILE_NAMES for row in tiles for ch in row),
            "tiles may only contain '.', '#' and ' '",
        )
        poag_ids = kb_from_doc(doc.get("knowledge", {}), kb)
        instance_ids = []
        for entry in doc.get("instances", ()):
            type_id = kb.ensure_type(entry["type"])
            overrides: dict[int, Poag | None] = {}
            for key, value in (entry.get("overrides") or {}).items():
                doc_pid = int(key)
                _require(doc_pid in poag_ids, f"override references unknown POAG {doc_pid}")
                if value is None:
                    overrides[poag_ids[doc_pid]] = None
                else:
                    overrides[poag_ids[doc_pid]] = poag_from_doc(value, kb)[0]
            instance_ids.append(
                kb.instantiate(
                    type_id,
                    scene_id,
                    tuple(entry["pos"]),
                    overrides=overrides,
                    state_tags=entry.get("states", ()),
                )
            )
        portals = tuple(
            Portal(kind=p["kind"], position=tuple(p["pos"]), target_scene=p.get("target"))
            for p in doc.get("portals", ())
        )
        scenes[scene_id] = Scene(
            id=scene_id,
            name=str(doc.get("name", scene_id)),
            width=width,
            height=height,
            tiles=tiles,
            instances=tuple(instance_ids),
            portals=portals,
            monster_spawns=tuple(tuple(pos) for pos in doc.get("monster_spawns", ())),
            goals=tuple(doc.get("goals", ())),
            start_position=tuple(doc["start_position"]) if doc.get("start_position") else None,
        )
    return scenes, kb
