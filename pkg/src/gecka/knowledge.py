"""Object types, actions, goals and the POAG records that bind them.

A POAG attaches interaction semantics to an object type: performing an
action on the item, given some prerequisites, yields outcomes and may
facilitate a goal (blender + blend + orange -> orange juice, quench
thirst). POAGs are shared by *type*: attaching one makes it visible to
every existing and future instance of that type and of its subtypes,
because resolution walks the type chain at query time instead of copying
records around. Individual instances can opt out ("moldy bread" loses the
cut rule of "bread") through overrides that remove or replace an inherited
POAG without touching any sibling instance.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DuplicateError, UnknownReferenceError, ValidationError
from .text import normalize_term

MAX_PARENT_DEPTH = 16

# Prerequisite kinds
OBJECT_PRESENT = "object-present"
STATE_HOLDS = "state-holds"
ACTION_DONE = "action-done"
PREREQ_KINDS = (OBJECT_PRESENT, STATE_HOLDS, ACTION_DONE)

# Name reserved for world/emotional states ("the world is happy").
WORLD_OBJECT = "world"


@dataclass(frozen=True)
class ObjectType:
    id: int
    name: str
    parent: int | None = None
    recipe: tuple[tuple[str, str], ...] | None = None
    is_custom: bool = False
    auto_registered: bool = False


@dataclass(frozen=True)
class Action:
    id: int
    verb: str


@dataclass(frozen=True)
class Goal:
    id: int
    description: str


@dataclass(frozen=True)
class Prerequisite:
    """One required condition: an object at hand, a state holding, or an action done.

    ``state`` narrows object-present / state-holds entries to a specific
    state tag; ``None`` accepts any state.
    """

    kind: str
    name: str
    state: str | None = None

    def __post_init__(self):
        if self.kind not in PREREQ_KINDS:
            raise ValidationError(f"unknown prerequisite kind {self.kind!r}")
        if not self.name:
            raise ValidationError("prerequisite name must be non-empty")
        if self.state is not None and self.kind == ACTION_DONE:
            raise ValidationError("state tag is not allowed on action-done prerequisites")


@dataclass(frozen=True)
class Poag:
    """Prerequisite-object-action-goal record, the atomic unit of knowledge.

    ``item`` and ``action`` are always present; prerequisites and outcome
    may be empty and the goal absent. Outcome entries are (type id, state
    tag) pairs.
    """

    item: int
    action: int
    prerequisites: tuple[Prerequisite, ...] = ()
    outcome: tuple[tuple[int, str | None], ...] = ()
    goal: int | None = None
    id: int | None = None


# An instance override maps an inherited POAG id to None (removed) or to a
# replacement Poag.
OverrideMap = dict[int, Optional[Poag]]


@dataclass(frozen=True)
class ObjectInstance:
    id: int
    type: int
    scene: str
    position: tuple[int, int]
    state_tags: frozenset[str] = frozenset()
    overrides: Mapping[int, Optional[Poag]] = field(default_factory=dict)


class KnowledgeBase:
    """Single-writer store of types, actions, goals, POAGs and instances.

    Mutations are plain method calls and must be serialized by the caller;
    reads between mutations are safe to share.
    """

    def __init__(self):
        self.object_types: dict[int, ObjectType] = {}
        self.actions: dict[int, Action] = {}
        self.goals: dict[int, Goal] = {}
        self.poags: dict[int, Poag] = {}
        self.instances: dict[int, ObjectInstance] = {}
        self.poags_by_type: dict[int, list[int]] = {}
        self._ids = {"type": 0, "action": 0, "goal": 0, "poag": 0, "instance": 0}

    def _next_id(self, kind: str) -> int:
        self._ids[kind] += 1
        return self._ids[kind]

    # -- lookups ---------------------------------------------------------

    def object_type(self, type_id: int) -> ObjectType:
        try:
            return self.object_types[type_id]
        except KeyError:
            raise UnknownReferenceError(f"unknown object type {type_id}") from None

    def action(self, action_id: int) -> Action:
        try:
            return self.actions[action_id]
        except KeyError:
            raise UnknownReferenceError(f"unknown action {action_id}") from None

    def goal(self, goal_id: int) -> Goal:
        try:
            return self.goals[goal_id]
        except KeyError:
            raise UnknownReferenceError(f"unknown goal {goal_id}") from None

    def poag(self, poag_id: int) -> Poag:
        try:
            return self.poags[poag_id]
        except KeyError:
            raise UnknownReferenceError(f"unknown POAG {poag_id}") from None

    def instance(self, instance_id: int) -> ObjectInstance:
        try:
            return self.instances[instance_id]
        except KeyError:
            raise UnknownReferenceError(f"unknown instance {instance_id}") from None

    def find_type(self, name: str, parent: int | None = None) -> ObjectType | None:
        """Exact (name, parent) lookup."""
        name = normalize_term(name)
        for t in self.object_types.values():
            if t.name == name and t.parent == parent:
                return t
        return None

    def find_type_by_name(self, name: str) -> ObjectType | None:
        """Latest type registered under this name, regardless of parent."""
        name = normalize_term(name)
        found = None
        for t in self.object_types.values():
            if t.name == name:
                found = t
        return found

    def find_action(self, verb: str) -> Action | None:
        verb = normalize_term(verb)
        for a in self.actions.values():
            if a.verb == verb:
                return a
        return None

    def find_goal(self, description: str) -> Goal | None:
        description = normalize_term(description)
        for g in self.goals.values():
            if g.description == description:
                return g
        return None

    def ancestry(self, type_id: int) -> list[int]:
        """Type chain from the type itself up to the root, nearest first."""
        chain = [type_id]
        t = self.object_type(type_id)
        while t.parent is not None:
            t = self.object_type(t.parent)
            chain.append(t.id)
        return chain

    # -- mutations -------------------------------------------------------

    def define_object_type(
        self,
        name: str,
        parent: int | None = None,
        recipe: Sequence[tuple[str, str]] | None = None,
        *,
        auto_registered: bool = False,
    ) -> int:
        name = normalize_term(name)
        if not name:
            raise ValidationError("object type name is empty after normalization")
        if parent is not None:
            if len(self.ancestry(parent)) >= MAX_PARENT_DEPTH:
                raise ValidationError(
                    f"parent chain of type {parent} already has depth {MAX_PARENT_DEPTH}"
                )
        if self.find_type(name, parent) is not None:
            raise DuplicateError(f"object type {name!r} with this parent already exists")
        type_id = self._next_id("type")
        self.object_types[type_id] = ObjectType(
            id=type_id,
            name=name,
            parent=parent,
            recipe=tuple((str(s), str(t)) for s, t in recipe) if recipe else None,
            is_custom=recipe is not None or parent is not None,
            auto_registered=auto_registered,
        )
        self.poags_by_type[type_id] = []
        return type_id

    def define_action(self, verb: str) -> int:
        verb = normalize_term(verb)
        if not verb:
            raise ValidationError("action verb is empty after normalization")
        existing = self.find_action(verb)
        if existing is not None:
            return existing.id
        action_id = self._next_id("action")
        self.actions[action_id] = Action(id=action_id, verb=verb)
        return action_id

    def define_goal(self, description: str) -> int:
        description = normalize_term(description)
        if not description:
            raise ValidationError("goal description is empty after normalization")
        existing = self.find_goal(description)
        if existing is not None:
            return existing.id
        goal_id = self._next_id("goal")
        self.goals[goal_id] = Goal(id=goal_id, description=description)
        return goal_id

    def _check_poag_refs(self, poag: Poag) -> None:
        self.object_type(poag.item)
        self.action(poag.action)
        if poag.goal is not None:
            self.goal(poag.goal)
        for type_id, _state in poag.outcome:
            self.object_type(type_id)
        for p in poag.prerequisites:
            if not p.name:
                raise ValidationError("prerequisite with empty name")

    def attach_poag(self, type_id: int, poag: Poag) -> int:
        """Register a POAG under a type; visible to all its instances at once.

        Resolution happens at query time, so instances created before or
        after the attach observe the record equally, in every scene.
        """
        self.object_type(type_id)
        if poag.item != type_id:
            raise ValidationError(
                f"POAG item {poag.item} does not match attachment type {type_id}"
            )
        if poag.id is not None:
            raise ValidationError("POAG already has an id; build it without one")
        self._check_poag_refs(poag)
        poag_id = self._next_id("poag")
        stored = replace(poag, id=poag_id)
        self.poags[poag_id] = stored
        self.poags_by_type[type_id].append(poag_id)
        return poag_id

    def register_replacement(self, poag: Poag) -> Poag:
        """Register an instance-local replacement POAG (not attached to any type)."""
        if poag.id is not None:
            raise ValidationError("replacement POAG already has an id")
        self._check_poag_refs(poag)
        poag_id = self._next_id("poag")
        stored = replace(poag, id=poag_id)
        self.poags[poag_id] = stored
        return stored

    def inherited_poag_ids(self, type_id: int) -> list[int]:
        """All POAG ids visible on a type: own first, then ancestors, id order within."""
        ids: list[int] = []
        for ancestor in self.ancestry(type_id):
            ids.extend(sorted(self.poags_by_type.get(ancestor, ())))
        return ids

    def instantiate(
        self,
        type_id: int,
        scene: str,
        position: tuple[int, int],
        overrides: Mapping[int, Poag | None] | None = None,
        state_tags: Iterable[str] = (),
    ) -> int:
        """Create an instance; inherited POAGs are looked up, never copied.

        ``overrides`` maps an inherited POAG id to ``None`` (removed) or to
        a replacement :class:`Poag` (built without an id). Override keys
        must resolve through the type chain; position bounds are the
        owning scene's concern.
        """
        self.object_type(type_id)
        inherited = set(self.inherited_poag_ids(type_id))
        stored_overrides: OverrideMap = {}
        for poag_id, override in (overrides or {}).items():
            if poag_id not in inherited:
                raise UnknownReferenceError(
                    f"override target {poag_id} is not inherited by type {type_id}"
                )
            if override is None:
                stored_overrides[poag_id] = None
            elif override.id is None:
                stored_overrides[poag_id] = self.register_replacement(override)
            elif self.poags.get(override.id) is override:
                stored_overrides[poag_id] = override
            else:
                raise ValidationError(
                    "replacement POAG carries an id that is not registered here"
                )
        instance_id = self._next_id("instance")
        self.instances[instance_id] = ObjectInstance(
            id=instance_id,
            type=type_id,
            scene=scene,
            position=(int(position[0]), int(position[1])),
            state_tags=frozenset(normalize_term(t) for t in state_tags),
            overrides=stored_overrides,
        )
        return instance_id

    def remove_instance(self, instance_id: int) -> None:
        self.instance(instance_id)
        del self.instances[instance_id]

    # -- resolution ------------------------------------------------------

    def effective_poags(self, instance_id: int) -> list[Poag]:
        """POAGs observed by an instance: type chain nearest-first, overrides applied.

        Deterministic: ordered by (ancestor depth, poag id); removed
        entries are absent and replaced entries substituted in place.
        """
        inst = self.instance(instance_id)
        out: list[Poag] = []
        for ancestor in self.ancestry(inst.type):
            for poag_id in sorted(self.poags_by_type.get(ancestor, ())):
                if poag_id in inst.overrides:
                    override = inst.overrides[poag_id]
                    if override is not None:
                        out.append(override)
                else:
                    out.append(self.poags[poag_id])
        return out

    def type_poags(self, type_id: int) -> list[Poag]:
        """POAGs visible on a raw type (no instance overrides)."""
        return [self.poags[pid] for pid in self.inherited_poag_ids(type_id)]

    def resolve_combination(
        self,
        action: int,
        available: Iterable[tuple[int, object]],
        *,
        item: int | None = None,
        instance: int | None = None,
        done_actions: Sequence[str] = (),
    ) -> Poag | None:
        """Match an (item, action, available things) query to one POAG.

        ``available`` is a multiset of (type id, state) entries, where state
        is ``None``, a tag, or a collection of tags. Candidates come from
        the item type's chain (instance overrides applied when ``instance``
        is given); a candidate matches when its action equals ``action``
        and its prerequisite multiset is contained in ``available`` (state
        tags must match exactly when the prerequisite names one;
        action-done prerequisites check ``done_actions``). Of several
        matches the largest prerequisite multiset wins, ties broken by
        smallest POAG id.
        """
        if (item is None) == (instance is None):
            raise ValidationError("pass exactly one of item= or instance=")
        self.action(action)
        if instance is not None:
            candidates = self.effective_poags(instance)
        else:
            assert item is not None
            candidates = self.type_poags(item)

        entries = [_normalize_entry(self, e) for e in available]
        best: Poag | None = None
        for poag in candidates:
            if poag.action != action:
                continue
            if match_prerequisites(self, poag.prerequisites, entries, done_actions) is None:
                continue
            if best is None:
                best = poag
                continue
            if len(poag.prerequisites) > len(best.prerequisites):
                best = poag
            elif (
                len(poag.prerequisites) == len(best.prerequisites)
                and (poag.id or 0) < (best.id or 0)
            ):
                best = poag
        return best

    def goal_facilitators(self, goal_id: int) -> list[int]:
        """Ids of every POAG whose goal is ``goal_id``, ascending."""
        self.goal(goal_id)
        return sorted(pid for pid, p in self.poags.items() if p.goal == goal_id)

    # -- name-based convenience (session replay, fixtures) ----------------

    def ensure_type(self, name: str) -> int:
        """Resolve a type by name, auto-registering (and flagging) unseen names."""
        normalized = normalize_term(name)
        existing = self.find_type_by_name(normalized)
        if existing is not None:
            return existing.id
        return self.define_object_type(normalized, auto_registered=True)

    def record_rule(
        self,
        item: str,
        action: str,
        prerequisites: Sequence[tuple[str, str, str | None]] = (),
        outcome: Sequence[tuple[str, str | None]] = (),
        goal: str | None = None,
    ) -> int:
        """Name-based POAG builder: ensures every referenced entity, then attaches.

        ``prerequisites`` entries are (kind, name, state); ``outcome``
        entries are (type name, state).
        """
        item_id = self.ensure_type(item)
        action_id = self.define_action(action)
        goal_id = self.define_goal(goal) if goal else None
        prereqs = tuple(
            Prerequisite(kind=k, name=normalize_term(n), state=normalize_term(s) if s else None)
            for k, n, s in prerequisites
        )
        outcomes = tuple(
            (self.ensure_type(n), normalize_term(s) if s else None) for n, s in outcome
        )
        poag = Poag(
            item=item_id,
            action=action_id,
            prerequisites=prereqs,
            outcome=outcomes,
            goal=goal_id,
        )
        return self.attach_poag(item_id, poag)


def _normalize_entry(kb: KnowledgeBase, entry: tuple[int, object]) -> tuple[str, frozenset[str]]:
    """Turn an (type id, state) availability entry into (type name, tag set)."""
    type_id, state = entry
    name = kb.object_type(type_id).name
    if state is None:
        tags: frozenset[str] = frozenset()
    elif isinstance(state, str):
        tags = frozenset((state,))
    else:
        tags = frozenset(state)
    return name, tags


def _prereq_matches(prereq: Prerequisite, entry: tuple[str, frozenset[str]]) -> bool:
    name, tags = entry
    if prereq.name != name:
        return False
    if prereq.state is None:
        return True
    return prereq.state in tags


def match_prerequisites(
    kb: KnowledgeBase,
    prerequisites: Sequence[Prerequisite],
    available: Sequence[tuple[int, object] | tuple[str, frozenset[str]]],
    done_actions: Sequence[str] = (),
) -> dict[int, int] | None:
    """Check multiset containment of prerequisites in the available entries.

    Object-present and state-holds prerequisites each claim one distinct
    availability entry (a maximum bipartite matching, so overlapping
    tag constraints are assigned correctly); action-done prerequisites
    are counted against ``done_actions``. Returns {prerequisite index ->
    entry index} for the entry-consuming prerequisites, or None if the
    prerequisites are not contained.
    """
    entries: list[tuple[str, frozenset[str]]] = []
    for e in available:
        if isinstance(e[0], str):
            entries.append(e)  # already normalized
        else:
            entries.append(_normalize_entry(kb, e))

    # action-done prerequisites: multiset containment over verbs
    needed_verbs = Counter(p.name for p in prerequisites if p.kind == ACTION_DONE)
    have_verbs = Counter(done_actions)
    for verb, count in needed_verbs.items():
        if have_verbs[verb] < count:
            return None

    # object prerequisites: bipartite matching, most-specific first for speed
    object_prereqs = [
        (i, p) for i, p in enumerate(prerequisites) if p.kind != ACTION_DONE
    ]
    order = sorted(
        range(len(object_prereqs)),
        key=lambda k: (object_prereqs[k][1].state is None, k),
    )
    owner: dict[int, int] = {}  # entry index -> position in object_prereqs

    def try_assign(k: int, seen: set[int]) -> bool:
        _, prereq = object_prereqs[k]
        for j, entry in enumerate(entries):
            if j in seen or not _prereq_matches(prereq, entry):
                continue
            seen.add(j)
            if j not in owner or try_assign(owner[j], seen):
                owner[j] = k
                return True
        return False

    for k in order:
        if not try_assign(k, set()):
            return None
    return {object_prereqs[k][0]: j for j, k in owner.items()}
