"""Designer/player sessions and their XML interchange format.

A session is the ordered log of everything a designer (or player) did:
type and rule definitions, object placements, tile edits, play events.
Payloads are name-based and self-contained, so a session can be replayed
into a fresh knowledge base anywhere.

The wire format is XML (root ``<gecka-session format="gecka3d-1">``,
described attribute-by-attribute in ``docs/session-xml.md``). Export is
canonical: fixed attribute order, 2-space indent, default values omitted.
Equal sessions therefore serialize to identical bytes, while the parser
stays tolerant of attribute reordering and whitespace and reports schema
problems with source line numbers.
"""

from __future__ import annotations

import xml.parsers.expat
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Mapping

from .errors import SessionFormatError
from .knowledge import KnowledgeBase, OBJECT_PRESENT, PREREQ_KINDS
from .scene import (
    AddGoal,
    AddSpawn,
    EditOp,
    MAX_SIZE,
    PlaceInstance,
    PlacePortal,
    RemoveInstance,
    Scene,
    SetStart,
    SetTile,
    TILE_NAMES,
    _apply,
    new_scene,
    poag_from_doc,
    poag_to_doc,
)

FORMAT_ID = "gecka3d-1"

ACTION_KINDS = (
    "place-object",
    "define-type",
    "define-poag",
    "define-combination",
    "edit-tile",
    "place-portal",
    "play-event",
)

EDIT_OPS = ("set-tile", "remove-instance", "add-spawn", "add-goal", "set-start")


@dataclass(frozen=True)
class SessionAction:
    seq: int
    kind: str
    payload: dict


@dataclass
class Session:
    id: str
    designer: str
    timestamp: str  # ISO-8601, UTC
    scenes: list[str] = field(default_factory=list)
    actions: list[SessionAction] = field(default_factory=list)

    def append(self, kind: str, payload: dict) -> SessionAction:
        action = SessionAction(seq=len(self.actions) + 1, kind=kind, payload=payload)
        self.actions.append(action)
        return action


def utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def new_session(session_id: str, designer: str, timestamp: str | None = None) -> Session:
    return Session(id=session_id, designer=designer, timestamp=timestamp or utc_now())


def _check_timestamp(value: str, line: int | None = None):
    try:
        parsed = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        raise SessionFormatError(f"bad timestamp {value!r}", line) from None
    if parsed.tzinfo is None or parsed.utcoffset() != timezone.utc.utcoffset(None):
        raise SessionFormatError(f"timestamp {value!r} is not UTC", line)


# -- payload schemas ----------------------------------------------------------
#
# Each validator normalizes a raw payload mapping into its canonical dict
# shape (ints cast, optional keys dropped when empty) or raises
# SessionFormatError. The XML and JSON paths share them.

def _str_field(payload, key, line, required=True, default=""):
    if key not in payload:
        if required:
            raise SessionFormatError(f"missing attribute {key!r}", line)
        return default
    return str(payload[key])


def _int_field(payload, key, line):
    try:
        return int(payload[key])
    except KeyError:
        raise SessionFormatError(f"missing attribute {key!r}", line) from None
    except (TypeError, ValueError):
        raise SessionFormatError(f"attribute {key!r} must be an integer", line) from None


def _term_list(raw, line, *, kinded: bool) -> list[dict]:
    out = []
    for entry in raw:
        item: dict = {}
        if kinded:
            kind = str(entry.get("kind", OBJECT_PRESENT))
            if kind not in PREREQ_KINDS:
                raise SessionFormatError(f"unknown prerequisite kind {kind!r}", line)
            item["kind"] = kind
        item["name"] = _str_field(entry, "name", line)
        if entry.get("state"):
            item["state"] = str(entry["state"])
        out.append(item)
    return out


def _validate_define_type(payload, line):
    out = {"name": _str_field(payload, "name", line)}
    if payload.get("parent"):
        out["parent"] = str(payload["parent"])
    if payload.get("recipe"):
        out["recipe"] = [
            {"shape": _str_field(r, "shape", line), "transform": _str_field(r, "transform", line)}
            for r in payload["recipe"]
        ]
    return out


def _validate_define_poag(payload, line):
    out = {
        "item": _str_field(payload, "item", line),
        "action": _str_field(payload, "action", line),
        "prerequisites": _term_list(payload.get("prerequisites", ()), line, kinded=True),
        "outcome": _term_list(payload.get("outcome", ()), line, kinded=False),
    }
    if payload.get("goal"):
        out["goal"] = str(payload["goal"])
    return out


def _validate_define_combination(payload, line):
    return {
        "item": _str_field(payload, "item", line),
        "action": _str_field(payload, "action", line),
        "ingredients": _term_list(payload.get("ingredients", ()), line, kinded=False),
        "outcome": _term_list(payload.get("outcome", ()), line, kinded=False),
    }


def _validate_place_object(payload, line):
    out = {
        "scene": _str_field(payload, "scene", line),
        "type": _str_field(payload, "type", line),
        "x": _int_field(payload, "x", line),
        "y": _int_field(payload, "y", line),
    }
    if payload.get("states"):
        out["states"] = [str(s) for s in payload["states"]]
    overrides = payload.get("overrides")
    if overrides:
        out_overrides = {}
        for key, value in overrides.items():
            try:
                pid = str(int(key))
            except (TypeError, ValueError):
                raise SessionFormatError(f"override key {key!r} must be a POAG id", line) from None
            out_overrides[pid] = None if value is None else _validate_define_poag(value, line)
        out["overrides"] = out_overrides
    return out


def _validate_edit_tile(payload, line):
    op = _str_field(payload, "op", line)
    if op not in EDIT_OPS:
        raise SessionFormatError(f"unknown edit op {op!r}", line)
    out = {"scene": _str_field(payload, "scene", line), "op": op}
    if op == "set-tile":
        out["x"] = _int_field(payload, "x", line)
        out["y"] = _int_field(payload, "y", line)
        kind = _str_field(payload, "tile", line)
        if kind not in TILE_NAMES.values():
            raise SessionFormatError(f"unknown tile kind {kind!r}", line)
        out["tile"] = kind
    elif op in ("add-spawn", "set-start"):
        out["x"] = _int_field(payload, "x", line)
        out["y"] = _int_field(payload, "y", line)
    elif op == "remove-instance":
        out["ref"] = _int_field(payload, "ref", line)
    elif op == "add-goal":
        out["goal"] = _str_field(payload, "goal", line)
    return out


def _validate_place_portal(payload, line):
    out = {
        "scene": _str_field(payload, "scene", line),
        "kind": _str_field(payload, "kind", line),
        "x": _int_field(payload, "x", line),
        "y": _int_field(payload, "y", line),
    }
    if out["kind"] not in ("entry", "exit"):
        raise SessionFormatError(f"unknown portal kind {out['kind']!r}", line)
    if payload.get("target"):
        out["target"] = str(payload["target"])
    return out


def _validate_play_event(payload, line):
    data = payload.get("data", {})
    if not isinstance(data, Mapping):
        raise SessionFormatError("event data must be a mapping", line)
    return {
        "game": _str_field(payload, "game", line),
        "turn": _int_field(payload, "turn", line),
        "kind": _str_field(payload, "kind", line),
        "data": {str(k): str(v) for k, v in data.items()},
    }


_VALIDATORS: dict[str, Callable] = {
    "define-type": _validate_define_type,
    "define-poag": _validate_define_poag,
    "define-combination": _validate_define_combination,
    "place-object": _validate_place_object,
    "edit-tile": _validate_edit_tile,
    "place-portal": _validate_place_portal,
    "play-event": _validate_play_event,
}


def validate_payload(kind: str, payload: Mapping, line: int | None = None) -> dict:
    if kind not in ACTION_KINDS:
        raise SessionFormatError(f"unknown action kind {kind!r}", line)
    return _VALIDATORS[kind](payload, line)


# -- canonical XML export -----------------------------------------------------

def _esc(value) -> str:
    return (
        str(value)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


class _Writer:
    def __init__(self):
        self.lines = ['<?xml version="1.0" encoding="UTF-8"?>']
        self.depth = 0

    def tag(self, name: str, attrs: list[tuple[str, object]], children=None):
        pad = "  " * self.depth
        rendered = "".join(f' {k}="{_esc(v)}"' for k, v in attrs if v is not None)
        if not children:
            self.lines.append(f"{pad}<{name}{rendered}/>")
            return
        self.lines.append(f"{pad}<{name}{rendered}>")
        self.depth += 1
        children()
        self.depth -= 1
        self.lines.append(f"{pad}</{name}>")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _write_terms(w: _Writer, tag: str, terms, *, kinded: bool):
    for t in terms:
        attrs = []
        if kinded and t["kind"] != OBJECT_PRESENT:
            attrs.append(("kind", t["kind"]))
        attrs.append(("name", t["name"]))
        if t.get("state"):
            attrs.append(("state", t["state"]))
        w.tag(tag, attrs)


def _write_poag(w: _Writer, payload: dict):
    def body():
        _write_terms(w, "prereq", payload["prerequisites"], kinded=True)
        _write_terms(w, "outcome", payload["outcome"], kinded=False)

    attrs = [("item", payload["item"]), ("action", payload["action"])]
    if payload.get("goal"):
        attrs.append(("goal", payload["goal"]))
    has_children = payload["prerequisites"] or payload["outcome"]
    w.tag("poag", attrs, body if has_children else None)


def _write_action_payload(w: _Writer, kind: str, payload: dict):
    if kind == "define-type":
        def body():
            for r in payload.get("recipe", ()):
                w.tag("shape", [("form", r["shape"]), ("transform", r["transform"])])

        attrs = [("name", payload["name"])]
        if payload.get("parent"):
            attrs.append(("parent", payload["parent"]))
        w.tag("type", attrs, body if payload.get("recipe") else None)
    elif kind == "define-poag":
        _write_poag(w, payload)
    elif kind == "define-combination":
        def body():
            _write_terms(w, "ingredient", payload["ingredients"], kinded=False)
            _write_terms(w, "outcome", payload["outcome"], kinded=False)

        attrs = [("item", payload["item"]), ("action", payload["action"])]
        w.tag("combination", attrs, body if payload["ingredients"] or payload["outcome"] else None)
    elif kind == "place-object":
        def body():
            for s in payload.get("states", ()):
                w.tag("state", [("tag", s)])
            for pid in sorted(payload.get("overrides", {}), key=int):
                value = payload["overrides"][pid]
                if value is None:
                    w.tag("override", [("poag", pid), ("op", "removed")])
                else:
                    w.tag(
                        "override",
                        [("poag", pid), ("op", "replaced")],
                        lambda v=value: _write_poag(w, v),
                    )

        attrs = [
            ("scene", payload["scene"]),
            ("type", payload["type"]),
            ("x", payload["x"]),
            ("y", payload["y"]),
        ]
        w.tag("place", attrs, body if payload.get("states") or payload.get("overrides") else None)
    elif kind == "edit-tile":
        attrs = [("scene", payload["scene"]), ("op", payload["op"])]
        for key in ("x", "y", "tile", "ref", "goal"):
            if key in payload:
                attrs.append((key, payload[key]))
        w.tag("tile", attrs)
    elif kind == "place-portal":
        attrs = [
            ("scene", payload["scene"]),
            ("kind", payload["kind"]),
            ("x", payload["x"]),
            ("y", payload["y"]),
        ]
        if payload.get("target"):
            attrs.append(("target", payload["target"]))
        w.tag("portal", attrs)
    elif kind == "play-event":
        def body():
            for key in sorted(payload["data"]):
                w.tag("data", [("key", key), ("value", payload["data"][key])])

        attrs = [("game", payload["game"]), ("turn", payload["turn"]), ("kind", payload["kind"])]
        w.tag("event", attrs, body if payload["data"] else None)


def export_session_xml(session: Session) -> str:
    """Canonical XML text; equal sessions export to identical bytes."""
    w = _Writer()

    def body():
        def scenes():
            for scene_id in session.scenes:
                w.tag("scene", [("id", scene_id)])

        w.tag("scenes", [], scenes if session.scenes else None)

        def actions():
            for action in session.actions:
                w.tag(
                    "action",
                    [("seq", action.seq), ("type", action.kind)],
                    lambda a=action: _write_action_payload(w, a.kind, a.payload),
                )

        w.tag("actions", [], actions if session.actions else None)

    w.tag(
        "gecka-session",
        [
            ("format", FORMAT_ID),
            ("id", session.id),
            ("designer", session.designer),
            ("timestamp", session.timestamp),
        ],
        body,
    )
    return w.text()


# -- parsing ------------------------------------------------------------------

class _Node:
    __slots__ = ("tag", "attrs", "children", "line")

    def __init__(self, tag, attrs, line):
        self.tag = tag
        self.attrs = attrs
        self.children = []
        self.line = line


def _parse_tree(text: str) -> _Node:
    parser = xml.parsers.expat.ParserCreate()
    root: list[_Node] = []
    stack: list[_Node] = []

    def start(tag, attrs):
        node = _Node(tag, attrs, parser.CurrentLineNumber)
        if stack:
            stack[-1].children.append(node)
        else:
            root.append(node)
        stack.append(node)

    def end(tag):
        stack.pop()

    def chars(data):
        if data.strip():
            raise SessionFormatError(
                f"unexpected text content {data.strip()[:30]!r}", parser.CurrentLineNumber
            )

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    try:
        parser.Parse(text, True)
    except xml.parsers.expat.ExpatError as exc:
        raise SessionFormatError(f"malformed XML: {exc}", exc.lineno) from None
    if not root:
        raise SessionFormatError("empty document")
    return root[0]


def _terms_from_nodes(nodes, tag, *, kinded: bool):
    out = []
    for node in nodes:
        if node.tag != tag:
            continue
        entry = dict(node.attrs)
        if kinded:
            entry.setdefault("kind", OBJECT_PRESENT)
        out.append(entry)
    return out


def _payload_from_node(kind: str, node: _Node) -> dict:
    raw = dict(node.attrs)
    if kind in ("define-poag",):
        raw["prerequisites"] = _terms_from_nodes(node.children, "prereq", kinded=True)
        raw["outcome"] = _terms_from_nodes(node.children, "outcome", kinded=False)
    elif kind == "define-combination":
        raw["ingredients"] = _terms_from_nodes(node.children, "ingredient", kinded=False)
        raw["outcome"] = _terms_from_nodes(node.children, "outcome", kinded=False)
    elif kind == "define-type":
        recipe = [dict(c.attrs) for c in node.children if c.tag == "shape"]
        if recipe:
            raw["recipe"] = [
                {"shape": r.get("form", ""), "transform": r.get("transform", "")}
                for r in recipe
            ]
    elif kind == "place-object":
        states = [c.attrs.get("tag", "") for c in node.children if c.tag == "state"]
        if states:
            raw["states"] = states
        overrides = {}
        for c in node.children:
            if c.tag != "override":
                continue
            pid = c.attrs.get("poag")
            op = c.attrs.get("op")
            if op == "removed":
                overrides[pid] = None
            elif op == "replaced":
                inner = [g for g in c.children if g.tag == "poag"]
                if len(inner) != 1:
                    raise SessionFormatError(
                        "replaced override needs exactly one <poag> child", c.line
                    )
                overrides[pid] = _payload_from_node("define-poag", inner[0])
            else:
                raise SessionFormatError(f"unknown override op {op!r}", c.line)
        if overrides:
            raw["overrides"] = overrides
    elif kind == "play-event":
        data = {}
        for c in node.children:
            if c.tag != "data":
                continue
            key = c.attrs.get("key")
            if key in data:
                raise SessionFormatError(f"duplicate data key {key!r}", c.line)
            data[key] = c.attrs.get("value", "")
        raw["data"] = data
    return raw


_PAYLOAD_TAGS = {
    "define-type": "type",
    "define-poag": "poag",
    "define-combination": "combination",
    "place-object": "place",
    "edit-tile": "tile",
    "place-portal": "portal",
    "play-event": "event",
}


def parse_session_xml(text: str) -> Session:
    """Parse and validate a session document (inverse of export).

    Tolerant of whitespace and attribute order; strict about the schema:
    unknown action kinds, duplicate or gapped sequence numbers and missing
    attributes all raise :class:`SessionFormatError` with the line number.
    """
    root = _parse_tree(text)
    if root.tag != "gecka-session":
        raise SessionFormatError(f"expected <gecka-session>, found <{root.tag}>", root.line)
    fmt = root.attrs.get("format")
    if fmt != FORMAT_ID:
        raise SessionFormatError(f"unsupported format {fmt!r} (expected {FORMAT_ID!r})", root.line)
    session_id = root.attrs.get("id")
    if not session_id:
        raise SessionFormatError("session id missing", root.line)
    timestamp = root.attrs.get("timestamp", "")
    _check_timestamp(timestamp, root.line)
    session = Session(
        id=session_id,
        designer=root.attrs.get("designer", ""),
        timestamp=timestamp,
    )
    seen_seq: set[int] = set()
    for child in root.children:
        if child.tag == "scenes":
            for node in child.children:
                if node.tag != "scene":
                    raise SessionFormatError(f"unexpected <{node.tag}> in <scenes>", node.line)
                if not node.attrs.get("id"):
                    raise SessionFormatError("scene id missing", node.line)
                session.scenes.append(node.attrs["id"])
        elif child.tag == "actions":
            for node in child.children:
                if node.tag != "action":
                    raise SessionFormatError(f"unexpected <{node.tag}> in <actions>", node.line)
                seq = _int_field(node.attrs, "seq", node.line)
                kind = node.attrs.get("type")
                if kind not in ACTION_KINDS:
                    raise SessionFormatError(f"unknown action kind {kind!r}", node.line)
                if seq in seen_seq:
                    raise SessionFormatError(f"duplicate sequence number {seq}", node.line)
                if seq != len(session.actions) + 1:
                    raise SessionFormatError(
                        f"sequence gap: expected {len(session.actions) + 1}, found {seq}",
                        node.line,
                    )
                seen_seq.add(seq)
                payload_nodes = [c for c in node.children if c.tag == _PAYLOAD_TAGS[kind]]
                if len(payload_nodes) != 1:
                    raise SessionFormatError(
                        f"action {seq} needs exactly one <{_PAYLOAD_TAGS[kind]}> child",
                        node.line,
                    )
                raw = _payload_from_node(kind, payload_nodes[0])
                payload = validate_payload(kind, raw, payload_nodes[0].line)
                session.actions.append(SessionAction(seq=seq, kind=kind, payload=payload))
        else:
            raise SessionFormatError(f"unexpected <{child.tag}>", child.line)
    return session


# -- JSON mirror ----------------------------------------------------------------

def session_to_doc(session: Session) -> dict:
    return {
        "format": FORMAT_ID,
        "id": session.id,
        "designer": session.designer,
        "timestamp": session.timestamp,
        "scenes": list(session.scenes),
        "actions": [
            {"seq": a.seq, "kind": a.kind, "payload": a.payload} for a in session.actions
        ],
    }


def session_from_doc(doc: Mapping) -> Session:
    if doc.get("format", FORMAT_ID) != FORMAT_ID:
        raise SessionFormatError(f"unsupported format {doc.get('format')!r}")
    if not doc.get("id"):
        raise SessionFormatError("session id missing")
    timestamp = str(doc.get("timestamp", ""))
    _check_timestamp(timestamp)
    session = Session(
        id=str(doc["id"]),
        designer=str(doc.get("designer", "")),
        timestamp=timestamp,
        scenes=[str(s) for s in doc.get("scenes", ())],
    )
    for i, entry in enumerate(doc.get("actions", ())):
        seq = _int_field(entry, "seq", None)
        kind = str(entry.get("kind", ""))
        if seq != i + 1:
            raise SessionFormatError(f"sequence gap: expected {i + 1}, found {seq}")
        payload = validate_payload(kind, entry.get("payload", {}))
        session.actions.append(SessionAction(seq=seq, kind=kind, payload=payload))
    return session


# -- edit logging & replay -------------------------------------------------------

def log_edit(session: Session, scene: Scene, op: EditOp, kb: KnowledgeBase) -> SessionAction:
    """Append one editor action to the ambient session log."""
    if scene.id not in session.scenes:
        session.scenes.append(scene.id)
    if isinstance(op, PlaceInstance):
        payload: dict = {
            "scene": scene.id,
            "type": kb.object_type(op.type_id).name,
            "x": op.pos[0],
            "y": op.pos[1],
        }
        if op.state_tags:
            payload["states"] = list(op.state_tags)
        if op.overrides:
            payload["overrides"] = {
                str(pid): (None if p is None else poag_to_doc(kb, p))
                for pid, p in sorted(op.overrides.items())
            }
        return session.append("place-object", validate_payload("place-object", payload))
    if isinstance(op, PlacePortal):
        payload = {"scene": scene.id, "kind": op.kind, "x": op.pos[0], "y": op.pos[1]}
        if op.target_scene:
            payload["target"] = op.target_scene
        return session.append("place-portal", validate_payload("place-portal", payload))
    if isinstance(op, SetTile):
        payload = {"scene": scene.id, "op": "set-tile", "x": op.pos[0], "y": op.pos[1], "tile": op.kind}
    elif isinstance(op, RemoveInstance):
        payload = {"scene": scene.id, "op": "remove-instance", "ref": op.instance_id}
    elif isinstance(op, AddSpawn):
        payload = {"scene": scene.id, "op": "add-spawn", "x": op.pos[0], "y": op.pos[1]}
    elif isinstance(op, AddGoal):
        payload = {"scene": scene.id, "op": "add-goal", "goal": op.goal}
    elif isinstance(op, SetStart):
        payload = {"scene": scene.id, "op": "set-start", "x": op.pos[0], "y": op.pos[1]}
    else:
        raise SessionFormatError(f"cannot log edit {op!r}")
    return session.append("edit-tile", validate_payload("edit-tile", payload))


def _op_from_payload(kind: str, payload: dict, kb: KnowledgeBase):
    if kind == "place-object":
        # override keys are the POAG ids of the authoring knowledge base;
        # replay allocates identically for an identical action sequence
        overrides = {}
        for key, value in payload.get("overrides", {}).items():
            overrides[int(key)] = None if value is None else poag_from_doc(value, kb)[0]
        return PlaceInstance(
            type_id=kb.ensure_type(payload["type"]),
            pos=(payload["x"], payload["y"]),
            state_tags=tuple(payload.get("states", ())),
            overrides=overrides,
        )
    if kind == "place-portal":
        return PlacePortal(
            kind=payload["kind"],
            pos=(payload["x"], payload["y"]),
            target_scene=payload.get("target"),
        )
    op = payload["op"]
    if op == "set-tile":
        return SetTile(pos=(payload["x"], payload["y"]), kind=payload["tile"])
    if op == "remove-instance":
        return RemoveInstance(instance_id=payload["ref"])
    if op == "add-spawn":
        return AddSpawn(pos=(payload["x"], payload["y"]))
    if op == "add-goal":
        return AddGoal(goal=payload["goal"])
    return SetStart(pos=(payload["x"], payload["y"]))


def replay_session(
    session: Session,
    scene_dims: Mapping[str, tuple[int, int]] | None = None,
    default_size: int = MAX_SIZE,
) -> tuple[KnowledgeBase, dict[str, Scene]]:
    """Re-execute a session against a fresh knowledge base.

    Knowledge actions rebuild types/POAGs; edit actions rebuild scenes
    (created on first reference, as blank floor grids sized from
    ``scene_dims`` or ``default_size``). Raising on a dangling reference
    is the point: this is the CLI's deep validation pass. Play events are
    checked for shape only.
    """
    kb = KnowledgeBase()
    scenes: dict[str, Scene] = {}

    def scene_for(scene_id: str) -> Scene:
        if scene_id not in scenes:
            w, h = (scene_dims or {}).get(scene_id, (default_size, default_size))
            scenes[scene_id] = new_scene(scene_id, width=w, height=h)
        return scenes[scene_id]

    for action in session.actions:
        payload = action.payload
        if action.kind == "define-type":
            parent = None
            if payload.get("parent"):
                parent_type = kb.find_type_by_name(payload["parent"])
                if parent_type is None:
                    parent = kb.ensure_type(payload["parent"])
                else:
                    parent = parent_type.id
            recipe = [(r["shape"], r["transform"]) for r in payload.get("recipe", ())] or None
            kb.define_object_type(payload["name"], parent, recipe)
        elif action.kind in ("define-poag", "define-combination"):
            prereq_key = "prerequisites" if action.kind == "define-poag" else "ingredients"
            kb.record_rule(
                item=payload["item"],
                action=payload["action"],
                prerequisites=[
                    (p.get("kind", OBJECT_PRESENT), p["name"], p.get("state"))
                    for p in payload.get(prereq_key, ())
                ],
                outcome=[(o["name"], o.get("state")) for o in payload.get("outcome", ())],
                goal=payload.get("goal"),
            )
        elif action.kind == "play-event":
            continue
        else:
            op = _op_from_payload(action.kind, payload, kb)
            scene_id = payload["scene"]
            scenes[scene_id] = _apply(scene_for(scene_id), op, kb)
    return kb, scenes
