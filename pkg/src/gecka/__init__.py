"""gecka: a headless serious-game engine for commonsense knowledge capture.

Designers author tile scenes whose object semantics live in POAG records
(prerequisite - object - action - goal); players complete goal-driven
runs through seeded dungeons; every authoring and play action serializes
into sessions from which commonsense assertions are extracted.
"""

__version__ = "0.1.0"

from .assertions import Assertion, assertions_to_tsv, extract_assertions
from .corpus import (
    CorpusEntry,
    HttpCountProvider,
    TsvCountProvider,
    bootstrap_corpus,
    default_nouns,
    default_verbs,
    load_term_list,
)
from .dungeon import DungeonParams, generate_dungeon
from .errors import (
    CommandError,
    DuplicateError,
    GameOverError,
    GeckaError,
    InvalidSceneError,
    OutOfBoundsError,
    PlacementError,
    SessionFormatError,
    UnknownReferenceError,
    ValidationError,
)
from .game import (
    Character,
    Combine,
    Command,
    Event,
    GameState,
    Interact,
    MoveTo,
    UsePortal,
    Wait,
    Zombie,
    run_script,
    start_game,
    state_view,
    step,
    trace_header,
    trace_lines,
)
from .knowledge import (
    Action,
    Goal,
    KnowledgeBase,
    ObjectInstance,
    ObjectType,
    Poag,
    Prerequisite,
)
from .pathfind import shortest_path, visible_tiles
from .rng import SplitMix64
from .scene import (
    AddGoal,
    AddSpawn,
    EditOp,
    Finding,
    PlaceInstance,
    PlacePortal,
    Portal,
    RemoveInstance,
    Scene,
    SetStart,
    SetTile,
    ValidationReport,
    apply_edit,
    load_world,
    new_scene,
    scene_from_doc,
    scene_to_doc,
    validate_scene,
)
from .server import PoagStat, create_app, poag_stats
from .session import (
    Session,
    SessionAction,
    export_session_xml,
    new_session,
    parse_session_xml,
    replay_session,
    session_from_doc,
    session_to_doc,
)
from .store import JsonlStore
from .text import normalize_term

__all__ = [name for name in dir() if not name.startswith("_")]
