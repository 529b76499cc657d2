"""A headless playthrough: fog, zombies, combining, and winning.

The same engine the server exposes over HTTP, driven directly. Every step
is one turn: player phase, reveal, zombie pursuit, resolution.
"""

from gecka import KnowledgeBase
from gecka.game import Interact, MoveTo, UsePortal, start_game, step, trace_header, trace_lines
from gecka.scene import (
    AddGoal,
    AddSpawn,
    PlaceInstance,
    PlacePortal,
    apply_edit,
    new_scene,
    scene_from_doc,
    scene_to_doc,
)

authoring_kb = KnowledgeBase()
authoring_kb.record_rule("blender", "blend", [("object-present", "orange", None)],
                         [("orange juice", None)], "quench thirst")

draft = new_scene("kitchen", width=14, height=7)
draft = apply_edit(draft, PlacePortal("entry", (1, 1)), authoring_kb)
draft = apply_edit(draft, PlacePortal("exit", (12, 5)), authoring_kb)
draft = apply_edit(draft, PlaceInstance(authoring_kb.find_type_by_name("blender").id, (3, 1)), authoring_kb)
draft = apply_edit(draft, PlaceInstance(authoring_kb.ensure_type("orange"), (3, 2)), authoring_kb)
draft = apply_edit(draft, AddSpawn((1, 6)), authoring_kb)
draft = apply_edit(draft, AddGoal("quench thirst"), authoring_kb)

# play mutates its entity store, so every game materializes its own copy
# from the scene document (the server and CLI do exactly this)
scene, kb = scene_from_doc(scene_to_doc(draft, authoring_kb))
world = {scene.id: scene}
header = trace_header(scene, kb, seed=99)

state = start_game(scene, kb, seed=99)
blender_id, orange_id = scene.instances

# The zombie chases from the far corner, one step behind all the way;
# linger on the blender long enough and it will catch up.
script = [
    MoveTo((3, 1)), MoveTo((3, 1)),          # walk onto the blender
    Interact(instance=blender_id, action="blend"),
] + [MoveTo((12, 5))] * 14 + [UsePortal()]

events = []
for cmd in script:
    if state.status != "running":
        break
    state, new_events = step(state, cmd, kb, world)
    events.extend(new_events)

print("event log:")
for e in events:
    if e.kind in ("move", "zombie-move"):
        continue  # keep the printout short
    print(f"  turn {e.turn:>2}  {e.kind:<16} {e.payload}")

print(f"\nfinal status: {state.status} after {state.turn} turns, "
      f"health {state.character.health}")
print(f"inventory: "
      f"{[kb.object_type(kb.instance(i).type).name for i in state.character.inventory]}")

print("\ntrace (first 5 lines):")
for line in trace_lines(header, events)[:5]:
    print(" ", line)
