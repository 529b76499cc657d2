"""Editor mode, headless: paint tiles, place things, validate, serialize.

Every accepted edit is also logged into a session, which is the raw
material the knowledge pipeline consumes later.
"""

from gecka import KnowledgeBase, new_session
from gecka.jsonutil import canonical_dumps
from gecka.scene import (
    AddGoal,
    AddSpawn,
    PlaceInstance,
    PlacePortal,
    SetTile,
    apply_edit,
    new_scene,
    scene_to_doc,
    validate_scene,
)

kb = KnowledgeBase()
kb.record_rule("blender", "blend", [("object-present", "orange", None)],
               [("orange juice", None)], "quench thirst")

session = new_session("demo-editing", designer="demo")
scene = new_scene("kitchen", width=12, height=8)

# a wall with a doorway
for y in range(8):
    if y != 4:
        scene = apply_edit(scene, SetTile((6, y), "wall"), kb, session=session)

scene = apply_edit(scene, PlacePortal("entry", (1, 1)), kb, session=session)
scene = apply_edit(scene, PlacePortal("exit", (10, 6)), kb, session=session)
scene = apply_edit(scene, PlaceInstance(kb.find_type_by_name("blender").id, (2, 2)), kb, session=session)
scene = apply_edit(scene, PlaceInstance(kb.ensure_type("orange"), (3, 2)), kb, session=session)
scene = apply_edit(scene, AddSpawn((10, 1)), kb, session=session)
scene = apply_edit(scene, AddGoal("quench thirst"), kb, session=session)

print("the level:")
for row in scene.tiles:
    print(" ", row)

report = validate_scene(scene, kb)
print(f"\nvalidation: {'ok' if report.ok else 'errors!'}")
for finding in report.findings:
    print(f"  {finding.severity}: {finding.code} - {finding.message}")

print(f"\nedits logged into the session: {len(session.actions)}")
print("scene JSON (first lines):")
print("\n".join(canonical_dumps(scene_to_doc(scene, kb)).splitlines()[:12]))

# Break it on purpose: wall off the exit and watch validation complain.
broken = scene
for pos in [(9, 5), (10, 5), (11, 5), (9, 6), (9, 7)]:
    try:
        broken = apply_edit(broken, SetTile(pos, "wall"), kb)
    except Exception as exc:  # the exit tile itself refuses a wall
        print(f"\nrefused: {exc}")
print("findings after walling off the exit:")
for finding in validate_scene(broken, kb).findings:
    print(f"  {finding.severity}: {finding.code}")
