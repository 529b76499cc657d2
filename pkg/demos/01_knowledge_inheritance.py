"""POAG basics: shared rules, inheritance, and the moldy-bread exception.

A POAG attaches interaction semantics to an object *type*; every instance
of the type (and of its subtypes) observes it immediately, in any scene.
Individual instances can opt out without affecting their siblings.
"""

from gecka import KnowledgeBase

kb = KnowledgeBase()

# A designer teaches the engine what a blender does.
kb.record_rule(
    "blender", "blend",
    prerequisites=[("object-present", "orange", None)],
    outcome=[("orange juice", None)],
    goal="quench thirst",
)

# And what bread is for.
cut_rule = kb.record_rule(
    "bread", "cut",
    prerequisites=[("object-present", "knife", None)],
    outcome=[("bread slices", None)],
)

bread = kb.find_type_by_name("bread").id
plain_1 = kb.instantiate(bread, "kitchen", (2, 3))
plain_2 = kb.instantiate(bread, "pantry", (5, 5))

print("every bread instance inherits the cut rule:")
for inst in (plain_1, plain_2):
    verbs = [kb.action(p.action).verb for p in kb.effective_poags(inst)]
    print(f"  instance {inst}: {verbs}")

# A custom subtype: moldy bread is still bread...
moldy = kb.define_object_type("moldy bread", parent=bread)
moldy_inst = kb.instantiate(moldy, "pantry", (6, 5), overrides={cut_rule: None})

print("\nmoldy bread removed the cut rule for itself only:")
print(f"  moldy instance rules: {[p.id for p in kb.effective_poags(moldy_inst)]}")
print(f"  plain bread still has: {[p.id for p in kb.effective_poags(plain_1)]}")

# Rules attached later reach everyone, the excepted instance included --
# the exception stays keyed to the *old* rule.
toast_rule = kb.record_rule("bread", "toast", outcome=[("toast", None)])
print("\nafter teaching 'toast' to bread:")
for name, inst in [("plain", plain_1), ("moldy", moldy_inst)]:
    verbs = [kb.action(p.action).verb for p in kb.effective_poags(inst)]
    print(f"  {name}: {verbs}")

# Matching: what happens if the player blends an orange in a blender?
blender = kb.find_type_by_name("blender").id
orange = kb.ensure_type("orange")  # the fruit itself enters the world here
blend = kb.find_action("blend").id
match = kb.resolve_combination(blend, [(orange, None)], item=blender)
outcome = kb.object_type(match.outcome[0][0]).name
goal = kb.goal(match.goal).description
print(f"\nblender + blend + orange -> {outcome} (facilitates: {goal})")
