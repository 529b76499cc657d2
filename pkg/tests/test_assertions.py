import random

from gecka.assertions import (
    FACILITATES_GOAL,
    HAS_OUTCOME,
    HAS_PREREQUISITE,
    USED_FOR,
    assertions_to_tsv,
    extract_assertions,
)
from gecka.session import new_session

from util import poag_payload, random_session, table1_session


def test_blending_sentence_exact():
    assertions = extract_assertions(table1_session())
    outcome_rows = [a for a in assertions if a.relation == HAS_OUTCOME]
    sentences = {a.sentence for a in outcome_rows}
    assert "the result of blending an orange with a blender, is orange juice" in sentences


def test_sandbag_facilitates_flood_control():
    assertions = extract_assertions(table1_session())
    goals = [a for a in assertions if a.relation == FACILITATES_GOAL]
    assert ("sandbag", "flood control") in {a.arguments for a in goals}


def test_used_for_always_emitted():
    session = new_session("u", "d", "2026-01-01T00:00:00Z")
    session.append("define-poag", poag_payload("bread", "cut", [], [], None))
    assertions = extract_assertions(session)
    assert [a.relation for a in assertions] == [USED_FOR]
    assert assertions[0].arguments == ("bread", "cut")


def test_assertion_count_formula():
    # a session with k rules of p prereqs, o outcomes, g in {0,1} goals
    # yields exactly sum(p + o + o*g + 1) assertions
    rng = random.Random(13)
    for _ in range(30):
        session = new_session("count", "d", "2026-01-01T00:00:00Z")
        expected = 0
        for i in range(rng.randint(0, 6)):
            p, o, g = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 1)
            session.append("define-poag", poag_payload(
                f"item{i}", "cut",
                [(f"pre{j}", None) for j in range(p)],
                [(f"out{j}", None) for j in range(o)],
                "some goal" if g else None,
            ))
            expected += p + o + o * g + 1
        assert len(extract_assertions(session)) == expected


def test_prerequisite_arguments():
    assertions = extract_assertions(table1_session())
    prereqs = [a for a in assertions if a.relation == HAS_PREREQUISITE]
    assert ("bread cut", "knife") in {a.arguments for a in prereqs}
    # state-tagged prerequisite renders with its tag
    assert ("coffee maker fill", "boiled water") in {a.arguments for a in prereqs}


def test_tile_edits_yield_nothing():
    rng = random.Random(3)
    session = new_session("edits", "d", "2026-01-01T00:00:00Z")
    from gecka.session import validate_payload

    session.append("edit-tile", validate_payload(
        "edit-tile", {"scene": "s", "op": "set-tile", "x": 1, "y": 1, "tile": "wall"}))
    session.append("place-portal", validate_payload(
        "place-portal", {"scene": "s", "kind": "entry", "x": 0, "y": 0}))
    assert extract_assertions(session) == []


def test_provenance_resolves():
    session = table1_session()
    for a in extract_assertions(session):
        assert a.provenance[0] == session.id
        assert 1 <= a.provenance[1] <= len(session.actions)


def test_tsv_shape():
    tsv = assertions_to_tsv(extract_assertions(table1_session()))
    lines = tsv.strip().split("\n")
    for line in lines:
        fields = line.split("\t")
        assert len(fields) == 5
        assert fields[0] in (HAS_PREREQUISITE, HAS_OUTCOME, FACILITATES_GOAL, USED_FOR)
        assert ":" in fields[4]
    assert any("the result of blending an orange with a blender, is orange juice" in l
               for l in lines)


def test_combination_actions_extracted_too():
    rng = random.Random(1)
    session = new_session("combo", "d", "2026-01-01T00:00:00Z")
    from gecka.session import validate_payload

    session.append("define-combination", validate_payload("define-combination", {
        "item": "bread slices", "action": "stack",
        "ingredients": [{"name": "cheese"}, {"name": "ham"}],
        "outcome": [{"name": "sandwich"}],
    }))
    assertions = extract_assertions(session)
    relations = [a.relation for a in assertions]
    assert relations == [HAS_PREREQUISITE, HAS_PREREQUISITE, HAS_OUTCOME, USED_FOR]
    sentence = assertions[0].sentence
    assert sentence == "the result of stacking a cheese and a ham with a bread slices, is sandwich"
