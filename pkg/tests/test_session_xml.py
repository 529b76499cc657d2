import random

import pytest
from hypothesis import given, settings, strategies as st

from gecka.errors import SessionFormatError
from gecka.session import (
    Session,
    export_session_xml,
    new_session,
    parse_session_xml,
    session_from_doc,
    session_to_doc,
    validate_payload,
)

from util import poag_payload, random_session, table1_session


def test_table1_poag_element_shape():
    xml = export_session_xml(table1_session())
    assert '<poag item="blender" action="blend" goal="quench thirst">' in xml
    assert '<prereq name="orange"/>' in xml
    assert '<outcome name="orange juice"/>' in xml


def test_empty_session():
    xml = export_session_xml(new_session("empty", "me", "2026-01-01T00:00:00Z"))
    assert "<scenes/>" in xml and "<actions/>" in xml
    parsed = parse_session_xml(xml)
    assert parsed.actions == [] and parsed.scenes == []


def test_round_trip_table1():
    session = table1_session()
    assert parse_session_xml(export_session_xml(session)) == session


def test_round_trip_random_sample():
    rng = random.Random(11)
    for _ in range(100):
        session = random_session(rng)
        parsed = parse_session_xml(export_session_xml(session))
        assert parsed == session
        # export of the parse is byte-identical (canonical fixed point)
        assert export_session_xml(parsed) == export_session_xml(session)


def test_parse_tolerates_attribute_order_and_whitespace():
    text = """<?xml version="1.0"?>
    <gecka-session designer="d" timestamp="2026-01-01T00:00:00Z" id="x" format="gecka3d-1">
      <scenes>
          <scene   id="s1"/>
      </scenes>
      <actions>
            <action type="define-poag" seq="1">
        <poag action="blend" item="blender">
        <outcome name="orange juice"/><prereq name="orange"/></poag>
         </action>
      </actions>
    </gecka-session>"""
    session = parse_session_xml(text)
    assert session.id == "x"
    assert session.actions[0].payload["item"] == "blender"


def test_duplicate_sequence_reports_line():
    session = new_session("dup", "d", "2026-01-01T00:00:00Z")
    session.append("define-poag", poag_payload("a", "cut", [], [], None))
    session.append("define-poag", poag_payload("b", "cut", [], [], None))
    xml = export_session_xml(session)
    broken = xml.replace('seq="2"', 'seq="1"')
    with pytest.raises(SessionFormatError) as err:
        parse_session_xml(broken)
    assert "duplicate sequence" in str(err.value)
    assert "line" in str(err.value)


def test_sequence_gap_rejected():
    session = new_session("gap", "d", "2026-01-01T00:00:00Z")
    session.append("define-poag", poag_payload("a", "cut", [], [], None))
    session.append("define-poag", poag_payload("b", "cut", [], [], None))
    xml = export_session_xml(session).replace('seq="2"', 'seq="7"')
    with pytest.raises(SessionFormatError) as err:
        parse_session_xml(xml)
    assert "gap" in str(err.value)


def test_unknown_action_kind_rejected():
    xml = export_session_xml(table1_session()).replace(
        'type="define-poag"', 'type="frobnicate"', 1
    )
    with pytest.raises(SessionFormatError) as err:
        parse_session_xml(xml)
    assert "frobnicate" in str(err.value)


def test_malformed_xml_reports_line():
    with pytest.raises(SessionFormatError) as err:
        parse_session_xml("<gecka-session format='gecka3d-1'>\n<broken\n")
    assert err.value.line is not None


def test_bad_timestamp_rejected():
    with pytest.raises(SessionFormatError):
        parse_session_xml(
            '<gecka-session format="gecka3d-1" id="x" designer="d" timestamp="yesterday"/>'
        )
    with pytest.raises(SessionFormatError):
        parse_session_xml(
            '<gecka-session format="gecka3d-1" id="x" designer="d" '
            'timestamp="2026-01-01T00:00:00+08:00"/>'
        )


def test_wrong_format_rejected():
    with pytest.raises(SessionFormatError):
        parse_session_xml(
            '<gecka-session format="gecka3d-9" id="x" designer="d" '
            'timestamp="2026-01-01T00:00:00Z"/>'
        )


def test_escaping_round_trips():
    session = new_session("esc", 'des&ig"ner', "2026-01-01T00:00:00Z")
    session.append(
        "define-poag",
        poag_payload('it<e>m & "q"', "cut", [("a&b", None)], [("<out>", None)], None),
    )
    parsed = parse_session_xml(export_session_xml(session))
    assert parsed == session


def test_json_doc_mirror_round_trip():
    rng = random.Random(5)
    for _ in range(50):
        session = random_session(rng)
        assert session_from_doc(session_to_doc(session)) == session


def test_json_doc_rejects_gaps():
    doc = session_to_doc(table1_session())
    doc["actions"][3]["seq"] = 99
    with pytest.raises(SessionFormatError):
        session_from_doc(doc)


# hypothesis: tiny structured sessions round-trip (complements the seeded sweep)
_term = st.text(alphabet="abcdefgh &<>\"'", min_size=1, max_size=10).filter(str.strip)


@settings(max_examples=60, deadline=None)
@given(
    items=st.lists(
        st.tuples(_term, _term, st.lists(st.tuples(_term, st.booleans()), max_size=2)),
        max_size=4,
    )
)
def test_round_trip_property(items):
    session = new_session("prop", "h", "2026-03-04T05:06:07Z")
    for item, action, prereqs in items:
        session.append(
            "define-poag",
            validate_payload(
                "define-poag",
                {
                    "item": item,
                    "action": action,
                    "prerequisites": [
                        {"kind": "object-present", "name": n, **({"state": "wet"} if s else {})}
                        for n, s in prereqs
                    ],
                    "outcome": [],
                },
            ),
        )
    assert parse_session_xml(export_session_xml(session)) == session
