"""From designer actions to commonsense: sessions, XML, and assertions.

Rule definitions logged during authoring are serialized to the
`gecka3d-1` XML format and mined into relation assertions with rendered
sentences.
"""

from gecka.assertions import assertions_to_tsv, extract_assertions
from gecka.session import export_session_xml, new_session, parse_session_xml, validate_payload

session = new_session("demo-session", designer="ana")
session.append("define-poag", validate_payload("define-poag", {
    "item": "blender", "action": "blend",
    "prerequisites": [{"kind": "object-present", "name": "orange"}],
    "outcome": [{"name": "orange juice"}],
    "goal": "quench thirst",
}))
session.append("define-poag", validate_payload("define-poag", {
    "item": "kettle", "action": "fill",
    "prerequisites": [{"kind": "object-present", "name": "water"}],
    "outcome": [{"name": "water", "state": "boiled"}],
}))
session.append("define-combination", validate_payload("define-combination", {
    "item": "bread slices", "action": "stack",
    "ingredients": [{"name": "cheese"}, {"name": "ham"}],
    "outcome": [{"name": "sandwich"}],
}))

xml = export_session_xml(session)
print("canonical XML:")
print(xml)

assert parse_session_xml(xml) == session
print("round trip: parse(export(s)) == s\n")

print("extracted assertions (TSV):")
print(assertions_to_tsv(extract_assertions(session)))
