"""Turning sessions into commonsense assertions.

Every rule definition in a session (define-poag / define-combination)
expands into relation triples over normalized terms plus one rendered
sentence, e.g. Table-style rule "blender / blend / orange -> orange juice"
becomes, among others, a HasOutcome assertion with the sentence "the
result of blending an orange with a blender, is orange juice". The export
format is TSV: relation, two arguments, sentence, provenance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .knowledge import ACTION_DONE, OBJECT_PRESENT
from .session import Session
from .text import gerund, join_terms, normalize_term, render_term, with_article

HAS_PREREQUISITE = "HasPrerequisite"
HAS_OUTCOME = "HasOutcome"
FACILITATES_GOAL = "FacilitatesGoal"
USED_FOR = "UsedFor"

RELATIONS = (HAS_PREREQUISITE, HAS_OUTCOME, FACILITATES_GOAL, USED_FOR)


@dataclass(frozen=True)
class Assertion:
    relation: str
    arguments: tuple[str, ...]
    sentence: str
    provenance: tuple[str, int]  # (session id, action seq)

    def to_tsv_row(self) -> str:
        session_id, seq = self.provenance
        args = list(self.arguments) + ["", ""]
        return "\t".join(
            [self.relation, args[0], args[1], self.sentence, f"{session_id}:{seq}"]
        )


def _prereq_terms(entries) -> list[tuple[str, str]]:
    """(kind, rendered term) pairs for prerequisite-like payload entries."""
    out = []
    for p in entries:
        kind = p.get("kind", OBJECT_PRESENT)
        term = normalize_term(render_term(p["name"], p.get("state")))
        out.append((kind, term))
    return out


def render_sentence(action: str, item: str, prereqs: list[tuple[str, str]], outcomes: list[str]) -> str:
    """"the result of <gerund> <prerequisites> with <item>, is <outcome>".

    Object prerequisites and the item get an indefinite article; states and
    done-actions read better bare. An empty outcome renders as "nothing".
    """
    words = ["the result of", gerund(action)]
    phrases = [
        with_article(term) if kind == OBJECT_PRESENT else term for kind, term in prereqs
    ]
    if phrases:
        words.append(join_terms(phrases))
    words.extend(["with", with_article(item)])
    outcome = join_terms(outcomes) if outcomes else "nothing"
    return " ".join(words) + f", is {outcome}"


def extract_assertions(session: Session) -> list[Assertion]:
    """Expand every rule definition in the session into assertions.

    Per rule: one HasPrerequisite per prerequisite, one HasOutcome per
    outcome, one FacilitatesGoal per outcome when a goal is present, and
    always one UsedFor(item, action).
    """
    assertions: list[Assertion] = []
    for act in session.actions:
        if act.kind not in ("define-poag", "define-combination"):
            continue
        payload = act.payload
        item = normalize_term(payload["item"])
        verb = normalize_term(payload["action"])
        prereq_key = "prerequisites" if act.kind == "define-poag" else "ingredients"
        raw_prereqs = payload.get(prereq_key, ())
        if act.kind == "define-combination":
            raw_prereqs = [{**p, "kind": OBJECT_PRESENT} for p in raw_prereqs]
        prereqs = _prereq_terms(raw_prereqs)
        outcomes = [
            normalize_term(render_term(o["name"], o.get("state")))
            for o in payload.get("outcome", ())
        ]
        goal = normalize_term(payload["goal"]) if payload.get("goal") else None
        sentence = render_sentence(verb, item, prereqs, outcomes)
        provenance = (session.id, act.seq)

        activity = f"{item} {verb}"
        consumed = [term for kind, term in prereqs if kind != ACTION_DONE]
        with_prereqs = (
            f"{activity} with {join_terms(consumed)}" if consumed else activity
        )
        for _kind, term in prereqs:
            assertions.append(
                Assertion(HAS_PREREQUISITE, (activity, term), sentence, provenance)
            )
        for term in outcomes:
            assertions.append(
                Assertion(HAS_OUTCOME, (with_prereqs, term), sentence, provenance)
            )
        if goal:
            for term in outcomes:
                assertions.append(
                    Assertion(FACILITATES_GOAL, (term, goal), sentence, provenance)
                )
        assertions.append(Assertion(USED_FOR, (item, verb), sentence, provenance))
    return assertions


def assertions_to_tsv(assertions: list[Assertion]) -> str:
    return "".join(a.to_tsv_row() + "\n" for a in assertions)


def assertion_to_doc(assertion: Assertion) -> dict:
    return {
        "relation": assertion.relation,
        "arguments": list(assertion.arguments),
        "sentence": assertion.sentence,
        "session": assertion.provenance[0],
        "seq": assertion.provenance[1],
    }
