"""Term normalization and the tiny bits of English used in rendered sentences."""

from __future__ import annotations

import re

_TAG_RE = re.compile(r"<[^>]*>")
_WS_RE = re.compile(r"\s+")

_VOWELS = "aeiou"


def normalize_term(text: str) -> str:
    """Normalize a free-form term: drop markup tags, lowercase, collapse whitespace.

    Idempotent; returns "" for terms that are empty after cleaning.
    """
    cleaned = _TAG_RE.sub(" ", text)
    cleaned = cleaned.lower()
    return _WS_RE.sub(" ", cleaned).strip()


def gerund(verb: str) -> str:
    """Naive -ing form: strip one trailing "e", append "ing".

    Good enough for sentence rendering ("blend" -> "blending"); irregular
    verbs come out wrong ("hit" -> "hiting") and that is accepted.
    """
    if verb.endswith("e"):
        verb = verb[:-1]
    return verb + "ing"


def with_article(term: str) -> str:
    """Prefix an indefinite article chosen by first letter ("an orange")."""
    if not term:
        return term
    article = "an" if term[0] in _VOWELS else "a"
    return f"{article} {term}"


def render_term(name: str, state: str | None = None) -> str:
    """Render a (name, state tag) pair as one term: ("water", "boiled") -> "boiled water"."""
    if state:
        return f"{state} {name}"
    return name


def join_terms(terms: list[str]) -> str:
    """Join terms for a sentence: "a", "a and b", "a, b and c"."""
    if not terms:
        return ""
    if len(terms) == 1:
        return terms[0]
    return ", ".join(terms[:-1]) + " and " + terms[-1]
