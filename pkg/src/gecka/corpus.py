"""Bootstrap verb-noun corpus scored by a pluggable count provider.

The initial designer vocabulary comes from scoring every verb-noun pair
by a joint-likelihood proxy. Live search-engine hit counts are not
reproducible, so the default provider reads an offline TSV
(``verb<TAB>noun<TAB>count``); an HTTP provider exists as a stub
interface only. Seed term lists (1500 nouns, 636 verbs) ship with the
package.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import ValidationError
from .text import normalize_term

logger = logging.getLogger(__name__)

# (verb, noun) -> non-negative score
CountProvider = Callable[[str, str], float]


@dataclass(frozen=True)
class CorpusEntry:
    verb: str
    noun: str
    score: float


def _clean_terms(terms: Iterable[str], what: str) -> list[str]:
    seen = set()
    out = []
    for term in terms:
        cleaned = normalize_term(term)
        if not cleaned or cleaned in seen:
            continue
        seen.add(cleaned)
        out.append(cleaned)
    if not out:
        raise ValidationError(f"{what} list is empty after normalization")
    return out


def bootstrap_corpus(
    nouns: Sequence[str],
    verbs: Sequence[str],
    counts: CountProvider,
) -> list[CorpusEntry]:
    """Score the verb x noun product and rank it.

    Entries are sorted by score descending, ties by (verb, noun); zero
    scores are dropped. A provider failure for one pair is logged and the
    pair skipped rather than aborting the whole sweep.
    """
    nouns = _clean_terms(nouns, "noun")
    verbs = _clean_terms(verbs, "verb")
    entries: list[CorpusEntry] = []
    for verb in verbs:
        for noun in nouns:
            try:
                score = float(counts(verb, noun))
            except Exception as exc:  # provider failures are per-pair, not fatal
                logger.warning("count provider failed for (%s, %s): %s", verb, noun, exc)
                continue
            if score < 0:
                logger.warning("negative count for (%s, %s) ignored", verb, noun)
                continue
            if score > 0:
                entries.append(CorpusEntry(verb=verb, noun=noun, score=score))
    entries.sort(key=lambda e: (-e.score, e.verb, e.noun))
    return entries


def corpus_to_tsv(entries: Sequence[CorpusEntry]) -> str:
    return "".join(f"{e.verb}\t{e.noun}\t{e.score:g}\n" for e in entries)


class TsvCountProvider:
    """Offline counts from a ``verb<TAB>noun<TAB>count`` file; missing pairs score 0."""

    def __init__(self, path: str | Path):
        self.counts: dict[tuple[str, str], float] = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValidationError(f"{path}:{lineno}: expected verb<TAB>noun<TAB>count")
            verb, noun, raw = parts
            try:
                score = float(raw)
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: bad count {raw!r}") from None
            self.counts[(normalize_term(verb), normalize_term(noun))] = score

    def __call__(self, verb: str, noun: str) -> float:
        return self.counts.get((verb, noun), 0.0)


class HttpCountProvider:
    """Interface stub for a live hit-count service; intentionally unimplemented."""

    def __init__(self, base_url: str):
        self.base_url = base_url

    def __call__(self, verb: str, noun: str) -> float:
        raise NotImplementedError(
            "live hit counts are not reproducible; use TsvCountProvider with an offline file"
        )


def load_term_list(path: str | Path) -> list[str]:
    """One term per line; blank lines skipped, everything normalized and deduped."""
    return _clean_terms(Path(path).read_text(encoding="utf-8").splitlines(), str(path))


def _packaged_list(name: str) -> list[str]:
    text = resources.files("gecka").joinpath(f"data/{name}").read_text(encoding="utf-8")
    return _clean_terms(text.splitlines(), name)


def default_nouns() -> list[str]:
    """The shipped 1500-noun seed list."""
    return _packaged_list("nouns.txt")


def default_verbs() -> list[str]:
    """The shipped 636-verb seed list."""
    return _packaged_list("verbs.txt")
