"""Bootstrapping the designer vocabulary from verb-noun pair scores.

Pairs are scored by a pluggable count provider (the shipped default reads
an offline TSV); the ranked product seeds the object/action libraries
designers pick from. The packaged seed lists hold 1500 nouns and 636 verbs.
"""

import tempfile
from pathlib import Path

from gecka.corpus import TsvCountProvider, bootstrap_corpus, corpus_to_tsv, default_nouns, default_verbs

nouns = default_nouns()
verbs = default_verbs()
print(f"shipped seed lists: {len(nouns)} nouns, {len(verbs)} verbs")
print(f"  sample nouns: {', '.join(nouns[:8])} ...")
print(f"  sample verbs: {', '.join(verbs[:8])} ...")

# A tiny offline count table standing in for search-engine hit counts.
counts = """\
cut\tbread\t81200
cut\tpaper\t60400
fill\tkettle\t22100
fill\tbag\t18800
blend\torange\t9650
open\tcan\t151000
stack\tbread slices\t3120
blend\tbrick\t0
"""

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "counts.tsv"
    path.write_text(counts, encoding="utf-8")
    provider = TsvCountProvider(path)
    entries = bootstrap_corpus(
        ["bread", "paper", "kettle", "bag", "orange", "can", "bread slices", "brick"],
        ["cut", "fill", "blend", "open", "stack"],
        provider,
    )

print("\nranked corpus (zero scores dropped):")
print(corpus_to_tsv(entries))
