"""Canonical JSON helpers.

Every JSON document the engine writes (scene files, API bodies persisted to
disk) goes through :func:`canonical_dumps` so that equal values serialize to
identical bytes: sorted keys, 2-space indent, trailing newline.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def compact_dumps(doc: Any) -> str:
    """One-line canonical form, used for JSON-lines records."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def content_hash(doc: Any) -> str:
    """sha256 over the compact canonical form, hex-encoded."""
    return hashlib.sha256(compact_dumps(doc).encode("utf-8")).hexdigest()
