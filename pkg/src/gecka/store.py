"""Embedded persistence: one append-only JSON-lines file per collection.

Each line is a full record ``{"id", "created_at", "body"}``; the
in-memory index (latest record per id) is rebuilt by replaying the log on
startup. Appends flush and fsync before returning, which is the whole
durability story - files stay greppable and diffable.
"""

from __future__ import annotations

import json
import os
import threading
import time
from pathlib import Path
from typing import Any

from .errors import ValidationError

COLLECTIONS = ("scenes", "sessions", "traces", "assertions")


class JsonlStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._index: dict[str, dict[str, dict]] = {c: {} for c in COLLECTIONS}
        for collection in COLLECTIONS:
            path = self._path(collection)
            if not path.exists():
                continue
            with path.open("r", encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    if not line.strip():
                        continue
                    try:
                        record = json.loads(line)
                    except json.JSONDecodeError as exc:
                        raise ValidationError(f"{path}:{lineno}: corrupt record: {exc}") from None
                    self._index[collection][record["id"]] = record

    def _path(self, collection: str) -> Path:
        if collection not in COLLECTIONS:
            raise ValidationError(f"unknown collection {collection!r}")
        return self.data_dir / f"{collection}.jsonl"

    def put(self, collection: str, record_id: str, body: Any) -> dict:
        record = {
            "id": record_id,
            "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "body": body,
        }
        line = json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        with self._lock:
            with self._path(collection).open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._index[collection][record_id] = record
        return record

    def get(self, collection: str, record_id: str) -> dict | None:
        return self._index[collection].get(record_id)

    def all(self, collection: str) -> list[dict]:
        """Latest record per id, in first-insertion order."""
        return list(self._index[collection].values())

    def count(self, collection: str) -> int:
        return len(self._index[collection])
