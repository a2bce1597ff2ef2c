"""Append-only JSON-lines store of per-element verdicts.

One record per line::

    {"group_hash": "...", "canonical_word": [1, 2, 1], "verdicts": {"reflection_length": 3}}

Later lines for the same key are merged over earlier ones. Unparseable
lines are skipped with a warning, so a torn final write never poisons the
file.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, field

from .core import CoxeterSystem, Word, stats

log = logging.getLogger(__name__)

VERDICTS = ("is_identity", "reflection_length")


@dataclass
class CacheRecord:
    group_hash: str
    canonical_word: tuple
    verdicts: dict = field(default_factory=dict)

    def to_line(self) -> str:
        return json.dumps({
            "group_hash": self.group_hash,
            "canonical_word": list(self.canonical_word),
            "verdicts": self.verdicts,
        }, separators=(",", ":"), sort_keys=True) + "\n"


class ResultCache:
    def __init__(self, path):
        self.path = os.fspath(path)
        self._index = {}
        self._lock = threading.Lock()
        self.hits = 0
        self._load()

    def _load(self):
        try:
            fh = open(self.path, encoding="utf-8")
        except FileNotFoundError:
            return
        with fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    key = (str(obj["group_hash"]), tuple(int(x) for x in obj["canonical_word"]))
                    verdicts = {k: v for k, v in obj["verdicts"].items() if k in VERDICTS}
                except (ValueError, KeyError, TypeError, AttributeError):
                    log.warning("%s:%d: skipping corrupt cache line", self.path, lineno)
                    continue
                self._index.setdefault(key, {}).update(verdicts)

    def __len__(self):
        return len(self._index)

    def get(self, sys: CoxeterSystem, canonical: Word, verdict: str):
        found = self._index.get((sys.digest(), tuple(canonical)), {}).get(verdict)
        if found is not None:
            self.hits += 1
            stats.add("cache_hits")
        return found

    def put(self, sys: CoxeterSystem, canonical: Word, **verdicts):
        key = (sys.digest(), tuple(canonical))
        with self._lock:
            current = self._index.setdefault(key, {})
            new = {k: v for k, v in verdicts.items() if current.get(k) != v}
            if not new:
                return
            current.update(new)
            line = CacheRecord(key[0], key[1], new).to_line().encode()
            # one write on an O_APPEND descriptor keeps concurrent appenders line-atomic
            fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
            try:
                os.write(fd, line)
            finally:
                os.close(fd)
