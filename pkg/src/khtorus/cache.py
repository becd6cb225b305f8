"""On-disk cache of whole-diagram homology tables, one JSON file per (n, m).

Entries carry a schema version, the sign convention they were computed
under and a SHA-256 digest of their payload; anything that fails to match is
recomputed and overwritten.  Writes go through a temp file and ``os.replace``.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

from .integral_homology import AbelianGroup, GradedHomology

SCHEMA_VERSION = 1
ENV_CACHE_DIR = "KHTORUS_CACHE_DIR"


def default_cache_dir() -> Optional[Path]:
    value = os.environ.get(ENV_CACHE_DIR)
    return Path(value) if value else None


def homology_to_groups(H: GradedHomology) -> list:
    return [{"h": h, "q": q, "free_rank": g.free_rank, "torsion": list(g.invariant_factors)}
            for (h, q), g in H.items()]


def groups_to_homology(groups: list) -> GradedHomology:
    return GradedHomology({(e["h"], e["q"]): AbelianGroup(e["free_rank"], tuple(e["torsion"]))
                           for e in groups})


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _digest(payload: dict) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


class HomologyCache:
    def __init__(self, directory, sign: str = "before"):
        self.directory = Path(directory)
        self.sign = sign

    def path(self, n: int, m: int) -> Path:
        return self.directory / f"kh_v{SCHEMA_VERSION}_{self.sign}_n{n}_m{m}.json"

    def read(self, n: int, m: int) -> Optional[GradedHomology]:
        p = self.path(n, m)
        try:
            entry = json.loads(p.read_text())
            payload = entry["payload"]
            if entry.get("digest") != _digest(payload):
                return None
            if payload.get("schema_version") != SCHEMA_VERSION or payload.get("sign") != self.sign:
                return None
            if (payload.get("n"), payload.get("m")) != (n, m):
                return None
            return groups_to_homology(payload["groups"])
        except (OSError, ValueError, KeyError, TypeError):
            return None

    def write(self, n: int, m: int, H: GradedHomology) -> Path:
        payload = {"schema_version": SCHEMA_VERSION, "sign": self.sign, "n": n, "m": m,
                   "groups": homology_to_groups(H)}
        entry = {"payload": payload, "digest": _digest(payload)}
        self.directory.mkdir(parents=True, exist_ok=True)
        p = self.path(n, m)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=p.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(canonical_json(entry))
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return p
