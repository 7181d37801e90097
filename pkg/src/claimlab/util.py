"""Small determinism helpers shared across the pipeline."""

from __future__ import annotations

import hashlib
import json
from typing import Any


def stable_seed(*parts: Any) -> int:
    """Derive a platform-independent integer seed from arbitrary parts.

    Python's builtin hash() is salted per process, so seeds for
    per-claim rngs are derived from a sha256 digest instead.
    """
    blob = "|".join(repr(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def dumps_canonical(obj: Any) -> str:
    """Serialize to JSON with a canonical byte representation."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
