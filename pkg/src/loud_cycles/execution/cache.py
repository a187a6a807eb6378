"""Content-addressed on-disk cache of pipeline artifacts."""

import hashlib
import json
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from ..expansion.difference import SCHEMA
from ..utils.logger import get_logger

logger = get_logger(__name__)


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(value: Any) -> str:
    """SHA-256 of the canonical JSON of ``value``."""
    return hashlib.sha256(canonical_json(value).encode("utf-8")).hexdigest()


class ArtifactCache:
    """JSON artifacts stored as ``root/<stage>/<sha256>.json``."""

    def __init__(self, root: Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def key(self, stage: str, inputs: Mapping[str, Any]) -> str:
        return digest({"schema": SCHEMA, "stage": stage, "inputs": dict(inputs)})

    def path(self, stage: str, key: str) -> Path:
        return self.root / stage / f"{key}.json"

    def load(self, stage: str, key: str) -> Optional[Dict[str, Any]]:
        """Stored record, or ``None`` when absent or unreadable."""
        path = self.path(stage, key)
        if not path.exists():
            return None
        try:
            record = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("Discarding unreadable artifact", stage=stage, path=str(path), error=str(e))
            return None
        logger.debug("Artifact cache hit", stage=stage, key=key[:12])
        return record

    def store(self, stage: str, key: str, record: Mapping[str, Any]) -> Path:
        path = self.path(stage, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        partial = path.with_suffix(".json.partial")
        partial.write_text(json.dumps(record, sort_keys=True, indent=1), encoding="utf-8")
        os.replace(partial, path)
        logger.debug("Artifact stored", stage=stage, key=key[:12])
        return path
