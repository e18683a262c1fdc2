"""
On-disk cache of reference solutions.

Each entry is one msgpack file named by the sha256 of the parameters that
determine the reference (problem, space, nodes, reference step and
tolerance). Unreadable or mismatching entries count as misses.
"""

import hashlib
from logging import getLogger
from pathlib import Path
from typing import Any, Dict, Optional

import msgpack
import numpy as np

logger = getLogger(__name__)

CACHE_PREFIX = "reference"


def cache_key(params: Dict[str, Any]) -> str:
    """sha256 hex digest of the parameters, independent of key order."""
    packed = msgpack.packb(sorted(params.items()), use_bin_type=True)
    return hashlib.sha256(packed).hexdigest()


class ReferenceCache:
    """msgpack files of final-time reference vectors under one directory."""

    def __init__(self, cache_dir: Path):
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    def path_for_key(self, key: str) -> Path:
        return self.cache_dir / f"{CACHE_PREFIX}_{key}.msgpack"

    def load(self, params: Dict[str, Any]) -> Optional[np.ndarray]:
        path = self.path_for_key(cache_key(params))
        if not path.exists() or path.stat().st_size == 0:
            logger.debug(f"[CACHE] No reference at {path}")
            return None
        try:
            with open(path, "rb") as f:
                entry = msgpack.unpackb(f.read(), raw=False)
            if entry["params"] != params:
                logger.warning(f"[CACHE] Parameter mismatch in {path}, ignoring entry")
                return None
            values = np.frombuffer(entry["data"], dtype=np.dtype(entry["dtype"]))
            logger.info(f"[CACHE] Loaded reference from {path}")
            return values.reshape(entry["shape"]).copy()
        except Exception as e:
            logger.warning(f"[CACHE] Failed to load reference from {path}: {e}")
            return None

    def store(self, params: Dict[str, Any], values: np.ndarray) -> Path:
        values = np.ascontiguousarray(values, dtype=np.float64)
        path = self.path_for_key(cache_key(params))
        entry = {
            "params": params,
            "dtype": values.dtype.str,
            "shape": list(values.shape),
            "data": values.tobytes(),
        }
        tmp_path = path.with_suffix(".tmp")
        with open(tmp_path, "wb") as f:
            msgpack.pack(entry, f, use_bin_type=True)
        tmp_path.replace(path)
        logger.info(f"[CACHE] Saved reference to {path}")
        return path
