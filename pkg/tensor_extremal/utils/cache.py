"""
On-disk store for exact extremal reports.

A report is written to ``<cache dir>/<key>.json`` where the key is an md5 digest
of the search kind, the number of axes, the side length and the canonical
pattern JSON. Reports flagged ``"exact": false`` stay out of the store.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from tensor_extremal import config

log = logging.getLogger(__name__)

PathLike = Union[str, Path]


def get_cache_key(kind: str, t: int, n: int, pattern_json: str) -> str:
    """md5 digest naming the report of one ``kind`` search for a pattern at side ``n``."""
    identity = json.dumps([kind, t, n, pattern_json], separators=(",", ":"))
    return hashlib.md5(identity.encode("utf-8")).hexdigest()


def cache_file(cache_key: str, cache_dir: Optional[PathLike] = None) -> Path:
    """Location of the report stored under ``cache_key``."""
    return Path(cache_dir or config.DEFAULT_CACHE_DIR) / f"{cache_key}.json"


def get_from_cache(
    cache_key: str, cache_dir: Optional[PathLike] = None
) -> Optional[Dict[str, Any]]:
    """
    Load the stored report for ``cache_key``.

    Unreadable or malformed entries are logged and treated as missing.
    """
    path = cache_file(cache_key, cache_dir)
    if not path.is_file():
        log.debug(f"No stored report for key {cache_key}")
        return None
    try:
        report = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, OSError) as e:
        log.warning(f"Ignoring unreadable report {path}: {e}")
        return None
    if not isinstance(report, dict):
        log.warning(f"Ignoring report {path}: expected a JSON object")
        return None
    log.debug(f"Loaded stored report for key {cache_key}")
    return report


def save_to_cache(
    cache_key: str, data: Dict[str, Any], cache_dir: Optional[PathLike] = None
) -> bool:
    """
    Store an exact report under ``cache_key``.

    Returns:
        False when the report is inexact or cannot be written.
    """
    if not data.get("exact", True):
        log.debug(f"Report for key {cache_key} is inexact; not stored")
        return False
    path = cache_file(cache_key, cache_dir)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    except (TypeError, ValueError, OSError) as e:
        log.warning(f"Could not store report {path}: {e}")
        return False
    log.debug(f"Stored report for key {cache_key} at {path}")
    return True
