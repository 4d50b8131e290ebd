"""Optional disk cache for subgroup lattices.

One JSON file per invariant-factor key, written atomically (temp file +
rename) and tagged with a format version.  The cache is a pure accelerator:
absent or stale files are always recomputable.
"""

from __future__ import annotations

import json
import os
import tempfile

FORMAT_VERSION = 1

_cache_dir: str | None = os.environ.get("RICKART_LAB_CACHE_DIR") or None


def configure(cache_dir: str | None) -> None:
    global _cache_dir
    _cache_dir = cache_dir
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)


def cache_dir() -> str | None:
    return _cache_dir


def _path(factors: tuple[int, ...]) -> str:
    name = "lattice_" + ("0" if not factors else "_".join(map(str, factors))) + ".json"
    return os.path.join(_cache_dir, name)  # type: ignore[arg-type]


def load_lattice(factors: tuple[int, ...]):
    """Return cached subgroup bases (list of row matrices) or None."""
    if not _cache_dir:
        return None
    path = _path(factors)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError):
        return None
    if data.get("version") != FORMAT_VERSION or data.get("factors") != list(factors):
        return None
    return data.get("subgroups")


def store_lattice(factors: tuple[int, ...], rows_list) -> None:
    if not _cache_dir:
        return
    os.makedirs(_cache_dir, exist_ok=True)
    payload = {
        "version": FORMAT_VERSION,
        "factors": list(factors),
        "subgroups": [[list(r) for r in rows] for rows in rows_list],
    }
    fd, tmp = tempfile.mkstemp(dir=_cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True)
        os.replace(tmp, _path(factors))
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass


def clear() -> int:
    """Remove all cache files; returns the number deleted."""
    if not _cache_dir or not os.path.isdir(_cache_dir):
        return 0
    n = 0
    for name in os.listdir(_cache_dir):
        if name.startswith("lattice_") and name.endswith(".json"):
            os.unlink(os.path.join(_cache_dir, name))
            n += 1
    return n


def entries() -> list[str]:
    if not _cache_dir or not os.path.isdir(_cache_dir):
        return []
    return sorted(
        name
        for name in os.listdir(_cache_dir)
        if name.startswith("lattice_") and name.endswith(".json")
    )
