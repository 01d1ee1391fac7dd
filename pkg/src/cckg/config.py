"""Locating and reading the data files (rules, hierarchies, match settings).

Files are looked up in the directory named by ``CCKG_CONFIG`` first and then in
the package's bundled ``data`` directory.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import RuleFileError
from .hierarchy import Hierarchy

DATA_DIR = Path(__file__).with_name("data")
ENV_VAR = "CCKG_CONFIG"

_LIST_KEYS = {"transitive_relations", "mediators", "generic_concepts", "min_defgraph_overlap"}
_INT_KEYS = {"budget", "max_expansion_steps", "significance_cutoff"}
_FLOAT_KEYS = {"ic_threshold"}


def config_path(name: str) -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        candidate = Path(override) / name
        if candidate.exists():
            return candidate
    return DATA_DIR / name


def parse_settings(text: str, source: str = "<match.cfg>") -> dict:
    """Parse ``key = value`` lines; list-valued keys are comma separated."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (x.strip() for x in line.partition("="))
        if not sep or not key:
            raise RuleFileError(f"{source}:{lineno}: expected 'key = value'")
        try:
            if key in _LIST_KEYS:
                items = [v.strip() for v in value.split(",") if v.strip()]
                out[key] = tuple(int(v) for v in items) if key == "min_defgraph_overlap" else items
            elif key in _INT_KEYS:
                out[key] = None if value.lower() in ("", "none", "auto") else int(value)
            elif key in _FLOAT_KEYS:
                out[key] = float(value)
            else:
                out[key] = value
        except ValueError:
            raise RuleFileError(f"{source}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def load_settings(path=None) -> dict:
    path = Path(path) if path else config_path("match.cfg")
    return parse_settings(path.read_text(encoding="utf-8"), str(path))


def load_relation_hierarchy(path=None) -> Hierarchy:
    path = Path(path) if path else config_path("relations.hier")
    return Hierarchy.loads(path.read_text(encoding="utf-8"), name="relation")


def minidict_path() -> Path:
    return DATA_DIR / "minidict.txt"
