"""
Named test-ring catalog.

Provides a single place to manage the rings used by campaigns, scripts and tests.
Additional rings can be supplied through the HOMLAB_RINGS_JSON environment variable.
"""
from __future__ import annotations

import json
import logging
import os
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


DEFAULT_RINGS: List[Dict[str, Any]] = [
    {"name": "artin_m2", "p": 2, "variables": [["x", 1], ["y", 1]], "ideal": ["x^2", "x*y", "y^2"]},
    {"name": "cubic", "p": 3, "variables": [["x", 1]], "ideal": ["x^3"]},
    {"name": "quartic", "p": 2, "variables": [["x", 1]], "ideal": ["x^4"]},
    {"name": "dual_numbers", "p": 2, "variables": [["x", 1]], "ideal": ["x^2"]},
    {"name": "node", "p": 5, "variables": [["x", 1], ["y", 1]], "ideal": ["x*y"]},
    {"name": "cusp", "p": 5, "variables": [["x", 2], ["y", 3]], "ideal": ["y^2 - x^3"]},
    {"name": "plane", "p": 5, "variables": [["x", 1], ["y", 1]], "ideal": []},
    {"name": "artin_m2_f3", "p": 3, "variables": [["x", 1], ["y", 1]], "ideal": ["x^2", "x*y", "y^2"]},
]

# 簡短別名
RING_ALIASES: Dict[str, str] = {
    "R0": "cubic",
}


def _is_valid(entry: Any) -> bool:
    return (
        isinstance(entry, dict)
        and isinstance(entry.get("name"), str)
        and isinstance(entry.get("p"), int)
        and isinstance(entry.get("variables"), list)
        and isinstance(entry.get("ideal", []), list)
    )


def get_ring_specs() -> List[Dict[str, Any]]:
    """Return ring specs as a list of {name, p, variables, ideal}.

    Priority:
    1) HOMLAB_RINGS_JSON env entries (override same-named defaults)
    2) DEFAULT_RINGS in this file
    """
    specs = {spec["name"]: spec for spec in DEFAULT_RINGS}
    env_json = os.getenv("HOMLAB_RINGS_JSON")
    if env_json:
        try:
            for entry in json.loads(env_json) or []:
                if _is_valid(entry):
                    specs[entry["name"]] = entry
        except json.JSONDecodeError as e:
            logger.warning("[環目錄] HOMLAB_RINGS_JSON 無法解析: %s", e)
    return list(specs.values())


def find_ring_spec(name: str) -> Optional[Dict[str, Any]]:
    """Look up a ring spec by name or alias."""
    name = RING_ALIASES.get(name, name)
    for spec in get_ring_specs():
        if spec["name"] == name:
            return spec
    return None
