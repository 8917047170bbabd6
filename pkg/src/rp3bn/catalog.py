"""Named diagram catalog with frozen serializations and expected invariants.

Every entry has a programmatic builder plus a fixture file frozen under
``fixtures/``; the manifest records expected invariant values used by the
test suite and by ``--verify`` in the command line tool.  Builders and
fixtures are checked against each other in the tests, so neither can
drift silently.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Callable, Dict, List

from . import builders
from .diagram import Diagram, parse_diagram

__all__ = ["CATALOG", "names", "build", "load", "manifest", "knot_names"]


def _sum_twist_trefoil() -> Diagram:
    host = builders.twist_wall_knot(1)
    guest = builders.trefoil(right=True)
    return host.connected_sum(host.arcs()[0], guest, guest.arcs()[0])


CATALOG: Dict[str, Callable[[], Diagram]] = {
    "unknot-loop": builders.loop_unknot,
    "unknot-wall": builders.wall_unknot,
    "unknot-curl-pos": lambda: builders.curl_unknot(1),
    "unknot-curl-neg": lambda: builders.curl_unknot(-1),
    "trefoil-right": lambda: builders.trefoil(right=True),
    "trefoil-left": lambda: builders.trefoil(right=False),
    "cinquefoil": lambda: builders.braid_closure([1] * 5),
    "hopf-link": builders.hopf_link,
    "essential-pair": builders.essential_pair,
    "split-pair": builders.split_wall_pair,
    "wall-twist-1": lambda: builders.twist_wall_knot(1),
    "wall-twist-2": lambda: builders.twist_wall_knot(2),
    "wall-twist-3": lambda: builders.twist_wall_knot(3),
    "wall-twist-4": lambda: builders.twist_wall_knot(4),
    "sum-twist-trefoil": _sum_twist_trefoil,
}


def names() -> List[str]:
    return sorted(CATALOG)


def build(name: str) -> Diagram:
    if name not in CATALOG:
        raise KeyError(f"unknown catalog entry {name!r}")
    return CATALOG[name]()


def _fixture_text(filename: str) -> str:
    return (resources.files(__package__) / "fixtures" / filename).read_text()


def manifest() -> Dict[str, dict]:
    return json.loads(_fixture_text("manifest.json"))


def load(name: str) -> Diagram:
    """Parse the frozen fixture for a catalog entry."""
    entry = manifest().get(name)
    if entry is None:
        raise KeyError(f"unknown catalog entry {name!r}")
    return parse_diagram(_fixture_text(entry["file"]))


def knot_names() -> List[str]:
    return [n for n, e in sorted(manifest().items()) if e["components"] == 1]
