"""Checked-in mesh fixtures transcribed from the reference figures.

fig2 is a plain T-mesh (three horizontal and three vertical interior
l-edges, V+ = 6, E = 6, F = 13); the others are hierarchical meshes.  fig7
is the same mesh as fig5 (the connectivity-path illustration reuses it);
fig9 is fig5 without the isolated level-1 cross in its lower-left corner.
"""

from __future__ import annotations

import json
from importlib import resources

from .mesh import TMesh, mesh_from_json
from .hierarchy import HMesh, hmesh_from_json

FIXTURES = ("fig2", "fig5", "fig6", "fig7", "fig9", "fig11_t1")


def fixture_doc(name: str) -> dict:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; have {FIXTURES}")
    path = resources.files(__package__).joinpath("fixtures", f"{name}.json")
    return json.loads(path.read_text())


def load_fixture(name: str):
    """The fixture as an HMesh (hierarchical fixtures) or TMesh (fig2)."""
    doc = fixture_doc(name)
    if "base" in doc:
        return hmesh_from_json(doc)
    return mesh_from_json(doc)


def fixture_mesh(name: str) -> TMesh:
    """The realized TMesh of any fixture."""
    obj = load_fixture(name)
    return obj.realized if isinstance(obj, HMesh) else obj
