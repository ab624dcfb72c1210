"""Built-in triangulations, embedded in the wire format.

* ``sphere``: the double triangle, f = (3, 3, 2).
* ``torus``: the one-vertex two-triangle torus (square plus diagonal).
* ``klein``: the same square with one side pairing reversed.
* ``boundary-4-simplex``: the five-tetrahedron S^3.
* ``figure-eight``: the two-tetrahedron ideal triangulation of the
  figure-eight knot complement as a pseudo-complex (one cone vertex with
  torus link, two edges of valence six).  Among the 288 two-tetrahedron
  gluings with this f-vector and link data, half describe the complement's
  sister manifold; this one was selected by the first homology of the
  quotient complex being trivial (the sister carries 5-torsion).
"""

from __future__ import annotations

from .complexes import ComplexError, Triangulation, from_wire

FIXTURE_WIRES: dict[str, dict] = {
    "sphere": {
        "dim": 2,
        "simplices": 2,
        "pairings": [
            {"a": [0, 0], "b": [1, 0], "map": [1, 2]},
            {"a": [0, 1], "b": [1, 1], "map": [0, 2]},
            {"a": [0, 2], "b": [1, 2], "map": [0, 1]},
        ],
    },
    "torus": {
        "dim": 2,
        "simplices": 2,
        "pairings": [
            {"a": [0, 2], "b": [1, 0], "map": [2, 1]},
            {"a": [0, 0], "b": [1, 1], "map": [0, 2]},
            {"a": [0, 1], "b": [1, 2], "map": [0, 1]},
        ],
    },
    "klein": {
        "dim": 2,
        "simplices": 2,
        "pairings": [
            {"a": [0, 2], "b": [1, 0], "map": [2, 1]},
            {"a": [0, 0], "b": [1, 1], "map": [2, 0]},
            {"a": [0, 1], "b": [1, 2], "map": [0, 1]},
        ],
    },
    "boundary-4-simplex": {
        "dim": 3,
        "simplices": 5,
        "pairings": [
            {"a": [0, 0], "b": [1, 0], "map": [1, 2, 3]},
            {"a": [0, 1], "b": [2, 0], "map": [1, 2, 3]},
            {"a": [0, 2], "b": [3, 0], "map": [1, 2, 3]},
            {"a": [0, 3], "b": [4, 0], "map": [1, 2, 3]},
            {"a": [1, 1], "b": [2, 1], "map": [0, 2, 3]},
            {"a": [1, 2], "b": [3, 1], "map": [0, 2, 3]},
            {"a": [1, 3], "b": [4, 1], "map": [0, 2, 3]},
            {"a": [2, 2], "b": [3, 2], "map": [0, 1, 3]},
            {"a": [2, 3], "b": [4, 2], "map": [0, 1, 3]},
            {"a": [3, 3], "b": [4, 3], "map": [0, 1, 2]},
        ],
    },
    "figure-eight": {
        "dim": 3,
        "simplices": 2,
        "pairings": [
            {"a": [0, 0], "b": [1, 0], "map": [2, 3, 1]},
            {"a": [0, 1], "b": [1, 1], "map": [2, 3, 0]},
            {"a": [0, 2], "b": [1, 2], "map": [1, 3, 0]},
            {"a": [0, 3], "b": [1, 3], "map": [1, 2, 0]},
        ],
    },
}

#: Accepted aliases on the command line.
ALIASES = {
    "fig8": "figure-eight",
    "figure8": "figure-eight",
    "s3": "boundary-4-simplex",
    "sphere2": "sphere",
    "torus2": "torus",
    "klein-bottle": "klein",
}


def fixture_names() -> list[str]:
    return sorted(FIXTURE_WIRES)


def load_fixture(name: str) -> Triangulation:
    key = ALIASES.get(name, name)
    if key not in FIXTURE_WIRES:
        raise ComplexError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
    return from_wire(FIXTURE_WIRES[key], name=key)
