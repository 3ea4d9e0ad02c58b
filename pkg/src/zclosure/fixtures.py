"""Built-in example generator sets.

Each set consists of integer matrices of the form x_a(3) w x_a(-3) built
from Chevalley-basis root vectors of a simple Lie algebra acting on a
small module; the elements have finite order but together generate a group
whose closure has the full Lie algebra of the representation.
"""

from __future__ import annotations

from .errors import ZClosureError
from .field import QQ
from .linalg import MatrixF

_G2 = [
    [
        [0, 0, 0, 0, -1, 0, -3],
        [0, 0, 0, 0, 0, 0, -1],
        [0, -1, 0, 6, -18, -9, 27],
        [0, 0, 0, 1, -3, -3, 9],
        [0, 0, 0, 0, 0, -1, 3],
        [1, -3, 3, -18, 27, 0, 0],
        [0, 0, 1, -6, 9, 0, 0],
    ],
    [
        [0, 0, 0, 0, 0, 0, -1],
        [0, 0, 0, 0, -3, 10, 0],
        [0, 0, 0, 0, 1, -3, 0],
        [0, 0, 0, -1, 0, 0, 0],
        [0, 3, 10, 0, 0, 0, 0],
        [0, 1, 3, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, 0],
    ],
]

_A3 = [
    [
        [0, 0, 0, 0, 0, -1],
        [0, 0, -1, 0, 3, 0],
        [0, 0, 0, 0, 1, 0],
        [0, -1, 3, 3, -9, 0],
        [0, 0, 0, 1, -3, 0],
        [-1, 0, 0, 0, 0, 0],
    ],
    [
        [0, -3, 1, 0, 0, 0],
        [0, -1, 0, 0, 0, 0],
        [1, -3, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 3, -1, 3],
        [0, 0, 0, 1, 0, 0],
    ],
    [
        [0, 0, 0, -1, 0, 0],
        [-1, -3, 0, -9, 0, 0],
        [0, 0, 0, 0, -1, -3],
        [0, 1, 0, 3, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, -1, 0, -3, 0],
    ],
]

_B2 = [
    [
        [0, 0, -1, 0, 0, 0, 0, 0],
        [-1, 0, 0, -3, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, -1, -3, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, -1, 0],
        [0, 0, 0, 0, -1, 0, 0, -3],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, -1, -3, 0],
    ],
    [
        [0, 0, 0, 0, -3, 9, -1, 3],
        [0, 0, 0, 0, -1, 3, 0, 0],
        [0, 0, 0, 0, 0, -3, 0, 1],
        [0, 0, 0, 0, 0, -1, 0, 0],
        [-3, 9, -1, 3, 0, 0, 0, 0],
        [-1, 3, 0, 0, 0, 0, 0, 0],
        [0, -3, 0, 1, 0, 0, 0, 0],
        [0, -1, 0, 0, 0, 0, 0, 0],
    ],
]

_FIXTURES = {"g2": _G2, "a3": _A3, "b2": _B2}


def fixture_names():
    return sorted(_FIXTURES)


def fixture(name):
    """Generator matrices for a named example set."""
    key = name.lower()
    if key not in _FIXTURES:
        raise ZClosureError(
            f"unknown fixture {name!r}; available: {', '.join(fixture_names())}"
        )
    return [MatrixF(QQ, rows) for rows in _FIXTURES[key]]
