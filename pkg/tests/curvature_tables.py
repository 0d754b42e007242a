"""Frozen expected values shared by the unit and acceptance test suites.

Curvature multisets of the fifteen centered disk projections of the Platonic
solids, and the Gramian eigenvalue multisets, expanded to flat sorted float
lists.  Keys are (solid name, rank) for projections and solid name for
spectra.
"""

import math

SQRT2 = math.sqrt(2)
SQRT3 = math.sqrt(3)
PHI = (1 + math.sqrt(5)) / 2
PHI2 = PHI * PHI


def _expand(pairs):
    out = []
    for value, count in pairs:
        out.extend([value] * count)
    return sorted(out)


CENTERED_CURVATURES = {
    ("tetrahedron", 0): _expand(
        [((1 - SQRT3) / SQRT2, 1), ((1 + math.sqrt(1 / 3)) / SQRT2, 3)]
    ),
    ("tetrahedron", 1): _expand([(0.0, 2), (SQRT2, 2)]),
    ("tetrahedron", 2): _expand(
        [((1 - math.sqrt(1 / 3)) / SQRT2, 3), ((1 + SQRT3) / SQRT2, 1)]
    ),
    ("octahedron", 0): _expand([(1 - SQRT2, 1), (1.0, 4), (1 + SQRT2, 1)]),
    ("octahedron", 1): _expand([(0.0, 2), (1.0, 2), (2.0, 2)]),
    ("octahedron", 2): _expand(
        [(1 - math.sqrt(2 / 3), 3), (1 + math.sqrt(2 / 3), 3)]
    ),
    ("cube", 0): _expand(
        [
            (SQRT2 - SQRT3, 1),
            (SQRT2 - math.sqrt(1 / 3), 3),
            (SQRT2 + math.sqrt(1 / 3), 3),
            (SQRT2 + SQRT3, 1),
        ]
    ),
    ("cube", 1): _expand([(0.0, 2), (SQRT2, 4), (2 * SQRT2, 2)]),
    ("cube", 2): _expand([(SQRT2 - 1, 4), (SQRT2 + 1, 4)]),
    ("icosahedron", 0): _expand(
        [
            (PHI - math.sqrt(PHI + 2), 1),
            (PHI - math.sqrt((PHI + 2) / 5), 5),
            (PHI + math.sqrt((PHI + 2) / 5), 5),
            (PHI + math.sqrt(PHI + 2), 1),
        ]
    ),
    ("icosahedron", 1): _expand(
        [(0.0, 2), (PHI - 1, 2), (PHI, 4), (PHI + 1, 2), (2 * PHI, 2)]
    ),
    ("icosahedron", 2): _expand(
        [
            (PHI - PHI2 * math.sqrt(1 / 3), 3),
            (PHI - math.sqrt(1 / 3) / PHI, 3),
            (PHI + math.sqrt(1 / 3) / PHI, 3),
            (PHI + PHI2 * math.sqrt(1 / 3), 3),
        ]
    ),
    ("dodecahedron", 0): _expand(
        [
            (PHI2 - PHI * SQRT3, 1),
            (PHI2 - PHI * math.sqrt(5 / 3), 3),
            (PHI2 - PHI * math.sqrt(1 / 3), 6),
            (PHI2 + PHI * math.sqrt(1 / 3), 6),
            (PHI2 + PHI * math.sqrt(5 / 3), 3),
            (PHI2 + PHI * SQRT3, 1),
        ]
    ),
    ("dodecahedron", 1): _expand(
        [
            (0.0, 2),
            (PHI2 - PHI, 4),
            (PHI2 - 1, 2),
            (PHI2, 4),
            (PHI2 + 1, 2),
            (PHI2 + PHI, 4),
            (2 * PHI2, 2),
        ]
    ),
    ("dodecahedron", 2): _expand(
        [
            (PHI2 - math.sqrt((7 + 11 * PHI) / 5), 5),
            (PHI2 - math.sqrt((3 - PHI) / 5), 5),
            (PHI2 + math.sqrt((3 - PHI) / 5), 5),
            (PHI2 + math.sqrt((7 + 11 * PHI) / 5), 5),
        ]
    ),
}

MOBIUS_SPECTRA = {
    "tetrahedron": _expand([(-2.0, 1), (2.0, 3)]),
    "octahedron": _expand([(-6.0, 1), (0.0, 2), (4.0, 3)]),
    "cube": _expand([(-16.0, 1), (0.0, 4), (8.0, 3)]),
    "icosahedron": _expand([(-12 * PHI2, 1), (0.0, 8), (4 * PHI + 8, 3)]),
    "dodecahedron": _expand([(-20 * PHI2 * PHI2, 1), (0.0, 16), (20 * PHI2, 3)]),
}


def multisets_match(got, want, tol=1e-9):
    got = sorted(got)
    if len(got) != len(want):
        return False
    return all(abs(g - w) <= tol for g, w in zip(got, want))
