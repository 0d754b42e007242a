"""Regular polytopes: Schlafli data, edge-scribed coordinates, face lattices.

An edge-scribed realization has every edge tangent to the unit sphere of
E^{d+1}; all vertices then sit at norm sqrt(1 + l^2) where l is the half
edge-length, a constant of the combinatorial type.  Canonical coordinates are
fixed per family so downstream fixtures are reproducible; where a single
quadratic field hosts them they are exact, otherwise floats.

Face lattices are generated combinatorially per family (subsets for
simplices, coordinate masks for cubes, axis/sign sets for cross-polytopes)
or, for the exceptional polyhedra, by selecting supporting-plane vertex sets
along the dual solid's directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

from .exactnum import (
    QuadScalar,
    approx,
    exact_sqrt,
    is_float_data,
    phi,
    ratio,
    sqrt_int,
    sqrt_rational,
)

PHI = phi()
INV_PHI = PHI - 1  # 1/phi
SQRT2 = sqrt_int(2)
SQRT3 = sqrt_int(3)


@dataclass(frozen=True)
class Solid:
    """A regular-polytope family member: kind plus ambient dimension/size."""

    kind: str  # simplex | cube | cross | icosahedron | dodecahedron | ngon | cell24 | cell600 | cell120
    n: int = 3  # ambient dimension for families; number of sides for ngon

    def __post_init__(self):
        if self.kind in ("simplex", "cube", "cross") and self.n < 2:
            raise ValueError("polytope families need ambient dimension >= 2")
        if self.kind == "ngon" and self.n < 3:
            raise ValueError("a polygon needs at least 3 sides")

    @property
    def dimension(self) -> int:
        """d: the dimension of the balls the solid projects to."""
        if self.kind == "ngon":
            return 1
        if self.kind in ("icosahedron", "dodecahedron"):
            return 2
        if self.kind in ("cell24", "cell600", "cell120"):
            return 3
        return self.n - 1

    @property
    def schlafli(self) -> tuple:
        k = self.kind
        if k == "ngon":
            return (self.n,)
        if k == "simplex":
            return (3,) * (self.n - 1)
        if k == "cube":
            return (4,) + (3,) * (self.n - 2)
        if k == "cross":
            return (3,) * (self.n - 2) + (4,)
        return {
            "icosahedron": (3, 5),
            "dodecahedron": (5, 3),
            "cell24": (3, 4, 3),
            "cell600": (3, 3, 5),
            "cell120": (5, 3, 3),
        }[k]

    @property
    def name(self) -> str:
        k, n = self.kind, self.n
        if k == "simplex":
            return {2: "triangle", 3: "tetrahedron"}.get(n, f"simplex-{n}")
        if k == "cube":
            return {2: "square", 3: "cube"}.get(n, f"cube-{n}")
        if k == "cross":
            return {2: "square", 3: "octahedron"}.get(n, f"orthoplex-{n}")
        if k == "ngon":
            return f"{n}-gon"
        return {
            "icosahedron": "icosahedron",
            "dodecahedron": "dodecahedron",
            "cell24": "24-cell",
            "cell600": "600-cell",
            "cell120": "120-cell",
        }[k]

    def __str__(self):
        return self.name


TETRAHEDRON = Solid("simplex", 3)
OCTAHEDRON = Solid("cross", 3)
CUBE = Solid("cube", 3)
ICOSAHEDRON = Solid("icosahedron", 3)
DODECAHEDRON = Solid("dodecahedron", 3)
PLATONIC = (TETRAHEDRON, OCTAHEDRON, CUBE, ICOSAHEDRON, DODECAHEDRON)

_NAME_TABLE = {
    "tetrahedron": TETRAHEDRON,
    "tetra": TETRAHEDRON,
    "octahedron": OCTAHEDRON,
    "octa": OCTAHEDRON,
    "cube": CUBE,
    "icosahedron": ICOSAHEDRON,
    "icosa": ICOSAHEDRON,
    "dodecahedron": DODECAHEDRON,
    "dodeca": DODECAHEDRON,
    "triangle": Solid("simplex", 2),
    "square": Solid("cube", 2),
    "24-cell": Solid("cell24", 4),
    "600-cell": Solid("cell600", 4),
    "120-cell": Solid("cell120", 4),
}


def solid_from_name(name: str) -> Solid:
    """Parse names like "tetrahedron", "simplex-5", "cube-4", "ngon-7"."""
    key = name.strip().lower()
    if key in _NAME_TABLE:
        return _NAME_TABLE[key]
    for prefix, kind in (
        ("simplex-", "simplex"),
        ("cube-", "cube"),
        ("orthoplex-", "cross"),
        ("cross-", "cross"),
        ("ngon-", "ngon"),
    ):
        if key.startswith(prefix):
            return Solid(kind, int(key[len(prefix):]))
    raise ValueError(f"unknown solid {name!r}")


# -- half edge-lengths ---------------------------------------------------------


def half_edge_length(s: Solid):
    """Half the edge length of the edge-scribed realization (exact if quadratic)."""
    k = s.kind
    if k == "ngon":
        p = s.n
        if p == 3:
            return SQRT3
        if p == 4:
            return 1
        if p == 6:
            return ratio(SQRT3, 3)
        return math.tan(math.pi / p)
    if k == "simplex":
        if s.n == 2:
            return SQRT3
        d = s.n - 1
        return sqrt_rational(Fraction(d + 2, d))
    if k == "cross":
        return 1  # any dimension; the square ({4}) included
    if k == "cube":
        if s.n == 2:
            return 1
        return sqrt_rational(Fraction(1, s.n - 1))
    if k == "icosahedron":
        return INV_PHI
    if k == "dodecahedron":
        return INV_PHI * INV_PHI
    if k == "cell24":
        return ratio(SQRT3, 3)
    if k == "cell600":
        return 5 ** (-0.25) * float(PHI) ** (-1.5)
    if k == "cell120":
        return float(INV_PHI) ** 3 / math.sqrt(3)
    raise ValueError(f"unknown solid kind {k!r}")


def half_edge_length_pq(p: int, q: int) -> float:
    """The polyhedral half edge-length from the Schlafli symbol {p,q}."""
    cp = math.cos(math.pi / p)
    sq = math.sin(math.pi / q)
    return math.sqrt((sq * sq - cp * cp)) / cp


def half_edge_length_squared(s: Solid):
    """Squared half edge-length; exact even where the coordinates are floats."""
    k = s.kind
    if k == "ngon":
        p = s.n
        if p == 3:
            return 3
        if p == 4:
            return 1
        if p == 5:
            return QuadScalar(5, -2, 5)  # tan^2(pi/5)
        if p == 6:
            return Fraction(1, 3)
        t = math.tan(math.pi / p)
        return t * t
    if k == "simplex":
        return Fraction(s.n + 1, s.n - 1)
    if k == "cross":
        return 1
    if k == "cube":
        return 1 if s.n == 2 else Fraction(1, s.n - 1)
    if k == "icosahedron":
        return INV_PHI ** 2
    if k == "dodecahedron":
        return INV_PHI ** 4
    if k == "cell24":
        return Fraction(1, 3)
    if k == "cell600":
        return ratio(INV_PHI ** 3, sqrt_int(5))
    if k == "cell120":
        return ratio(INV_PHI ** 6, 3)
    raise ValueError(f"unknown solid kind {k!r}")


def solid_from_schlafli(symbol) -> Solid:
    """The regular family member carrying the given Schlafli symbol."""
    sym = tuple(int(x) for x in symbol)
    if not sym:
        raise ValueError("empty Schlafli symbol")
    if len(sym) == 1:
        return Solid("ngon", sym[0])
    exceptional = {
        (3, 5): ICOSAHEDRON,
        (5, 3): DODECAHEDRON,
        (3, 4, 3): Solid("cell24", 4),
        (3, 3, 5): Solid("cell600", 4),
        (5, 3, 3): Solid("cell120", 4),
    }
    if sym in exceptional:
        return exceptional[sym]
    n = len(sym) + 1
    if all(x == 3 for x in sym):
        return Solid("simplex", n)
    if sym[0] == 4 and all(x == 3 for x in sym[1:]):
        return Solid("cube", n)
    if sym[-1] == 4 and all(x == 3 for x in sym[:-1]):
        return Solid("cross", n)
    raise ValueError(f"no regular solid with symbol {sym}")


# -- polytopes -----------------------------------------------------------------


@dataclass(frozen=True)
class Polytope:
    """Vertex coordinates plus an explicit face lattice (ranks 0..d)."""

    vertices: tuple
    faces_by_rank: dict
    family: Optional[Solid] = None

    @property
    def ambient_dimension(self) -> int:
        return len(self.vertices[0])

    @property
    def dimension(self) -> int:
        """d: rank of the facets (= ball dimension after projection)."""
        return self.ambient_dimension - 1

    def faces(self, k: int):
        if k not in self.faces_by_rank:
            raise ValueError(f"rank {k} out of range 0..{self.dimension}")
        return self.faces_by_rank[k]

    @property
    def edges(self):
        return self.faces_by_rank[1]

    def adjacency(self) -> dict:
        adj: dict = {i: set() for i in range(len(self.vertices))}
        for e in self.faces_by_rank[1]:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj


def faces(p: Polytope, k: int):
    return p.faces(k)


def face_barycenter(p: Polytope, f) -> tuple:
    """Coordinate mean of a face's vertices (a frozenset of vertex indices)."""
    idx = sorted(f)
    n = len(idx)
    cols = zip(*(p.vertices[i] for i in idx))
    return tuple(ratio(sum(c), n) for c in cols)


def face_cycle(p: Polytope, face) -> tuple:
    """Vertices of a 2-face in cyclic adjacency order.

    Deterministic: starts at the smallest vertex index and steps first to its
    smaller in-face neighbour.
    """
    idx = sorted(face)
    edges = {e for e in p.faces_by_rank[1] if e <= face}
    if len(edges) != len(idx):
        raise ValueError("face is not a polygon in this lattice")
    start = idx[0]
    nbrs = sorted(v for v in idx if frozenset((start, v)) in edges)
    if len(nbrs) != 2:
        raise ValueError("face vertices are not 2-regular")
    cycle = [start, nbrs[0]]
    while len(cycle) < len(idx):
        here, prev = cycle[-1], cycle[-2]
        step = [v for v in idx if v != prev and frozenset((here, v)) in edges]
        if len(step) != 1:
            raise ValueError("face vertices are not 2-regular")
        cycle.append(step[0])
    return tuple(cycle)


def flags(p: Polytope):
    """All flags (f0 < f1 < ... < fd) as tuples of faces."""
    d = p.dimension
    out = [(f,) for f in p.faces_by_rank[0]]
    for k in range(1, d + 1):
        nxt = []
        for chain in out:
            top = chain[-1]
            for f in p.faces_by_rank[k]:
                if top < f:
                    nxt.append(chain + (f,))
        out = nxt
    return out


def graph_distance(p: Polytope, u: int, v: int) -> int:
    if u == v:
        return 0
    adj = p.adjacency()
    seen = {u}
    frontier = [u]
    dist = 0
    while frontier:
        dist += 1
        nxt = []
        for w in frontier:
            for x in adj[w]:
                if x == v:
                    return dist
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    raise ValueError("vertices lie in different components")


def _sorted_faces(sets) -> tuple:
    return tuple(sorted(set(sets), key=lambda f: tuple(sorted(f))))


def _simplex_lattice(nverts: int, d: int) -> dict:
    return {
        k: _sorted_faces(frozenset(c) for c in combinations(range(nverts), k + 1))
        for k in range(d + 1)
    }


def _cube_lattice(n: int) -> dict:
    # vertices indexed by sign patterns in {0,1}^n, lexicographic
    verts = list(product((0, 1), repeat=n))
    index = {v: i for i, v in enumerate(verts)}
    lattice: dict = {}
    for k in range(n):
        fs = []
        for free in combinations(range(n), k):
            fixed = [i for i in range(n) if i not in free]
            for vals in product((0, 1), repeat=len(fixed)):
                members = []
                for bits in product((0, 1), repeat=k):
                    coord = [0] * n
                    for ax, b in zip(free, bits):
                        coord[ax] = b
                    for ax, b in zip(fixed, vals):
                        coord[ax] = b
                    members.append(index[tuple(coord)])
                fs.append(frozenset(members))
        lattice[k] = _sorted_faces(fs)
    return lattice


def _cross_lattice(n: int) -> dict:
    # vertices 2i (= +e_i) and 2i+1 (= -e_i)
    lattice: dict = {}
    for k in range(n):
        fs = []
        for axes in combinations(range(n), k + 1):
            for signs in product((0, 1), repeat=k + 1):
                fs.append(frozenset(2 * a + s for a, s in zip(axes, signs)))
        lattice[k] = _sorted_faces(fs)
    return lattice


def _min_distance_edges(verts) -> tuple:
    n = len(verts)
    d2 = {}
    for i, j in combinations(range(n), 2):
        diff = [x - y for x, y in zip(verts[i], verts[j])]
        d2[(i, j)] = sum(x * x for x in diff)
    lo = min(d2.values())
    if is_float_data(d2.values()):
        pairs = [ij for ij, v in d2.items() if v < lo * (1 + 1e-9)]
    else:
        pairs = [ij for ij, v in d2.items() if v == lo]
    return _sorted_faces(frozenset(ij) for ij in pairs)


def _supported_faces(verts, directions) -> tuple:
    # face selected by direction w: the vertices maximizing <v, w>
    fs = []
    for w in directions:
        dots = [sum(x * y for x, y in zip(v, w)) for v in verts]
        m = max(dots)
        if is_float_data(dots):
            members = [i for i, t in enumerate(dots) if t > m - 1e-9]
        else:
            members = [i for i, t in enumerate(dots) if t == m]
        fs.append(frozenset(members))
    return _sorted_faces(fs)


def _icosahedron_vertices():
    # cyclic shifts of (0, +-1/phi, +-1); vertex norm sqrt(1 + 1/phi^2)
    base = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            trip = (QuadScalar(0), s1 * INV_PHI, QuadScalar(s2))
            for r in range(3):
                base.append(tuple(trip[(i - r) % 3] for i in range(3)))
    return tuple(base)


def _dodecahedron_vertices():
    # (+-1,+-1,+-1)/phi together with cyclic shifts of (0, +-1/phi^2, +-1)
    out = []
    for sx in (1, -1):
        for sy in (1, -1):
            for sz in (1, -1):
                out.append((sx * INV_PHI, sy * INV_PHI, sz * INV_PHI))
    inv2 = INV_PHI * INV_PHI
    for s1 in (1, -1):
        for s2 in (1, -1):
            # note the chirality: this orbit, not its mirror, is polar to the
            # icosahedron orbit above
            trip = (QuadScalar(0), QuadScalar(s1), s2 * inv2)
            for r in range(3):
                out.append(tuple(trip[(i - r) % 3] for i in range(3)))
    return tuple(out)


def _simplex_vertices_float(n: int) -> tuple:
    # n-simplex in E^n: unit directions with pairwise dot -1/n, scaled to
    # vertex norm sqrt(2n/(n-1)).
    import numpy as np

    rows = np.eye(n + 1) - 1.0 / (n + 1)
    _, _, vt = np.linalg.svd(rows)
    basis = vt[:n].T  # orthonormal basis of the sum-zero hyperplane
    unit = rows / np.linalg.norm(rows, axis=1, keepdims=True)
    coords = unit @ basis
    scale = math.sqrt(2 * n / (n - 1))
    return tuple(tuple(float(x) for x in row) for row in coords * scale)


def _ngon_vertices(p: int) -> tuple:
    if p == 3:
        return ((2, 0), (-1, SQRT3), (-1, -SQRT3))
    if p == 4:
        return ((SQRT2, QuadScalar(0)), (QuadScalar(0), SQRT2),
                (-SQRT2, QuadScalar(0)), (QuadScalar(0), -SQRT2))
    if p == 6:
        a = ratio(SQRT3, 3)
        return ((2 * a, 0), (a, 1), (-a, 1), (-2 * a, 0), (-a, -1), (a, -1))
    r = 1.0 / math.cos(math.pi / p)
    return tuple(
        (r * math.cos(2 * math.pi * k / p), r * math.sin(2 * math.pi * k / p))
        for k in range(p)
    )


def regular_edge_scribed(s: Solid) -> Polytope:
    """The canonical edge-scribed realization with its face lattice."""
    k, n = s.kind, s.n
    if k in ("cell24", "cell600", "cell120"):
        raise ValueError(f"{s.name} is provided for constants only, not realized")
    if k == "ngon" or (k == "cube" and n == 2) or (k == "cross" and n == 2) or (
        k == "simplex" and n == 2
    ):
        p = {"ngon": n, "cube": 4, "cross": 4, "simplex": 3}[k]
        verts = _ngon_vertices(p)
        m = len(verts)
        lattice = {
            0: _sorted_faces(frozenset([i]) for i in range(m)),
            1: _sorted_faces(frozenset([i, (i + 1) % m]) for i in range(m)),
        }
        return Polytope(verts, lattice, family=s)
    if k == "simplex":
        if n == 3:
            verts = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
        else:
            verts = _simplex_vertices_float(n)
        return Polytope(verts, _simplex_lattice(n + 1, n - 1), family=s)
    if k == "cube":
        h = sqrt_rational(Fraction(1, n - 1))
        raw = list(product((0, 1), repeat=n))
        verts = tuple(tuple(h if b else -h for b in bits) for bits in raw)
        return Polytope(verts, _cube_lattice(n), family=s)
    if k == "cross":
        verts = []
        for i in range(n):
            plus = [QuadScalar(0)] * n
            minus = [QuadScalar(0)] * n
            plus[i], minus[i] = SQRT2, -SQRT2
            verts.append(tuple(plus))
            verts.append(tuple(minus))
        return Polytope(tuple(verts), _cross_lattice(n), family=s)
    if k == "icosahedron":
        verts = _icosahedron_vertices()
        lattice = {
            0: _sorted_faces(frozenset([i]) for i in range(12)),
            1: _min_distance_edges(verts),
            2: _supported_faces(verts, _dodecahedron_vertices()),
        }
        return Polytope(verts, lattice, family=s)
    if k == "dodecahedron":
        verts = _dodecahedron_vertices()
        lattice = {
            0: _sorted_faces(frozenset([i]) for i in range(20)),
            1: _min_distance_edges(verts),
            2: _supported_faces(verts, _icosahedron_vertices()),
        }
        return Polytope(verts, lattice, family=s)
    raise ValueError(f"unknown solid kind {k!r}")


def polar_dual(p: Polytope) -> Polytope:
    """The polar polytope: one vertex per facet f, at v_f with <u, v_f> = 1."""
    from . import linalg

    d = p.dimension
    n = d + 1
    facets = p.faces_by_rank[d]
    dual_verts = []
    for f in facets:
        idx = sorted(f)
        rows = [p.vertices[i] for i in idx]
        # pick n affinely spanning rows, then solve rows * v = 1
        chosen: list = []
        for r in rows:
            trial = chosen + [r]
            if linalg.rank(linalg.mat(trial), is_zero=_near_zero) == len(trial):
                chosen = trial
            if len(chosen) == n:
                break
        if len(chosen) < n:
            raise ValueError("facet does not span; origin may not be interior")
        v = linalg.solve(linalg.mat(chosen), tuple([1] * n), is_zero=_near_zero)
        dual_verts.append(tuple(v))
    lattice: dict = {}
    for kk in range(d + 1):
        src = p.faces_by_rank[d - kk]
        fs = [
            frozenset(i for i, f in enumerate(facets) if g <= f)
            for g in src
        ]
        lattice[kk] = _sorted_faces(fs)
    dual_family = None
    if p.family is not None:
        dual_family = {
            "simplex": p.family,
            "cube": Solid("cross", p.family.n),
            "cross": Solid("cube", p.family.n),
            "icosahedron": DODECAHEDRON,
            "dodecahedron": ICOSAHEDRON,
            "ngon": p.family,
        }.get(p.family.kind)
    return Polytope(tuple(dual_verts), lattice, family=dual_family)


def _near_zero(x) -> bool:
    if isinstance(x, float):
        return abs(x) < 1e-12
    return not x
