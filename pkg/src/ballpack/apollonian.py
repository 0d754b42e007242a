"""Reflection groups of polytopal ball packings and their orbit clusters.

A packing of d-balls carries a ladder of Mobius-map groups: the inversions
in its facet (dual) balls, those together with the packing's own reflection
symmetries, and the further extension by inversions in the packing's own
balls.  For the five regular polyhedra the frame can be normalized so that
every generator on the ladder is one of five concrete reflection matrices
over Z, Z[sqrt2] or Z[phi]; this module builds those generators, the
normalized seed packings they act on, and breadth-first orbit closures
("clusters") with exact or floating-point deduplication.  A separate walk
produces the sequence of balls of one such orbit whose curvatures are
exactly 0, 1, 4, 9, ...

Cluster generation is deterministic: entries are ordered by depth and then
by a canonical key of the stored row data (the same in all exact engine
modes), and each entry records the first shortest generator word that
produces it (ties broken by generator position).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from . import linalg
from .exactnum import (
    QuadScalar,
    approx,
    exact_sqrt,
    is_float_data,
    ratio,
    scalar_sign,
)
from .lorentz import (
    Ball,
    DISJOINT,
    EXTERNALLY_TANGENT,
    FLOAT_TOL,
    MobiusMap,
    apply_map,
    ball_from_geometry,
    classify_pair,
    inversion_map,
    lorentz_product,
    x_north,
)
from .packings import (
    BallArrangement,
    _reflection_swapping,
    _translation_map,
    dual,
    project,
    standard_form,
    with_dual,
)
from .polytopes import (
    ICOSAHEDRON,
    OCTAHEDRON,
    PHI,
    PLATONIC,
    SQRT2,
    TETRAHEDRON,
    Solid,
    face_cycle,
    regular_edge_scribed,
)

FLAVOR_DUAL = "A"  # inversions in the facet balls
FLAVOR_PRIMAL = "A*"  # inversions in the packing's own balls
FLAVOR_SYMMETRIZED = "SA"  # facet inversions plus the packing symmetries
FLAVOR_FULL = "SSA"  # both inversion families plus the symmetries

ROLE_DUAL_INVERSION = "dual_inversion"
ROLE_PRIMAL_INVERSION = "primal_inversion"
ROLE_SYMMETRY = "symmetry"

_FLAVORS = (FLAVOR_DUAL, FLAVOR_PRIMAL, FLAVOR_SYMMETRIZED, FLAVOR_FULL)


# -- canonical keys -------------------------------------------------------------


def scalar_key(x):
    """Hashable, orderable canonical form of one coordinate.

    Floats are rounded to 1e-7 (with -0.0 normalized); exact values become
    the tuple (a_num, a_den, b_num, b_den, m) of their field representation.
    """
    if isinstance(x, float):
        return round(x, 7) + 0.0
    if isinstance(x, QuadScalar):
        a, b, m = x.a, x.b, (x.m or 0)
    else:
        a, b, m = Fraction(x), Fraction(0), 0
    return (a.numerator, a.denominator, b.numerator, b.denominator, m)


def canonical_ball_key(b: Ball) -> tuple:
    """Deduplication key of a ball: the normalized coordinate tuple."""
    return tuple(scalar_key(x) for x in b.v)


# -- generator sets -------------------------------------------------------------


def _is_involution(m: MobiusMap, tol: float = FLOAT_TOL) -> bool:
    sq = (m @ m).mat
    n = len(sq)
    floaty = any(is_float_data(r) for r in sq)
    for i in range(n):
        for j in range(n):
            want = 1 if i == j else 0
            if floaty:
                if abs(approx(sq[i][j]) - want) > tol:
                    return False
            elif sq[i][j] != want:
                return False
    return True


@dataclass(frozen=True)
class Generator:
    """A named involution with its structural role in the group."""

    name: str
    role: str
    map: MobiusMap


@dataclass(frozen=True)
class GeneratorSet:
    """Named involutive Mobius maps generating one group of the ladder."""

    flavor: str
    generators: tuple
    seed: Optional[BallArrangement] = None

    def __post_init__(self):
        if self.flavor not in _FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if not self.generators:
            raise ValueError("generator set is empty")
        dims = {g.map.dimension for g in self.generators}
        if len(dims) != 1:
            raise ValueError("generators of mixed dimensions")
        for g in self.generators:
            if not _is_involution(g.map):
                raise ValueError(f"generator {g.name!r} is not an involution")

    @property
    def dimension(self) -> int:
        return self.generators[0].map.dimension

    @property
    def names(self) -> tuple:
        return tuple(g.name for g in self.generators)

    @property
    def maps(self) -> tuple:
        return tuple(g.map for g in self.generators)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def by_name(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)


# -- the normalized Platonic frame ----------------------------------------------

# 2 cos(pi/q) for the three triangular-faced polyhedra, exactly
_COS_DOUBLE = {3: 1, 4: SQRT2, 5: PHI}
_TRIANGULAR = {3: TETRAHEDRON, 4: OCTAHEDRON, 5: ICOSAHEDRON}


def _mirror_x(offset) -> MobiusMap:
    """Reflection of the plane in the vertical line {x = offset}."""
    return inversion_map(ball_from_geometry(2, normal=(1, 0), offset=offset))


def _coxeter_path_matrices(q: int) -> dict:
    """The five reflection generators of the normalized {3,q} frame.

    In the frame, one edge's balls are the half-planes {y >= 1} and
    {y <= -1} and their common neighbour is the unit disk at the origin.
    The maps are, in path order: inversion in the upper half-plane ball,
    the horizontal mirror, inversion in the circle of radius 2 centered at
    (0, 1), the vertical mirror at x = -2cos(pi/q), and the vertical mirror
    at x = 0 (the inversion in the marked facet ball).
    """
    if q not in _COS_DOUBLE:
        raise ValueError(f"no triangular-faced polyhedron with {q} faces at a vertex")
    c = _COS_DOUBLE[q]
    return {
        "s_v": inversion_map(Ball((0, 1, 1, 1))),
        "r_v": inversion_map(Ball((0, 1, 0, 0))),
        "r_e": inversion_map(ball_from_geometry(2, center=(0, 1), curvature=Fraction(1, 2))),
        "r_f": _mirror_x(-c),
        "s_f": inversion_map(Ball((1, 0, 0, 0))),
    }


def _normalized_triangular_packing(q: int) -> BallArrangement:
    """The projected {3,q} packing moved into the frame of the generators.

    The first edge's balls become {y >= 1} and {y <= -1}, the third vertex
    of the first facet containing that edge becomes the unit disk at the
    origin, and the leftover mirror ambiguity is fixed so that the vertical
    symmetry line of the packing sits at x = -2cos(pi/q).
    """
    poly = regular_edge_scribed(_TRIANGULAR[q])
    arr = with_dual(project(poly))
    i, j = sorted(poly.edges[0])
    arr, _ = standard_form(arr, i, j)
    face = next(f for f in poly.faces(2) if {i, j} <= f)
    (w,) = sorted(face - {i, j})
    b = arr.balls[w]
    cx = ratio(b.v[0], b.curvature)
    if scalar_sign(cx) != 0:
        arr = arr.transformed(_translation_map((-cx, 0), 2))
    mirror = _mirror_x(-_COS_DOUBLE[q])
    keys = {canonical_ball_key(x) for x in arr.balls}
    if {canonical_ball_key(apply_map(mirror, x)) for x in arr.balls} != keys:
        arr = arr.transformed(inversion_map(Ball((1, 0, 0, 0))))
        keys = {canonical_ball_key(x) for x in arr.balls}
        if {canonical_ball_key(apply_map(mirror, x)) for x in arr.balls} != keys:
            raise RuntimeError("mirror normalization failed")  # pragma: no cover
    return arr


def platonic_generators(s: Solid) -> GeneratorSet:
    """The five named reflection generators of a Platonic packing's full group.

    For the triangular-faced solids the roles along the graph path read
    (ball inversion s_v, vertex mirror r_v, edge inversion r_e, facet mirror
    r_f, facet-ball inversion s_f).  A polyhedron with triangular vertex
    figures instead gets the same five matrices with the outer and the inner
    pairs swapped, acting on the dual seed.  The attached seed is the
    normalized standard packing of the frame.
    """
    if s not in PLATONIC:
        raise ValueError(f"{s.name} has no normalized generator frame")
    p, q = s.schlafli
    base_q = q if p == 3 else p
    mats = _coxeter_path_matrices(base_q)
    primal = _normalized_triangular_packing(base_q)
    if p == 3:
        seed = primal
        spelling = ("s_v", "r_v", "r_e", "r_f", "s_f")
    else:
        seed = dual(primal)
        spelling = ("s_f", "r_f", "r_e", "r_v", "s_v")
    roles = (
        ROLE_PRIMAL_INVERSION,
        ROLE_SYMMETRY,
        ROLE_SYMMETRY,
        ROLE_SYMMETRY,
        ROLE_DUAL_INVERSION,
    )
    names = ("s_v", "r_v", "r_e", "r_f", "s_f")
    gens = tuple(
        Generator(n, role, mats[key]) for n, role, key in zip(names, roles, spelling)
    )
    return GeneratorSet(FLAVOR_FULL, gens, seed)


def apollonian_group_from_packing(a: BallArrangement) -> GeneratorSet:
    """One inversion per facet ball of the arrangement.

    The arrangement must know its dual, either through an attached set of
    facet balls (see packings.with_dual) or through its polytope.
    """
    facets = dual(a).balls
    gens = tuple(
        Generator(f"s{i}", ROLE_DUAL_INVERSION, inversion_map(b))
        for i, b in enumerate(facets)
    )
    return GeneratorSet(FLAVOR_DUAL, gens, a)


# -- seeding a packing from three consecutive curvatures -------------------------


def _solve_gram(g3, rhs, exact: bool):
    if exact:
        return linalg.solve(g3, rhs)
    import numpy as np

    try:
        out = np.linalg.solve(
            np.array(g3, dtype=np.float64), np.array(rhs, dtype=np.float64)
        )
    except np.linalg.LinAlgError as err:
        raise ValueError(str(err))
    return tuple(float(x) for x in out)


def _future_null_with_products(vectors, ks, exact: bool):
    """A future light-like y with <y, x_i> = -k_i for the three anchors.

    The anchors span a rank-3 subspace; adding one more vertex vector turns
    the constraints into a line, and the light-cone condition into a
    quadratic whose two roots are the mirror completions.  The root with the
    larger free coefficient is preferred.
    """
    anchors = vectors[:3]
    g3 = linalg.mat([[lorentz_product(u, v) for v in anchors] for u in anchors])
    rhs = tuple(-k for k in ks)
    try:
        c0 = _solve_gram(g3, rhs, exact)
    except ValueError:
        raise ValueError("anchor balls do not span a rank-3 subspace")
    y0 = tuple(sum(c * x for c, x in zip(c0, cols)) for cols in zip(*anchors))
    last_error = "curvature triple has no future-pointing realization"
    for u in vectors[3:]:
        gu = tuple(-lorentz_product(u, v) for v in anchors)
        cn = _solve_gram(g3, gu, exact)
        yn = tuple(
            sum(c * x for c, x in zip(cn, cols)) + ux
            for ux, cols in zip(u, zip(*anchors))
        )
        qa = lorentz_product(yn, yn)
        qb = 2 * lorentz_product(y0, yn)
        qc = lorentz_product(y0, y0)
        try:
            roots = _quadratic_roots(qa, qb, qc, exact)
        except ValueError as err:
            last_error = str(err)
            continue
        for t in roots:
            try:
                y = tuple(a + t * b for a, b in zip(y0, yn))
            except ValueError:
                # the root lives in a different quadratic field than the
                # packing's coordinates, so no exact realization exists
                last_error = (
                    "the normalizing square root is not expressible in the "
                    "hosting field; use float mode for this seed"
                )
                break
            if all(scalar_sign(x) == 0 for x in y):
                continue
            if scalar_sign(y[-1]) > 0:
                return y
    raise ValueError(last_error)


def _quadratic_roots(qa, qb, qc, exact: bool) -> list:
    """Real roots of qa t^2 + qb t + qc in a fixed order; exact when asked."""
    if exact:
        if scalar_sign(qa) == 0:
            if scalar_sign(qb) == 0:
                if scalar_sign(qc) != 0:
                    raise ValueError("curvature triple is not realizable on this solid")
                return [0]
            return [ratio(-qc, qb)]
        disc = qb * qb - 4 * qa * qc
        if scalar_sign(disc) < 0:
            raise ValueError("curvature triple is not realizable on this solid")
        try:
            rad = exact_sqrt(disc)
        except ValueError:
            raise ValueError(
                "the normalizing square root is not expressible in the "
                "hosting field; use float mode for this seed"
            )
        return [ratio(-qb + rad, 2 * qa), ratio(-qb - rad, 2 * qa)]
    qa, qb, qc = approx(qa), approx(qb), approx(qc)
    if abs(qa) <= 1e-12:
        if abs(qb) <= 1e-12:
            if abs(qc) > 1e-9:
                raise ValueError("curvature triple is not realizable on this solid")
            return [0.0]
        return [-qc / qb]
    disc = qb * qb - 4 * qa * qc
    if disc < -1e-9:
        raise ValueError("curvature triple is not realizable on this solid")
    rad = math.sqrt(max(disc, 0.0))
    return [(-qb + rad) / (2 * qa), (-qb - rad) / (2 * qa)]


def _map_null_to_north(y, d: int) -> MobiusMap:
    """An orthochronous map sending the future null vector y to the probe
    direction e_{d+1} + e_{d+2}."""
    target = x_north(d)
    h = lorentz_product(y, target)
    if scalar_sign(h) != 0:
        m = _reflection_swapping(y, target, d)
        if m is None:  # pragma: no cover - h != 0 guarantees a space-like mirror
            raise ValueError("could not build the normalizing reflection")
        return m
    c = y[-1]  # y is a positive multiple of the target
    mu = ratio(1, c)
    plus = ratio(mu + ratio(1, mu), 2)
    minus = ratio(mu - ratio(1, mu), 2)
    size = d + 2
    rows = []
    for i in range(size):
        row = [1 if i == j else 0 for j in range(size)]
        if i == size - 2:
            row[size - 2], row[size - 1] = plus, minus
        elif i == size - 1:
            row[size - 2], row[size - 1] = minus, plus
        rows.append(tuple(row))
    return MobiusMap(rows, check=False)


def packing_from_curvatures(s: Solid, triple, *, exact: bool = True) -> BallArrangement:
    """A Mobius image of the projected solid realizing three given curvatures.

    The curvatures are assigned, in order, to the first three vertices in
    cyclic order around the solid's first 2-face ("consecutive" balls: each
    tangent to the next).  The image is pinned by a future light-like vector
    reproducing the curvature functional, so all remaining curvatures follow
    from the solid's own relations.  Facet balls are attached and ride along.
    """
    triple = tuple(triple)
    if len(triple) != 3:
        raise ValueError("need exactly three consecutive curvatures")
    poly = regular_edge_scribed(s)
    arr = with_dual(project(poly))
    if not exact:
        arr = arr.approx()
        triple = tuple(float(approx(k)) for k in triple)
    cyc = face_cycle(poly, poly.faces(2)[0])
    anchors = cyc[:3]
    rest = [v for v in range(len(arr.balls)) if v not in anchors]
    vectors = [arr.balls[v].v for v in list(anchors) + rest]
    y = _future_null_with_products(vectors, tuple(triple), exact)
    m = _map_null_to_north(y, arr.dimension)
    out = arr.transformed(m)
    for v, k in zip(anchors, triple):
        got = out.balls[v].curvature
        if exact:
            if got != k:  # pragma: no cover - internal consistency
                raise RuntimeError(f"seed curvature drifted: {got} != {k}")
        elif abs(got - k) > 1e-6:  # pragma: no cover
            raise RuntimeError(f"seed curvature drifted: {got} != {k}")
    return out


# -- clusters ---------------------------------------------------------------------


@dataclass(frozen=True)
class ClusterEntry:
    """One deduplicated ball of a cluster with its provenance."""

    ball: Ball
    curvature: object
    depth: int
    word: tuple
    orbit: int


class _Store:
    """Compact per-level storage backing a Cluster.

    Exact rows keep a primitive integer vector plus one reduced fraction
    num/den scaling the whole row, so coordinates never accumulate common
    denominators.  mode "i64" holds numpy int64 arrays ("A"/"B" for the
    rational and sqrt parts, "num"/"den" per row); mode "obj" holds python
    integer rows (flat tuple, num, den); mode "float" holds float64 rows.
    """

    __slots__ = ("mode", "m", "nb", "levels", "offsets", "order", "count")

    def __init__(self, mode, m, nb):
        self.mode = mode
        self.m = m
        self.nb = nb
        self.levels = []
        self.offsets = [0]
        self.order = []
        self.count = 0

    def close_level(self, level) -> None:
        self.levels.append(level)
        self.count += level["n"]
        self.offsets.append(self.count)

    def locate(self, gidx: int):
        k = 0
        while self.offsets[k + 1] <= gidx:
            k += 1
        return k, gidx - self.offsets[k]

    def _pair(self, ka, kb, num, den):
        a = Fraction(int(ka) * int(num), int(den))
        if kb:
            return QuadScalar(a, Fraction(int(kb) * int(num), int(den)), self.m)
        return a

    def _row(self, k: int, i: int):
        lv = self.levels[k]
        if self.mode == "i64":
            return lv["A"][i], lv["B"][i], lv["num"][i], lv["den"][i]
        flat, num, den = lv["V"][i]
        return flat[: self.nb], flat[self.nb :], num, den

    def vector(self, k: int, i: int) -> tuple:
        if self.mode == "float":
            return tuple(float(x) for x in self.levels[k]["V"][i])
        row_a, row_b, num, den = self._row(k, i)
        return tuple(self._pair(a, b, num, den) for a, b in zip(row_a, row_b))

    def curvature(self, k: int, i: int):
        if self.mode == "float":
            row = self.levels[k]["V"][i]
            return float(row[-1] - row[-2])
        row_a, row_b, num, den = self._row(k, i)
        return self._pair(
            int(row_a[-1]) - int(row_a[-2]), int(row_b[-1]) - int(row_b[-2]), num, den
        )

    def row_meta(self, k: int, i: int):
        lv = self.levels[k]
        return int(lv["gen"][i]), int(lv["parent"][i]), int(lv["orbit"][i])


class Cluster:
    """Deduplicated breadth-first closure of a seed packing.

    Entries are ordered by depth and then by the canonical key of the
    stored row, so the order is reproducible across runs and engine modes;
    materializing entries is lazy, so very large exact clusters can still
    stream curvatures without building Ball objects.
    """

    __slots__ = ("seed", "flavor", "depth", "generator_names", "_store", "_entries")

    def __init__(self, seed, flavor, depth, generator_names, store):
        self.seed = seed
        self.flavor = flavor
        self.depth = depth
        self.generator_names = generator_names
        self._store = store
        self._entries = None

    def __len__(self):
        return self._store.count

    def __repr__(self):
        return (
            f"Cluster(flavor={self.flavor!r}, depth={self.depth}, "
            f"entries={len(self)})"
        )

    def _word(self, gidx: int) -> tuple:
        out = []
        st = self._store
        while gidx >= 0:
            k, i = st.locate(gidx)
            gen, parent, _ = st.row_meta(k, i)
            if gen >= 0:
                out.append(self.generator_names[gen])
            gidx = parent
        return tuple(reversed(out))

    def entry(self, i: int) -> ClusterEntry:
        st = self._store
        gidx = st.order[i]
        k, li = st.locate(gidx)
        _, _, orbit = st.row_meta(k, li)
        vec = st.vector(k, li)
        return ClusterEntry(
            ball=Ball(vec, _checked=True),
            curvature=st.curvature(k, li),
            depth=k,
            word=self._word(gidx),
            orbit=orbit,
        )

    def __iter__(self) -> Iterator[ClusterEntry]:
        if self._entries is not None:
            return iter(self._entries)
        return (self.entry(i) for i in range(len(self)))

    @property
    def entries(self) -> tuple:
        if self._entries is None:
            self._entries = tuple(self.entry(i) for i in range(len(self)))
        return self._entries

    def curvatures(self) -> Iterator:
        st = self._store
        for gidx in st.order:
            k, i = st.locate(gidx)
            yield st.curvature(k, i)

    def curvatures_in_ring(self, ring: str) -> bool:
        """True iff every curvature is an algebraic integer of the ring.

        Runs on the internal level arrays, so million-entry exact clusters
        are checked in bulk; float clusters cannot certify integrality.
        """
        from .exactnum import RING_Z, RING_Z_PHI, RING_Z_SQRT2

        if ring not in (RING_Z, RING_Z_SQRT2, RING_Z_PHI):
            raise ValueError(f"unknown ring {ring!r}")
        st = self._store
        if st.mode == "float":
            raise ValueError("integrality needs an exact cluster")
        # value = (ka + kb sqrt m) * num / den; membership conditions:
        #   Z       : kb = 0 and den | ka num
        #   Z[sqrt2]: den | ka num and den | kb num          (m = 2)
        #   Z[phi]  : den | 2 kb num and den | (ka - kb) num (m = 5)
        for k, lv in enumerate(st.levels):
            if st.mode == "i64":
                import numpy as np

                ka = lv["A"][:, -1] - lv["A"][:, -2]
                kb = lv["B"][:, -1] - lv["B"][:, -2]
                num, den = lv["num"], lv["den"]
                big = 4 * int(np.abs(ka).max(initial=0) + np.abs(kb).max(initial=0) + 1)
                if big * int(num.max(initial=1)) >= 2**63:
                    rows = zip(ka.tolist(), kb.tolist(), num.tolist(), den.tolist())
                    ok = _ring_rows_ok(rows, ring, st.m)
                elif ring == RING_Z_SQRT2 and st.m == 2:
                    ok = bool(
                        ((ka * num) % den == 0).all() and ((kb * num) % den == 0).all()
                    )
                elif ring == RING_Z_PHI and st.m == 5:
                    ok = bool(
                        ((2 * kb * num) % den == 0).all()
                        and (((ka - kb) * num) % den == 0).all()
                    )
                else:  # rational integers are the only members left to allow
                    ok = bool((kb == 0).all() and ((ka * num) % den == 0).all())
            else:
                rows = (
                    (
                        flat[st.nb - 1] - flat[st.nb - 2],
                        flat[2 * st.nb - 1] - flat[2 * st.nb - 2],
                        num,
                        den,
                    )
                    for flat, num, den in lv["V"]
                )
                ok = _ring_rows_ok(rows, ring, st.m)
            if not ok:
                return False
        return True


def _ring_rows_ok(rows, ring: str, m: int) -> bool:
    from .exactnum import RING_Z_PHI, RING_Z_SQRT2

    if ring == RING_Z_SQRT2 and m == 2:
        return all(
            (ka * num) % den == 0 and (kb * num) % den == 0 for ka, kb, num, den in rows
        )
    if ring == RING_Z_PHI and m == 5:
        return all(
            (2 * kb * num) % den == 0 and ((ka - kb) * num) % den == 0
            for ka, kb, num, den in rows
        )
    return all(kb == 0 and (ka * num) % den == 0 for ka, kb, num, den in rows)


def _exact_parts(x):
    if isinstance(x, QuadScalar):
        return x.a, x.b, (x.m or 0)
    return Fraction(x), Fraction(0), 0


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _reduce_row(flat, num: int, den: int):
    """Pull the content out of an integer row: (primitive row, num', den')."""
    c = 0
    for x in flat:
        c = math.gcd(c, x)
    num *= c
    flat = tuple(x // c for x in flat)
    g = math.gcd(num, den)
    return flat, num // g, den // g


def _group_ranges(groups) -> list:
    """Half-open ranges of equal consecutive values in a sorted int list."""
    ranges = []
    lo = 0
    for i in range(1, len(groups) + 1):
        if i == len(groups) or groups[i] != groups[lo]:
            ranges.append((lo, i))
            lo = i
    return ranges


def generate_cluster(seed: BallArrangement, gens: GeneratorSet, depth: int = 5) -> Cluster:
    """Breadth-first closure of the seed balls under the generators.

    Words grow on the left (a child is g applied to its parent), repeats of
    the generator just applied are pruned, and balls are deduplicated by
    canonical key: the normalized coordinate tuple in exact mode, the
    coordinates rounded to 1e-7 in float mode.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if gens.dimension != seed.dimension:
        raise ValueError("generator and seed dimensions differ")
    mats = [g.map.mat for g in gens.generators]
    floaty = any(is_float_data(b.v) for b in seed.balls) or any(
        any(is_float_data(r) for r in m) for m in mats
    )
    if floaty:
        store = _bfs_float(seed, mats, depth)
    else:
        store = _bfs_exact(seed, mats, depth)
    return Cluster(seed, gens.flavor, depth, gens.names, store)


def _bfs_exact(seed: BallArrangement, mats, depth: int) -> _Store:
    nb = seed.dimension + 2
    m = 0
    seed_rows = []
    for b in seed.balls:
        parts = []
        den = 1
        for x in b.v:
            a, bb, mm = _exact_parts(x)
            m = _merge_modulus(m, mm)
            den = _lcm(den, _lcm(a.denominator, bb.denominator))
            parts.append((a, bb))
        flat = tuple(int(a * den) for a, _ in parts) + tuple(
            int(bb * den) for _, bb in parts
        )
        seed_rows.append(_reduce_row(flat, 1, den))
    mats_int, den_gens = [], []
    for mt in mats:
        rows_p = []
        dg = 1
        for r in mt:
            row = []
            for x in r:
                a, bb, mm = _exact_parts(x)
                m = _merge_modulus(m, mm)
                dg = _lcm(dg, _lcm(a.denominator, bb.denominator))
                row.append((a, bb))
            rows_p.append(row)
        mats_int.append([[(int(a * dg), int(bb * dg)) for a, bb in row] for row in rows_p])
        den_gens.append(dg)

    # worst growth of any coordinate across one application of any generator
    factor = 1
    for rows in mats_int:
        for row in rows:
            fa = sum(abs(a) for a, _ in row)
            fb = sum(abs(bb) for _, bb in row)
            factor = max(factor, fa + m * fb, fa + fb)
    try:
        return _bfs_exact_i64(seed_rows, mats_int, den_gens, m, depth, nb, factor)
    except (_NeedsBigInts, OverflowError):
        return _bfs_exact_obj(seed_rows, mats_int, den_gens, m, depth, nb)


def _merge_modulus(m1: int, m2: int) -> int:
    if m1 == 0:
        return m2
    if m2 == 0 or m2 == m1:
        return m1
    raise ValueError(f"cannot mix the fields Q(sqrt {m1}) and Q(sqrt {m2})")


class _NeedsBigInts(Exception):
    """Raised when a level could overflow int64; retried with python ints."""


def _bfs_exact_i64(seed_rows, mats_int, den_gens, m, depth, nb, factor) -> _Store:
    """Vectorized engine: whole levels as int64 arrays, keys as packed rows.

    A key row is (primitive integer vector, reduced numerator, reduced
    denominator); flipping the sign bit and byteswapping makes the raw-byte
    order of a row agree with numeric lexicographic order, so dedup and the
    exposure sort both run on a void view without touching python objects.
    Before each level a one-step lookahead checks that no product can reach
    2^63; if it could, the whole run is redone with arbitrary precision.
    """
    import numpy as np

    sign_flip = np.int64(-(2**63))
    limit = 2**63

    def pack(P, num, den):
        K = np.concatenate([P, num[:, None], den[:, None]], axis=1)
        U = np.ascontiguousarray((K ^ sign_flip).view(np.uint64).byteswap())
        return U.view(np.dtype((np.void, U.shape[1] * 8))).ravel()

    if any(
        abs(x) >= limit for flat, num, den in seed_rows for x in (*flat, num, den)
    ) or any(abs(x) >= limit for rows in mats_int for r in rows for ab in r for x in ab):
        raise _NeedsBigInts

    store = _Store("i64", m, nb)
    P0 = np.array([flat for flat, _, _ in seed_rows], dtype=np.int64)
    num0 = np.array([num for _, num, _ in seed_rows], dtype=np.int64)
    den0 = np.array([den for _, _, den in seed_rows], dtype=np.int64)
    keys0 = pack(P0, num0, den0)
    _, first = np.unique(keys0, return_index=True)
    sel = np.sort(first)
    store.order.extend(np.argsort(keys0[sel]).tolist())
    store.close_level(
        {
            "n": int(sel.size),
            "A": P0[sel, :nb],
            "B": P0[sel, nb:],
            "num": num0[sel],
            "den": den0[sel],
            "gen": np.full(sel.size, -1, dtype=np.int64),
            "parent": np.full(sel.size, -1, dtype=np.int64),
            "orbit": sel.astype(np.int64),
            "group": np.zeros(sel.size, dtype=np.int64),
        }
    )
    seen = np.sort(keys0[sel])

    Ma = [np.array([[a for a, _ in r] for r in rows], dtype=np.int64) for rows in mats_int]
    Mb = [np.array([[b for _, b in r] for r in rows], dtype=np.int64) for rows in mats_int]
    dg_arr = np.array(den_gens, dtype=np.int64)
    G = len(mats_int)

    for k in range(1, depth + 1):
        prev = store.levels[k - 1]
        n = prev["n"]
        if n == 0:
            break
        max_p = max(int(np.abs(prev["A"]).max()), int(np.abs(prev["B"]).max()), 1)
        if (
            max_p * factor >= limit
            or int(prev["num"].max()) * max_p * factor >= limit
            or int(prev["den"].max()) * max(den_gens) >= limit
        ):
            raise _NeedsBigInts
        Acat = np.concatenate(
            [
                prev["A"] @ Ma[g].T + (m * (prev["B"] @ Mb[g].T) if m else 0)
                for g in range(G)
            ],
            axis=0,
        )
        Bcat = np.concatenate(
            [prev["A"] @ Mb[g].T + prev["B"] @ Ma[g].T for g in range(G)], axis=0
        )
        Y = np.concatenate([Acat, Bcat], axis=1)
        content = np.gcd.reduce(np.abs(Y), axis=1)
        P = Y // content[:, None]
        num = np.tile(prev["num"], G) * content
        den = np.tile(prev["den"], G) * np.repeat(dg_arr, n)
        shrink = np.gcd(num, den)
        num //= shrink
        den //= shrink
        keys = pack(P, num, den)
        gg = np.repeat(np.arange(G, dtype=np.int64), n)
        pp = np.tile(np.arange(n, dtype=np.int64), G)
        grp = np.tile(prev["group"], G)
        order = np.lexsort((pp, gg, grp))  # production order: word group, gen, parent
        order = order[np.tile(prev["gen"], G)[order] != gg[order]]  # prune g == last
        if order.size == 0:
            break
        uniq, first = np.unique(keys[order], return_index=True)
        pos = np.minimum(np.searchsorted(seen, uniq), len(seen) - 1)
        fresh = seen[pos] != uniq
        first = np.sort(first[fresh])
        if first.size == 0:
            break
        sel = order[first]
        p_lv = sel % n
        g_lv = sel // n
        pair = prev["group"][p_lv] * G + g_lv  # nondecreasing along production order
        group = np.cumsum(np.concatenate([[0], (np.diff(pair) != 0).astype(np.int64)]))
        base = store.offsets[-1]
        store.order.extend((base + np.argsort(keys[sel])).tolist())
        store.close_level(
            {
                "n": int(sel.size),
                "A": P[sel, :nb],
                "B": P[sel, nb:],
                "num": num[sel],
                "den": den[sel],
                "gen": g_lv,
                "parent": store.offsets[k - 1] + p_lv,
                "orbit": prev["orbit"][p_lv],
                "group": group,
            }
        )
        seen = np.sort(np.concatenate([seen, keys[sel]]))
    return store


def _bfs_exact_obj(seed_rows, mats_int, den_gens, m, depth, nb) -> _Store:
    """Arbitrary-precision fallback for the exact engine."""

    def matvec(rows, flat):
        out_a, out_b = [], []
        for row in rows:
            sa = 0
            sb = 0
            for (ma, mb), xa, xb in zip(row, flat[:nb], flat[nb:]):
                sa += ma * xa + m * mb * xb
                sb += ma * xb + mb * xa
            out_a.append(sa)
            out_b.append(sb)
        return tuple(out_a) + tuple(out_b)

    store = _Store("obj", m, nb)
    index = set()
    rows0, keys0, meta0 = [], [], []
    for i, row in enumerate(seed_rows):
        key = (row[0], row[1], row[2])
        if key in index:
            continue
        index.add(key)
        rows0.append(row)
        keys0.append(key)
        meta0.append(i)
    level = {
        "n": len(rows0),
        "V": rows0,
        "gen": [-1] * len(rows0),
        "parent": [-1] * len(rows0),
        "orbit": meta0,
        "group": [0] * len(rows0),
    }
    _append_level_obj(store, level, keys0)
    for k in range(1, depth + 1):
        prev = store.levels[k - 1]
        if prev["n"] == 0:
            break
        rows_l, keys_l, gen_l, parent_l, orbit_l, group_l = [], [], [], [], [], []
        next_group = 0
        for lo, hi in _group_ranges(prev["group"]):
            for g, mrows in enumerate(mats_int):
                assigned = -1
                for p in range(lo, hi):
                    if prev["gen"][p] == g:
                        continue
                    flat, num, den = prev["V"][p]
                    row = _reduce_row(matvec(mrows, flat), num, den * den_gens[g])
                    if row in index:
                        continue
                    if assigned < 0:
                        assigned = next_group
                        next_group += 1
                    index.add(row)
                    rows_l.append(row)
                    keys_l.append(row)
                    gen_l.append(g)
                    parent_l.append(store.offsets[k - 1] + p)
                    orbit_l.append(prev["orbit"][p])
                    group_l.append(assigned)
        if not rows_l:
            break
        level = {
            "n": len(rows_l),
            "V": rows_l,
            "gen": gen_l,
            "parent": parent_l,
            "orbit": orbit_l,
            "group": group_l,
        }
        _append_level_obj(store, level, keys_l)
    return store


def _append_level_obj(store: _Store, level, keys) -> None:
    base = store.offsets[-1]
    order = sorted(range(len(keys)), key=keys.__getitem__)
    store.order.extend(base + i for i in order)
    store.close_level(level)


def _bfs_float(seed: BallArrangement, mats, depth: int) -> _Store:
    import numpy as np

    nb = seed.dimension + 2
    store = _Store("float", 0, nb)
    index = {}

    def canon(V):
        R = np.round(V, 7) + 0.0
        buf = R.tobytes()
        stride = nb * 8
        return [buf[i * stride : (i + 1) * stride] for i in range(V.shape[0])]

    V0 = np.array([[float(approx(x)) for x in b.v] for b in seed.balls], dtype=np.float64)
    keys0 = canon(V0)
    keep, kept_keys = [], []
    for i, key in enumerate(keys0):
        if key in index:
            continue
        index[key] = len(keep)
        keep.append(i)
        kept_keys.append(key)
    level = {
        "n": len(keep),
        "V": V0[keep],
        "gen": np.full(len(keep), -1, dtype=np.int64),
        "parent": np.full(len(keep), -1, dtype=np.int64),
        "orbit": np.array(keep, dtype=np.int64),
        "group": np.zeros(len(keep), dtype=np.int64),
    }
    _append_level_float(store, level, kept_keys, np)
    M = [np.array([[float(approx(x)) for x in r] for r in mt], dtype=np.float64) for mt in mats]
    for k in range(1, depth + 1):
        prev = store.levels[k - 1]
        n_prev = prev["n"]
        if n_prev == 0:
            break
        keys_all, Y_all = [], []
        for g in range(len(M)):
            Y = prev["V"] @ M[g].T
            keys_all.append(canon(Y))
            Y_all.append(Y)
        prev_gen = prev["gen"].tolist()
        prev_orbit = prev["orbit"].tolist()
        base = store.offsets[k]
        picks, kept_keys = [], []
        gen_l, parent_l, orbit_l, group_l = [], [], [], []
        next_group = 0
        for lo, hi in _group_ranges(prev["group"].tolist()):
            for g, keys_g in enumerate(keys_all):
                assigned = -1
                for p in range(lo, hi):
                    if prev_gen[p] == g:
                        continue
                    key = keys_g[p]
                    if key in index:
                        continue
                    if assigned < 0:
                        assigned = next_group
                        next_group += 1
                    index[key] = base + len(picks)
                    picks.append(g * n_prev + p)
                    kept_keys.append(key)
                    gen_l.append(g)
                    parent_l.append(store.offsets[k - 1] + p)
                    orbit_l.append(prev_orbit[p])
                    group_l.append(assigned)
        if not picks:
            break
        pick_arr = np.array(picks, dtype=np.int64)
        level = {
            "n": len(picks),
            "V": np.concatenate(Y_all, axis=0)[pick_arr],
            "gen": np.array(gen_l, dtype=np.int64),
            "parent": np.array(parent_l, dtype=np.int64),
            "orbit": np.array(orbit_l, dtype=np.int64),
            "group": np.array(group_l, dtype=np.int64),
        }
        _append_level_float(store, level, kept_keys, np)
    return store


def _append_level_float(store: _Store, level, kept_keys, np) -> None:
    base = store.offsets[-1]
    if kept_keys:
        stride = len(kept_keys[0])
        void = np.frombuffer(b"".join(kept_keys), dtype=f"V{stride}")
        order = np.argsort(void)
        store.order.extend(int(base + i) for i in order)
    store.close_level(level)


# -- cluster predicates -----------------------------------------------------------


def is_apollonian_packing(c: Cluster, tol: float = FLOAT_TOL) -> bool:
    """True iff all cluster balls are pairwise tangent or disjoint.

    Quadratic in the cluster size; meant for the shallow clusters where the
    question is interesting.
    """
    balls = [e.ball for e in c]
    n = len(balls)
    for i in range(n):
        for j in range(i + 1, n):
            if classify_pair(balls[i], balls[j], tol) not in (
                EXTERNALLY_TANGENT,
                DISJOINT,
            ):
                return False
    return True


def orbit_coloring(c: Cluster) -> dict:
    """Ball -> index of the seed ball whose orbit contains it.

    Only meaningful for the dual-inversion flavor, where distinct seed balls
    have disjoint orbits.
    """
    if c.flavor != FLAVOR_DUAL:
        raise ValueError("orbit coloring needs a dual-inversion cluster")
    return {e.ball: e.orbit for e in c}


# -- the perfect-square walk -------------------------------------------------------


def perfect_square_sequence(p: int, n_max: int) -> list:
    """Balls b_0, ..., b_{n_max} of one packing orbit with curvature exactly n^2.

    The standard triangular-faced packing with p balls around a face is
    rescaled by lambda = 4 cos^2(pi/p), so the marked tangent pair becomes
    the half-planes {y <= -lambda} and {y >= lambda}.  Conjugating n
    alternating vertical-mirror steps by the inversion in the rescaled edge
    circle then lands on a ball of curvature n^2; everything stays in the
    field hosting sqrt(lambda).
    """
    if p not in _COS_DOUBLE:
        raise ValueError("p must be 3, 4 or 5")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    c = _COS_DOUBLE[p]
    lam = c * c
    edge = inversion_map(
        ball_from_geometry(2, center=(0, -lam), curvature=ratio(1, 2 * c))
    )
    step = _mirror_x(-c) @ inversion_map(Ball((1, 0, 0, 0)))
    start = ball_from_geometry(2, normal=(0, 1), offset=lam)
    out = []
    walk = MobiusMap.identity(2)
    for n in range(n_max + 1):
        out.append((n, apply_map(edge @ walk @ edge, start)))
        walk = walk @ step
    return out
