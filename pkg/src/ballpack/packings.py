"""Ball arrangements obtained by projecting outer-sphere polytopes.

Every vertex of an outer-sphere polytope is the light source of a ball; the
arrangement of those balls is the polytope's projection.  Edge-scribed
realizations project to packings whose tangency graph is the polytope graph.
This module adds centered projections (a chosen face sent to infinity),
polar-dual arrangements, the two-half-space standard form, Gramians, and
Mobius spectra/equivalence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg
from .exactnum import approx, is_float_data, ratio, scalar_sign
from .lorentz import (
    Ball,
    DISJOINT,
    EQUAL,
    EXTERNALLY_TANGENT,
    FLOAT_TOL,
    MobiusMap,
    apply_map,
    ball_from_light_source,
    classify_pair,
    lorentz_product,
)
from .polytopes import Polytope, Solid, face_barycenter, polar_dual, regular_edge_scribed


@dataclass(frozen=True)
class BallArrangement:
    """An ordered list of same-dimensional balls, optionally tied to a polytope.

    ``dual_balls`` (one per facet, when present) ride along under Mobius
    transforms, so a moved packing still knows the balls orthogonal to its
    facets; see :func:`with_dual`.
    """

    balls: tuple
    polytope: Optional[Polytope] = None
    dual_balls: Optional[tuple] = None

    def __post_init__(self):
        if not self.balls:
            raise ValueError("arrangement needs at least one ball")
        d = self.balls[0].dimension
        if any(b.dimension != d for b in self.balls):
            raise ValueError("balls of mixed dimensions")

    @property
    def dimension(self) -> int:
        return self.balls[0].dimension

    def __len__(self):
        return len(self.balls)

    def __getitem__(self, i):
        return self.balls[i]

    def curvatures(self) -> tuple:
        return tuple(b.curvature for b in self.balls)

    def transformed(self, m: MobiusMap) -> "BallArrangement":
        moved_dual = None
        if self.dual_balls is not None:
            moved_dual = tuple(apply_map(m, b) for b in self.dual_balls)
        return BallArrangement(
            tuple(apply_map(m, b) for b in self.balls), self.polytope, moved_dual
        )

    def approx(self) -> "BallArrangement":
        dual = None
        if self.dual_balls is not None:
            dual = tuple(b.approx() for b in self.dual_balls)
        return BallArrangement(tuple(b.approx() for b in self.balls), self.polytope, dual)


def project(p: Polytope) -> BallArrangement:
    """One ball per vertex, via the light-source correspondence."""
    return BallArrangement(tuple(ball_from_light_source(u) for u in p.vertices), p)


def with_dual(a: BallArrangement) -> BallArrangement:
    """A copy of the arrangement with its facet balls attached.

    Only an untransformed projection can compute them from the polytope, so
    call this before applying any Mobius map.
    """
    if a.dual_balls is not None:
        return a
    if a.polytope is None:
        raise ValueError("attaching a dual needs the arrangement's polytope")
    return BallArrangement(a.balls, a.polytope, project(polar_dual(a.polytope)).balls)


def is_packing(a: BallArrangement) -> bool:
    """True iff all pairs are externally tangent or disjoint."""
    n = len(a.balls)
    for i in range(n):
        for j in range(i + 1, n):
            if classify_pair(a.balls[i], a.balls[j]) not in (
                EXTERNALLY_TANGENT,
                DISJOINT,
            ):
                return False
    return True


def _rotation_to_north(direction, n: int):
    """(n x n) float rotation sending the given direction to +e_n, minimally."""
    a = [float(x) for x in direction]
    norm = math.sqrt(sum(x * x for x in a))
    a = [x / norm for x in a]
    c = a[-1]  # cos(theta) against the north axis
    s2 = 1 - c * c
    if s2 < 1e-30:
        if c > 0:
            return linalg.identity(n)
        # antipodal: half-turn in the plane of the axis and a perpendicular
        u = [0.0] * n
        u[0] = 1.0 if abs(a[0]) < 0.9 else 0.0
        if not any(u):
            u[1] = 1.0
        dot = sum(x * y for x, y in zip(u, a))
        u = [x - dot * y for x, y in zip(u, a)]
        un = math.sqrt(sum(x * x for x in u))
        u = [x / un for x in u]
        rows = []
        for i in range(n):
            rows.append(
                tuple(
                    (1.0 if i == j else 0.0) - 2 * a[i] * a[j] - 2 * u[i] * u[j]
                    for j in range(n)
                )
            )
        return tuple(rows)
    s = math.sqrt(s2)
    t = [0.0] * (n - 1) + [1.0]
    v = [(x - c * y) / s for x, y in zip(t, a)]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            e = 1.0 if i == j else 0.0
            row.append(
                e + (c - 1) * (a[i] * a[j] + v[i] * v[j]) + s * (v[i] * a[j] - a[i] * v[j])
            )
        rows.append(tuple(row))
    return tuple(rows)


def centered_projection(s: Solid, k: int) -> BallArrangement:
    """Projection with the barycenter of a k-face rotated to the north ray.

    The chosen face's barycenter goes to infinity under stereographic
    projection, so e.g. vertex-centering produces one ball containing all
    the others (its curvature is the only negative entry).
    """
    p = regular_edge_scribed(s)
    if k not in p.faces_by_rank:
        raise ValueError(f"rank {k} out of range 0..{p.dimension}")
    f = p.faces_by_rank[k][0]
    bary = face_barycenter(p, f)
    rot = _rotation_to_north(bary, p.ambient_dimension)
    verts = tuple(
        tuple(float(approx(x)) for x in linalg.mat_vec(rot, tuple(map(approx, u))))
        for u in p.vertices
    )
    rotated = Polytope(verts, p.faces_by_rank, family=p.family)
    return project(rotated)


def dual(a: BallArrangement) -> BallArrangement:
    """One ball per facet, orthogonal to the balls of the facet's vertices.

    If the arrangement carries attached dual balls they are used directly
    (correct for transformed packings); otherwise the polar dual polytope is
    projected, which is only faithful for unmoved projections.
    """
    if a.dual_balls is not None:
        dual_poly = polar_dual(a.polytope) if a.polytope is not None else None
        return BallArrangement(a.dual_balls, dual_poly, a.balls)
    if a.polytope is None:
        raise ValueError("dual needs the arrangement's polytope")
    return BallArrangement(
        project(polar_dual(a.polytope)).balls, polar_dual(a.polytope), a.balls
    )


def gram(a: BallArrangement):
    """Gramian of the arrangement: pairwise Lorentz products."""
    vs = [b.v for b in a.balls]
    return linalg.mat(
        [[lorentz_product(u, v) for v in vs] for u in vs]
    )


# -- standard form -------------------------------------------------------------


def _half_space_x_last(d: int, sign: int) -> Ball:
    # {x_d >= 1} for sign +1, {x_d <= -1} for sign -1
    v = [0] * (d - 1) + [sign, 1, 1]
    return Ball(tuple(v))


def _reflection_swapping(x, t, d: int) -> Optional[MobiusMap]:
    """Lorentz reflection exchanging unit space-like vectors x and t, if sound."""
    n = tuple(a - b for a, b in zip(x, t))
    nn = lorentz_product(n, n)
    if scalar_sign(nn) <= 0 or (is_float_data(n) and abs(nn) < 1e-12):
        return None
    size = d + 2
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            q = -1 if j == size - 1 else 1
            e = 1 if i == j else 0
            row.append(e - ratio(2 * n[i] * n[j] * q, nn))
        rows.append(tuple(row))
    return MobiusMap(rows, check=False)


def _vec_close(u, v) -> bool:
    if is_float_data(u) or is_float_data(v):
        return all(abs(approx(x) - approx(y)) <= FLOAT_TOL for x, y in zip(u, v))
    return tuple(u) == tuple(v)


def _two_reflections(x_i, x_j, t_i, t_j, d: int) -> Optional[MobiusMap]:
    """Map with x_i -> t_i and x_j -> t_j, as at most two reflections."""
    if _vec_close(x_i, t_i):
        m1 = MobiusMap.identity(d)
    else:
        m1 = _reflection_swapping(x_i, t_i, d)
        if m1 is None:
            return None
    moved = linalg.mat_vec(m1.mat, x_j)
    if _vec_close(moved, t_j):
        return m1
    m2 = _reflection_swapping(moved, t_j, d)
    if m2 is None:
        return None
    m = m2 @ m1
    # the second reflection fixes t_i when <moved - t_j, t_i> = 0; verify
    if not _vec_close(linalg.mat_vec(m.mat, x_i), t_i):
        return None
    return m


def _generic_premaps(d: int):
    from .lorentz import ball_from_geometry, inversion_map

    yield MobiusMap.identity(d)
    center = tuple([Fraction(1, 3)] + [Fraction(1, 7)] * (d - 1))
    yield inversion_map(ball_from_geometry(d, center=center, curvature=2))
    center2 = tuple([Fraction(-2, 5)] + [Fraction(1, 2)] * (d - 1))
    yield inversion_map(ball_from_geometry(d, center=center2, curvature=3))


def _translation_map(t, d: int) -> MobiusMap:
    """The Lorentz matrix of the Euclidean translation x -> x + t."""
    t = tuple(t)
    t2 = sum(x * x for x in t)
    size = d + 2
    rows = []
    for i in range(d):
        row = [1 if i == j else 0 for j in range(d)]
        row += [-t[i], t[i]]
        rows.append(tuple(row))
    half = ratio(t2, 2)
    rows.append(tuple(list(t) + [1 - half, half]))
    rows.append(tuple(list(t) + [-half, 1 + half]))
    return MobiusMap(rows, check=False)


def standard_form(a: BallArrangement, i: int, j: int):
    """Transform so ball i becomes {x_d >= 1} and ball j becomes {x_d <= -1}.

    Returns (new arrangement, the Mobius map used).  The residual horizontal
    translation is fixed by centering the first remaining non-half-space ball
    on the last-coordinate axis.
    """
    if classify_pair(a.balls[i], a.balls[j]) != EXTERNALLY_TANGENT:
        raise ValueError("chosen balls are not externally tangent")
    d = a.dimension
    t_i = _half_space_x_last(d, 1)
    t_j = _half_space_x_last(d, -1)
    m = None
    for g in _generic_premaps(d):
        xi = linalg.mat_vec(g.mat, a.balls[i].v)
        xj = linalg.mat_vec(g.mat, a.balls[j].v)
        core = _two_reflections(xi, xj, t_i.v, t_j.v, d)
        if core is not None:
            m = core @ g
            break
    if m is None:
        raise ValueError("could not construct a normalizing map")
    # pin down the translation along the tangency hyperplane
    shift = None
    for k in range(len(a.balls)):
        if k in (i, j):
            continue
        b = apply_map(m, a.balls[k])
        kap = b.curvature
        if scalar_sign(kap) == 0:
            continue
        center = tuple(ratio(x, kap) for x in b.v[:d])
        shift = tuple(-x for x in center[: d - 1]) + (0,)
        break
    if shift is not None and any(scalar_sign(x) != 0 for x in shift):
        m = _translation_map(shift, d) @ m
    return a.transformed(m), m


# -- Mobius equivalence and spectra ---------------------------------------------


def _gram_rank(g) -> int:
    if any(is_float_data(row) for row in g):
        import numpy as np

        return int(np.linalg.matrix_rank(np.array([[approx(x) for x in r] for r in g]), tol=1e-8))
    return linalg.rank(g)


def mobius_equivalent(a: BallArrangement, a2: BallArrangement) -> bool:
    """Gram-matrix test under the given orderings (packings of maximal rank)."""
    if len(a.balls) != len(a2.balls) or a.dimension != a2.dimension:
        return False
    if not (is_packing(a) and is_packing(a2)):
        raise ValueError("Gram comparison needs packings")
    d = a.dimension
    g1, g2 = gram(a), gram(a2)
    if _gram_rank(g1) != d + 2 or _gram_rank(g2) != d + 2:
        raise ValueError("Gram comparison needs maximal rank d+2")
    floaty = any(is_float_data(r) for r in g1) or any(is_float_data(r) for r in g2)
    for r1, r2 in zip(g1, g2):
        for x, y in zip(r1, r2):
            if floaty:
                if abs(approx(x) - approx(y)) > FLOAT_TOL:
                    return False
            elif x != y:
                return False
    return True


def mobius_spectra(s: Solid) -> tuple:
    """Eigenvalues (sorted, with multiplicity) of the solid's projection Gramian."""
    import numpy as np

    g = gram(project(regular_edge_scribed(s)))
    arr = np.array([[approx(x) for x in row] for row in g])
    return tuple(float(x) for x in np.linalg.eigvalsh(arr))


def grouped_spectra(s: Solid, tol: float = 1e-6):
    """Spectra as (eigenvalue, multiplicity) pairs, clustering within tol."""
    eigs = mobius_spectra(s)
    groups = []
    for e in eigs:
        if groups and abs(groups[-1][0][-1] - e) <= tol:
            groups[-1][0].append(e)
        else:
            groups.append(([e],))
    return [(sum(g[0]) / len(g[0]), len(g[0])) for g in groups]
