"""Curvature identities on flags of edge-scribed regular polytopes.

Three layers live here.  The bottom is bookkeeping: Lorentzian barycenters of
faces (plain means of vertex vectors) and the ladder L(0..d+1) of inverse
squared half edge-lengths attached to the prefixes of a Schlafli symbol.  The
middle is corner-matrix algebra -- the Gram matrix of a flag's barycenters is
a "corner" matrix, whose explicit tridiagonal inverse turns the curvature
null-identity into the quadratic flag relation.  The top is the family of
small linear/quadratic consequences (consecutive-element relations, the
two-root next-polyhedron solvers, square-face/pentagon/antipodal rules) that
let clusters grow by curvature arithmetic alone, plus the ring certificates
for integral and phi-integral packings.

Every function is exact on exact input and float on float input; the two
never mix silently.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import linalg
from .exactnum import (
    RING_Z,
    RING_Z_PHI,
    QuadScalar,
    approx,
    exact_sqrt,
    is_float_data,
    is_ring_integer,
    phi,
    ratio,
    scalar_sign,
    sqrt_if_expressible,
)
from .lorentz import Ball, curvature, lorentz_product
from .packings import BallArrangement
from .polytopes import (
    Solid,
    half_edge_length_squared,
    solid_from_schlafli,
)

PHI = phi()

INTEGRAL = "integral"
PHI_INTEGRAL = "phi-integral"
NOT_CERTIFIED = "not-certified"


# -- Lorentzian barycenters ------------------------------------------------------


def lorentzian_barycenter(arrangement: BallArrangement, face=None) -> tuple:
    """Mean of the vertex ball vectors over ``face`` (all vertices if None)."""
    idx = sorted(face) if face is not None else range(len(arrangement))
    cols = zip(*(arrangement[i].v for i in idx))
    n = len(idx)
    return tuple(ratio(sum(c), n) for c in cols)


def lorentzian_curvature(arrangement: BallArrangement, face=None):
    """Curvature of the Lorentzian barycenter (= mean of vertex curvatures)."""
    return curvature(lorentzian_barycenter(arrangement, face))


def flag_curvatures(arrangement: BallArrangement, flag) -> tuple:
    """Curvatures (rank 0..d+1) along a face chain, ending with the whole solid."""
    ks = [lorentzian_curvature(arrangement, f) for f in flag]
    ks.append(lorentzian_curvature(arrangement))
    return tuple(ks)


# -- the L ladder ----------------------------------------------------------------


def L_value(s: Solid, i: int):
    """Inverse squared half edge-length of the rank-i face (-1 at 0, 0 at 1)."""
    top = s.dimension + 1
    if not 0 <= i <= top:
        raise ValueError(f"rank {i} out of range 0..{top}")
    if i == 0:
        return -1
    if i == 1:
        return 0
    sub = solid_from_schlafli(s.schlafli[: i - 1])
    return ratio(1, half_edge_length_squared(sub))


# -- corner matrices -------------------------------------------------------------


def corner_matrix(entries) -> tuple:
    """The symmetric matrix with (i,j) entry a_max(i,j)."""
    a = tuple(entries)
    n = len(a)
    return tuple(tuple(a[max(i, j)] for j in range(n)) for i in range(n))


def corner_inverse(entries) -> tuple:
    """Tridiagonal inverse of the corner matrix; needs a_i != a_{i+1}, a_n != 0."""
    a = tuple(entries)
    n = len(a)
    if n == 0:
        raise ValueError("empty corner matrix")
    if any(a[i] == a[i + 1] for i in range(n - 1)):
        raise ValueError("corner inverse needs distinct consecutive entries")
    if a[-1] == 0:
        raise ValueError("corner inverse needs a nonzero last entry")
    diffs = [ratio(1, a[i] - a[i + 1]) for i in range(n - 1)]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        total = diffs[i - 1] if i > 0 else 0
        total = total + (diffs[i] if i < n - 1 else ratio(1, a[-1]))
        out[i][i] = total
    for i in range(n - 1):
        out[i][i + 1] = out[i + 1][i] = -diffs[i]
    return tuple(tuple(row) for row in out)


def gram_curvature_identity(vectors):
    """Residual of kappa . Gram(vectors)^-1 . kappa for a Lorentzian basis.

    Accepts balls or raw vectors (flag barycenters are not unit vectors).
    Identically zero whenever the vectors form a basis; raises on singular
    Gram matrices.
    """
    vs = [v.v if isinstance(v, Ball) else tuple(v) for v in vectors]
    ks = [curvature(v) for v in vs]
    g = [[lorentz_product(u, w) for w in vs] for u in vs]
    if is_float_data(ks) or is_float_data([x for row in g for x in row]):
        try:
            sol = np.linalg.solve(np.array(g, dtype=float), np.array(ks, dtype=float))
        except np.linalg.LinAlgError:
            raise ValueError("gram matrix is singular") from None
        return float(np.dot(ks, sol))
    sol = linalg.solve(tuple(tuple(r) for r in g), tuple(ks))
    return sum(k * x for k, x in zip(ks, sol))


# -- flag relations --------------------------------------------------------------


def verify_flag_relation(s: Solid, kappas):
    """Residual of the quadratic flag relation for curvatures of rank 0..d+1."""
    ks = tuple(kappas)
    top = s.dimension + 1
    if len(ks) != top + 1:
        raise ValueError(f"need {top + 1} curvatures for {s.name}, got {len(ks)}")
    lv = [L_value(s, i) for i in range(top + 1)]
    if is_float_data(ks):
        lv = [approx(x) for x in lv]
    rhs = 0
    for i in range(top):
        diff = ks[i] - ks[i + 1]
        rhs = rhs + ratio(diff * diff, lv[i + 1] - lv[i])
    return ks[-1] * ks[-1] - lv[-1] * rhs


def simplex_flag_residual(kappas):
    """Closed-form flag relation for simplices: prefactor d/(d+2), weights C(i+2,2)."""
    ks = tuple(kappas)
    d = len(ks) - 2
    rhs = 0
    for i in range(d + 1):
        diff = ks[i] - ks[i + 1]
        rhs = rhs + math.comb(i + 2, 2) * diff * diff
    scale = ratio(d, d + 2) if not is_float_data(ks) else d / (d + 2)
    return ks[-1] * ks[-1] - scale * rhs


def cube_flag_residual(kappas):
    """Closed-form flag relation for cubes: all weights 1, prefactor d."""
    ks = tuple(kappas)
    d = len(ks) - 2
    rhs = sum((ks[i] - ks[i + 1]) * (ks[i] - ks[i + 1]) for i in range(d + 1))
    return ks[-1] * ks[-1] - d * rhs


def soddy_gosset_residual(kappas):
    """(sum k)^2 - d sum k^2 for d+2 pairwise tangent d-ball curvatures."""
    ks = tuple(kappas)
    d = len(ks) - 2
    total = sum(ks)
    return total * total - d * sum(k * k for k in ks)


def relative_residual(residual, reference) -> float:
    """|residual| / max(1, |reference|): comparison scale for grown curvatures."""
    return abs(approx(residual)) / max(1.0, abs(approx(reference)))


# -- exact dihedral trigonometry ---------------------------------------------------

_COS2 = {
    3: Fraction(1, 4),
    4: Fraction(1, 2),
    5: QuadScalar(Fraction(3, 8), Fraction(1, 8), 5),  # cos^2(pi/5) = phi^2/4
    6: Fraction(3, 4),
}


def _cos2(n: int, exact: bool):
    if exact:
        if n not in _COS2:
            raise ValueError(f"no exact cos^2(pi/{n}); pass float curvatures")
        return _COS2[n]
    c = math.cos(math.pi / n)
    return c * c


def _sin2(n: int, exact: bool):
    return 1 - _cos2(n, exact)


def platonic_flag_relation(p: int, q: int, k_v, k_e, k_f, k_p):
    """Residual of the polyhedral flag relation for Schlafli symbol {p,q}."""
    exact = not is_float_data((k_v, k_e, k_f, k_p))
    c2p, s2p = _cos2(p, exact), _sin2(p, exact)
    c2q, s2q = _cos2(q, exact), _sin2(q, exact)
    den = s2q - c2p
    a = ratio(c2p, den)
    b = ratio(s2p, den)
    c = ratio(s2p, c2q)
    rhs = (
        a * (k_v - k_e) * (k_v - k_e)
        + b * (k_e - k_f) * (k_e - k_f)
        + c * (k_f - k_p) * (k_f - k_p)
    )
    return k_p * k_p - rhs


def consecutive(kind: str, p: int, q: int, *, vertex=None, edge=None, face=None, polyhedron=None):
    """Partner curvature across the flag mirror that moves only ``kind``.

    vertex:     needs vertex, edge            -> the other vertex of the edge
    edge:       needs vertex, edge, face      -> the other edge through v in f
    face:       needs edge, face, polyhedron  -> the other face through e
    polyhedron: needs face, polyhedron        -> the solid inverted in b_f
    """
    if kind == "vertex":
        _need(vertex=vertex, edge=edge)
        return 2 * edge - vertex
    exact = not is_float_data([x for x in (vertex, edge, face, polyhedron) if x is not None])
    if kind == "edge":
        _need(vertex=vertex, edge=edge, face=face)
        return 2 * (_cos2(p, exact) * vertex + _sin2(p, exact) * face) - edge
    if kind == "face":
        _need(edge=edge, face=face, polyhedron=polyhedron)
        s2p = _sin2(p, exact)
        mean = ratio(_cos2(q, exact), s2p) * edge + ratio(_sin2(q, exact) - _cos2(p, exact), s2p) * polyhedron
        return 2 * mean - face
    if kind == "polyhedron":
        _need(face=face, polyhedron=polyhedron)
        s2p = _sin2(p, exact)
        return 2 * ratio(s2p, s2p - _cos2(q, exact)) * face - polyhedron
    raise ValueError(f"unknown consecutive kind {kind!r}")


def _need(**kwargs):
    missing = [name for name, value in kwargs.items() if value is None]
    if missing:
        raise ValueError(f"missing curvature(s): {', '.join(missing)}")


def face_from_three(p: int, triple):
    """Face curvature from three consecutive vertex curvatures on a p-gon face."""
    k_prev, k_mid, k_next = triple
    exact = not is_float_data(triple)
    quarter = ratio(1, 4 * _sin2(p, exact))
    return quarter * (k_next + k_prev) + (1 - 2 * quarter) * k_mid


def solve_next_polyhedron(p: int, q: int, triple):
    """Both roots (kappa+, kappa-) for the solids sharing the face of a triple.

    The triple is (k_{i-1}, k_i, k_{i+1}) for consecutive tangent balls on a
    p-gon face; one root is the solid at hand, the other its inversion in the
    shared face's dual ball.  A negative discriminant (no real solid) raises.
    """
    k_prev, k_mid, k_next = triple
    exact = not is_float_data(triple)
    c2p = _cos2(p, exact)
    c2q = _cos2(q, exact)
    disc = (1 - 4 * c2p) * k_mid * k_mid + k_mid * k_next + k_mid * k_prev + k_next * k_prev
    if exact:
        if scalar_sign(disc) < 0:
            raise ValueError("negative discriminant: not packing data")
        rad = exact_sqrt(c2q * disc)
    else:
        if disc < -1e-9:
            raise ValueError("negative discriminant: not packing data")
        rad = math.sqrt(c2q * max(disc, 0.0))
    base = (1 - 2 * c2p) * k_mid + ratio(k_next + k_prev, 2)
    den = 2 * (1 - c2q - c2p)
    return (ratio(base + rad, den), ratio(base - rad, den))


# -- per-family recurrences --------------------------------------------------------


def octahedral_next(triple):
    """k1+k2+k3 +- sqrt(2(k1k2+k1k3+k2k3)): the two octahedra over a triangle."""
    k1, k2, k3 = triple
    disc = 2 * (k1 * k2 + k1 * k3 + k2 * k3)
    rad = _any_sqrt(disc)
    s = k1 + k2 + k3
    return (s + rad, s - rad)


def cubical_next(triple):
    """Two cubes over a square face, from three consecutive vertex curvatures."""
    k_prev, k_mid, k_next = triple
    disc = -k_mid * k_mid + k_mid * k_next + k_mid * k_prev + k_next * k_prev
    rad = _any_sqrt(disc)
    return (k_prev + k_next + rad, k_prev + k_next - rad)


def icosahedral_next(triple):
    """phi^2(k1+k2+k3) +- phi^3 sqrt(k1k2+k1k3+k2k3) for a shared triangle."""
    k1, k2, k3 = triple
    exact = not is_float_data(triple)
    phi1 = PHI if exact else approx(PHI)
    disc = k1 * k2 + k1 * k3 + k2 * k3
    rad = _any_sqrt(disc)
    s = phi1 * phi1 * (k1 + k2 + k3)
    return (s + phi1 ** 3 * rad, s - phi1 ** 3 * rad)


def dodecahedral_next(triple):
    """Two dodecahedra over a pentagon, from three consecutive vertex curvatures."""
    k_prev, k_mid, k_next = triple
    exact = not is_float_data(triple)
    phi1 = PHI if exact else approx(PHI)
    disc = -phi1 * k_mid * k_mid + k_mid * k_next + k_mid * k_prev + k_next * k_prev
    rad = _any_sqrt(disc)
    base = -phi1 * k_mid
    return (
        base + phi1 * phi1 * (k_next + k_prev + rad),
        base + phi1 * phi1 * (k_next + k_prev - rad),
    )


def square_face_fourth(k_a, k_b, k_c):
    """Fourth curvature around a square face from three in cyclic order."""
    return k_a + k_c - k_b


def pentagon_fourth(k_prev, k_mid, k_next):
    """Next curvature around a pentagon: phi(k_{i+1}-k_i) = k_{i+2}-k_{i-1}."""
    exact = not is_float_data((k_prev, k_mid, k_next))
    phi1 = PHI if exact else approx(PHI)
    return k_prev + phi1 * (k_next - k_mid)


def antipodal_curvature(k_solid, k_vertex):
    """Curvature at the antipodal vertex: the solid's is the pair's midpoint."""
    return 2 * k_solid - k_vertex


def dodecahedral_from_vertex_neighbors(k_v, neighbors):
    """Dodecahedron curvature from one vertex curvature and its three neighbors'."""
    u1, u2, u3 = neighbors
    exact = not is_float_data((k_v, u1, u2, u3))
    phi1 = PHI if exact else approx(PHI)
    return ratio(phi1 * phi1 * (u1 + u2 + u3) - (1 + 3 * phi1) * k_v, 2)


_RECURRENCES = {
    ("simplex", "next"): lambda values: solve_next_polyhedron(3, 3, values),
    ("cross", "next"): octahedral_next,
    ("cube", "next"): cubical_next,
    ("icosahedron", "next"): icosahedral_next,
    ("dodecahedron", "next"): dodecahedral_next,
    ("cube", "square_face"): lambda values: square_face_fourth(*values),
    ("cube", "antipodal"): lambda values: antipodal_curvature(*values),
    ("icosahedron", "antipodal"): lambda values: antipodal_curvature(*values),
    ("dodecahedron", "pentagon"): lambda values: pentagon_fourth(*values),
    ("dodecahedron", "vertex_neighbors"): lambda values: dodecahedral_from_vertex_neighbors(
        values[0], values[1:]
    ),
}


def solid_recurrences(s: Solid, relation: str, values):
    """Dispatch a named per-family curvature recurrence for a Platonic solid."""
    key = (s.kind, relation)
    if key not in _RECURRENCES or s.dimension != 2:
        raise ValueError(f"no {relation!r} recurrence for {s.name}")
    return _RECURRENCES[key](tuple(values))


def _any_sqrt(disc):
    """Square root of a discriminant: float or exact; refuses negatives."""
    if isinstance(disc, float):
        if disc < -1e-9:
            raise ValueError("negative discriminant: not packing data")
        return math.sqrt(max(disc, 0.0))
    if scalar_sign(disc) < 0:
        raise ValueError("negative discriminant: not packing data")
    return exact_sqrt(disc)


# -- integrality certificates -------------------------------------------------------


def integrality_condition(s: Solid, triple) -> str:
    """Ring certificate for the packing grown from three consecutive curvatures.

    Checks the family's radicand: all three curvatures and its square root in
    Z certify "integral" (tetrahedron, octahedron, cube); in Z[phi] they
    certify "phi-integral" (icosahedron, dodecahedron).  Anything else --
    including a negative radicand or an inexpressible root -- is
    "not-certified", never an error.
    """
    if is_float_data(triple):
        raise TypeError("integrality certificates need exact curvatures")
    k_prev, k_mid, k_next = triple
    e2 = k_prev * k_mid + k_mid * k_next + k_prev * k_next
    kind = s.kind
    if s.dimension != 2:
        raise ValueError(f"no integrality certificate for {s.name}")
    if kind == "simplex":
        ring, radicand = RING_Z, e2
    elif kind == "cross":
        ring, radicand = RING_Z, 2 * e2
    elif kind == "cube":
        ring, radicand = RING_Z, e2 - k_mid * k_mid
    elif kind == "icosahedron":
        ring, radicand = RING_Z_PHI, e2
    elif kind == "dodecahedron":
        ring, radicand = RING_Z_PHI, e2 - PHI * k_mid * k_mid
    else:
        raise ValueError(f"no integrality certificate for {s.name}")
    if not all(_in_ring(k, ring) for k in triple):
        return NOT_CERTIFIED
    if scalar_sign(radicand) < 0:
        return NOT_CERTIFIED
    root = _certified_sqrt(radicand, ring)
    if root is None or not _in_ring(root, ring):
        return NOT_CERTIFIED
    return INTEGRAL if ring == RING_Z else PHI_INTEGRAL


def _certified_sqrt(radicand, ring):
    if ring == RING_Z_PHI:
        return sqrt_if_expressible(radicand, 5)
    try:
        return exact_sqrt(radicand)
    except ValueError:
        return None


def _in_ring(x, ring) -> bool:
    try:
        return is_ring_integer(x, ring)
    except ValueError:
        return False
