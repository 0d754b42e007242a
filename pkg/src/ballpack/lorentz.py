"""d-balls as normalized space-like vectors of (d+2)-dimensional Lorentz space.

The bilinear form is x.y = x_1 y_1 + ... + x_{d+1} y_{d+1} - x_{d+2} y_{d+2}.
A ball (disk, disk complement, or half-space of R^d + infinity) is a vector x
with x.x = 1; its curvature is -<e_{d+1}+e_{d+2}, x>.  Inversions in balls
generate the Mobius maps used everywhere else: s_b = I - 2 x xT Q.

All functions run in either exact mode (int/Fraction/QuadScalar entries) or
float mode; the two never mix inside one vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import linalg
from .exactnum import (
    QuadScalar,
    approx,
    exact_sqrt,
    is_float_data,
    ratio,
    scalar_sign,
)

Scalar = Union[int, Fraction, QuadScalar, float]
LVector = tuple

FLOAT_TOL = 1e-9
DRIFT_LIMIT = 1e-6


def lorentz_product(x: LVector, y: LVector) -> Scalar:
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    s = sum(a * b for a, b in zip(x[:-1], y[:-1]))
    return s - x[-1] * y[-1]


def curvature(x: LVector) -> Scalar:
    """Signed reciprocal radius, -<e_{d+1}+e_{d+2}, x> = x[-1] - x[-2]."""
    return x[-1] - x[-2]


def x_north(d: int, one=1, zero=0) -> LVector:
    """e_{d+1} + e_{d+2}: the vector whose pairing extracts curvature."""
    return tuple([zero] * d + [one, one])


class Ball:
    """A d-ball: a Lorentz vector of norm one."""

    __slots__ = ("v",)

    def __init__(self, v: Sequence[Scalar], _checked: bool = False):
        v = tuple(v)
        if not _checked:
            n = lorentz_product(v, v)
            if is_float_data(v):
                if abs(n - 1.0) > FLOAT_TOL:
                    raise ValueError(f"vector has Lorentz norm {n}, not 1")
            elif n != 1:
                raise ValueError(f"vector has Lorentz norm {n}, not 1")
        object.__setattr__(self, "v", v)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Ball is immutable")

    @property
    def dimension(self) -> int:
        return len(self.v) - 2

    @property
    def curvature(self) -> Scalar:
        return curvature(self.v)

    def approx(self) -> "Ball":
        return Ball(tuple(approx(x) for x in self.v), _checked=True)

    def __eq__(self, other):
        return isinstance(other, Ball) and self.v == other.v

    def __hash__(self):
        return hash(self.v)

    def __repr__(self):
        return f"Ball({list(self.v)!r})"


@dataclass(frozen=True)
class BallGeometry:
    """Euclidean description: a sphere (center/radius/orientation) or half-space."""

    kind: str  # "sphere" | "halfspace"
    center: Optional[tuple] = None
    radius: Optional[Scalar] = None
    orientation: int = 1  # -1 means the complement of the open ball
    normal: Optional[tuple] = None
    offset: Optional[Scalar] = None


def ball_from_geometry(
    d: int,
    center: Optional[Sequence[Scalar]] = None,
    curvature: Optional[Scalar] = None,
    normal: Optional[Sequence[Scalar]] = None,
    offset: Optional[Scalar] = None,
) -> Ball:
    """Inversive coordinates of a ball given its Euclidean description.

    Sphere form (center + nonzero curvature):
        (kappa/2) * (2c, |c|^2 - kappa^-2 - 1, |c|^2 - kappa^-2 + 1)
    Half-space form (unit normal + signed distance):  (n, delta, delta).
    """
    if center is not None:
        if curvature is None or scalar_sign(curvature) == 0:
            raise ValueError("center form requires nonzero curvature")
        if len(center) != d:
            raise ValueError(f"center must have {d} coordinates")
        c2 = sum(x * x for x in center)
        k2 = ratio(1, curvature * curvature)
        half_k = ratio(curvature, 2)
        v = tuple(curvature * x for x in center) + (
            half_k * (c2 - k2 - 1),
            half_k * (c2 - k2 + 1),
        )
        return Ball(v)
    if normal is None or offset is None:
        raise ValueError("need either center+curvature or normal+offset")
    if len(normal) != d:
        raise ValueError(f"normal must have {d} coordinates")
    if curvature is not None and scalar_sign(curvature) != 0:
        raise ValueError("half-space form requires zero curvature")
    n2 = sum(x * x for x in normal)
    if is_float_data(normal):
        if abs(n2 - 1.0) > FLOAT_TOL:
            raise ValueError("normal must be a unit vector")
    elif n2 != 1:
        raise ValueError("normal must be a unit vector")
    return Ball(tuple(normal) + (offset, offset))


def geometry_from_ball(b: Ball) -> BallGeometry:
    d = b.dimension
    k = b.curvature
    if scalar_sign(k) == 0:
        return BallGeometry(kind="halfspace", normal=b.v[:d], offset=b.v[d])
    center = tuple(ratio(x, k) for x in b.v[:d])
    return BallGeometry(
        kind="sphere", center=center, radius=ratio(1, abs(k)), orientation=scalar_sign(k)
    )


# -- pair classification -----------------------------------------------------

DISJOINT = "disjoint"
EXTERNALLY_TANGENT = "externally_tangent"
ORTHOGONAL = "orthogonal"
INTERNALLY_TANGENT = "internally_tangent"
NESTED = "nested"
OVERLAPPING = "overlapping"
EQUAL = "equal"


def _is_past_directed(b: Ball) -> bool:
    return scalar_sign(b.v[-1]) < 0


def classify_pair(b1: Ball, b2: Ball, tol: float = FLOAT_TOL) -> str:
    """Relative position of two balls from their Lorentz product."""
    if _is_past_directed(b1) and _is_past_directed(b2):
        raise ValueError("cannot classify a pair of past-directed balls")
    floaty = is_float_data(b1.v) or is_float_data(b2.v)
    if floaty:
        if all(abs(x - y) <= tol for x, y in zip(b1.v, b2.v)):
            return EQUAL
    elif b1.v == b2.v:
        return EQUAL
    p = lorentz_product(b1.v, b2.v)
    if floaty:
        if abs(p + 1) <= tol:
            return EXTERNALLY_TANGENT
        if abs(p) <= tol:
            return ORTHOGONAL
        if abs(p - 1) <= tol:
            return INTERNALLY_TANGENT
        if p < -1:
            return DISJOINT
        if p > 1:
            return NESTED
        return OVERLAPPING
    if p == -1:
        return EXTERNALLY_TANGENT
    if p == 0:
        return ORTHOGONAL
    if p == 1:
        return INTERNALLY_TANGENT
    s = scalar_sign(p + 1)
    if s < 0:
        return DISJOINT
    if scalar_sign(p - 1) > 0:
        return NESTED
    return OVERLAPPING


# -- Mobius maps --------------------------------------------------------------


class MobiusMap:
    """An orthochronous Lorentz matrix acting on balls."""

    __slots__ = ("mat",)

    def __init__(self, mat, check: bool = True):
        mat = linalg.mat(mat)
        if check:
            _validate_lorentz(mat)
        object.__setattr__(self, "mat", mat)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("MobiusMap is immutable")

    @property
    def dimension(self) -> int:
        return len(self.mat) - 2

    @classmethod
    def identity(cls, d: int) -> "MobiusMap":
        return cls(linalg.identity(d + 2), check=False)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(linalg.mat_mul(self.mat, other.mat), check=False)

    def inverse(self) -> "MobiusMap":
        # For M in O(d+1,1): M^-1 = Q M^T Q
        n = len(self.mat)
        t = linalg.transpose(self.mat)
        inv = [list(row) for row in t]
        for i in range(n - 1):
            inv[i][n - 1] = -inv[i][n - 1]
            inv[n - 1][i] = -inv[n - 1][i]
        return MobiusMap(tuple(tuple(r) for r in inv), check=False)

    def __call__(self, b: Ball) -> Ball:
        return apply_map(self, b)

    def __eq__(self, other):
        return isinstance(other, MobiusMap) and self.mat == other.mat

    def __hash__(self):
        return hash(self.mat)

    def __repr__(self):
        return f"MobiusMap({[list(r) for r in self.mat]!r})"


def _validate_lorentz(mat) -> None:
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise ValueError("matrix must be square")
    floaty = any(is_float_data(r) for r in mat)
    # M^T Q M == Q, checked column by column
    for i in range(n):
        for j in range(i, n):
            s = sum(mat[k][i] * mat[k][j] for k in range(n - 1))
            s -= mat[n - 1][i] * mat[n - 1][j]
            want = 0 if i != j else (1 if i < n - 1 else -1)
            if floaty:
                if abs(s - want) > FLOAT_TOL:
                    raise ValueError("matrix does not preserve the Lorentz form")
            elif s != want:
                raise ValueError("matrix does not preserve the Lorentz form")
    if scalar_sign(mat[n - 1][n - 1]) <= 0:
        raise ValueError("matrix is not orthochronous")


def inversion_map(b: Ball) -> MobiusMap:
    """The inversion in b as a Lorentz matrix, I - 2 x xT Q."""
    v = b.v
    n = len(v)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            q = -1 if j == n - 1 else 1
            e = 1 if i == j else 0
            row.append(e - 2 * v[i] * v[j] * q)
        rows.append(tuple(row))
    return MobiusMap(tuple(rows), check=False)


def apply_map(m: MobiusMap, b: Ball) -> Ball:
    w = linalg.mat_vec(m.mat, b.v)
    if is_float_data(w):
        n = lorentz_product(w, w)
        drift = abs(n - 1.0)
        if drift > DRIFT_LIMIT:
            raise ValueError(f"map output drifted off the unit shell by {drift}")
        if drift > 0:
            r = math.sqrt(n)
            w = tuple(x / r for x in w)
        return Ball(w, _checked=True)
    return Ball(w, _checked=True)


# -- the projective light-source model ----------------------------------------


def light_source(b: Ball) -> tuple:
    """Point of E^{d+1} outside the unit sphere whose shadow is the ball b."""
    t = b.v[-1]
    if scalar_sign(t) <= 0:
        raise ValueError("ball vector is past-directed or ideal; no light source")
    return tuple(ratio(x, t) for x in b.v[:-1])


def ball_from_light_source(u: Sequence[Scalar]) -> Ball:
    """Ball whose boundary is the horizon of a light source u, |u| > 1."""
    u = tuple(u)
    t = sum(x * x for x in u) - 1
    if (isinstance(t, float) and t <= FLOAT_TOL) or scalar_sign(t) <= 0:
        raise ValueError("light source must lie strictly outside the unit sphere")
    s = exact_sqrt(t)
    v = tuple(ratio(x, s) for x in u) + (ratio(1, s),)
    return Ball(v)
