"""Exact and floating-point ball packings from edge-scribed regular polytopes.

The Lorentzian model does the bookkeeping: a d-ball is a unit space-like
vector, tangency is an inner product of -1, and inversions are reflections.
On top of that sit projections of regular polytopes, their Apollonian-style
reflection clusters, the flag and Descartes curvature relations, and a JSON
document / SVG / command-line shell.
"""

from .exactnum import QuadScalar, approx, phi, ratio, sqrt_int
from .lorentz import (
    Ball,
    MobiusMap,
    apply_map,
    ball_from_geometry,
    classify_pair,
    curvature,
    geometry_from_ball,
    inversion_map,
    lorentz_product,
)
from .polytopes import (
    CUBE,
    DODECAHEDRON,
    ICOSAHEDRON,
    OCTAHEDRON,
    PLATONIC,
    TETRAHEDRON,
    Polytope,
    Solid,
    regular_edge_scribed,
    solid_from_name,
)
from .packings import (
    BallArrangement,
    centered_projection,
    dual,
    grouped_spectra,
    is_packing,
    mobius_spectra,
    project,
    with_dual,
)
from .apollonian import (
    Cluster,
    GeneratorSet,
    apollonian_group_from_packing,
    generate_cluster,
    is_apollonian_packing,
    orbit_coloring,
    packing_from_curvatures,
    perfect_square_sequence,
    platonic_generators,
)
from .relations import (
    flag_curvatures,
    gram_curvature_identity,
    integrality_condition,
    soddy_gosset_residual,
    verify_flag_relation,
)
from .documents import (
    PackingDocument,
    document_from_arrangement,
    document_from_cluster,
    from_json,
    to_json,
)
from .svgout import RenderSpec, render_svg

__version__ = "0.1.0"

__all__ = [
    "QuadScalar",
    "approx",
    "phi",
    "ratio",
    "sqrt_int",
    "Ball",
    "MobiusMap",
    "apply_map",
    "ball_from_geometry",
    "classify_pair",
    "curvature",
    "geometry_from_ball",
    "inversion_map",
    "lorentz_product",
    "CUBE",
    "DODECAHEDRON",
    "ICOSAHEDRON",
    "OCTAHEDRON",
    "PLATONIC",
    "TETRAHEDRON",
    "Polytope",
    "Solid",
    "regular_edge_scribed",
    "solid_from_name",
    "BallArrangement",
    "centered_projection",
    "dual",
    "grouped_spectra",
    "is_packing",
    "mobius_spectra",
    "project",
    "with_dual",
    "Cluster",
    "GeneratorSet",
    "apollonian_group_from_packing",
    "generate_cluster",
    "is_apollonian_packing",
    "orbit_coloring",
    "packing_from_curvatures",
    "perfect_square_sequence",
    "platonic_generators",
    "flag_curvatures",
    "gram_curvature_identity",
    "integrality_condition",
    "soddy_gosset_residual",
    "verify_flag_relation",
    "PackingDocument",
    "document_from_arrangement",
    "document_from_cluster",
    "from_json",
    "to_json",
    "RenderSpec",
    "render_svg",
]
