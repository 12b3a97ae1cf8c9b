"""Inversive-distance circle packings on hyperbolic polyhedral surfaces.

Core objects: TriSurface (combinatorics), Packing (inversive distances
and radii), flip surgery to weighted Delaunay triangulations, and the
curvature-prescription solvers (Newton descent and discrete Ricci flow).
"""

from . import checks, complexes, errors
from .flips import (
    FlipEvent,
    delta_identity_residuals,
    flip_edge,
    make_weighted_delaunay,
    ptolemy_flip_value,
    ptolemy_residual,
)
from .geometry import (
    Packing,
    auxiliary_length,
    delta_discriminant,
    develop_face_in_disk,
    edge_cosh_length,
    face_metrics,
    hinge_delaunay_margin,
    inversive_from_length,
    is_local_delaunay,
    orthocircle_radius,
    signed_center_distance,
    validate_packing,
    xi_discriminant,
)
from .hyptrig import acosh_stable, angle_from_sides, hinge_diagonal, side_from_angles
from .meshio import build_report, load_mesh, mesh_document, parse_mesh
from .solver import (
    SolveState,
    curvatures,
    gauss_bonnet_residual,
    hessian,
    newton_solve,
    r_from_u,
    ricci_flow,
    ricci_potential,
    u_from_r,
    validate_target,
)
from .surface import (
    HingeView,
    TriSurface,
    build_surface,
    euler_characteristic,
    flip_combinatorial,
    hinge,
)

__version__ = "0.1.0"
