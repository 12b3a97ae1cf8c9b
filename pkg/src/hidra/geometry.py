"""Metric layer of an inversive-distance circle packing.

A packing assigns a radius to every vertex and an inversive distance
greater than 1 to every edge (disjoint-circle regime).  Everything here
is a pure function of (surface, packing): edge lengths, per-face
discriminants, orthogonal circles, signed center distances, the local
weighted Delaunay predicate, and isometric developments into the
Poincare disk.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTriangle, DomainError, NonCompactOrthocircle
from .hyptrig import acosh_stable, angle_from_sides, sinh_from_cosh
from .ptolemy import delta_discriminant, ptolemy_flip_value

# Margin band within which a hinge counts as Delaunay and is never
# flipped; the transition is C1 there, so either choice is consistent,
# and not flipping prevents cycling at degenerate hinges.
TOL_DELAUNAY = 1e-10


@dataclass(frozen=True)
class Packing:
    """Per-edge inversive distances (> 1) and per-vertex radii (> 0)."""

    inv: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "inv", np.asarray(self.inv, dtype=float))
        object.__setattr__(self, "radii", np.asarray(self.radii, dtype=float))

    def copy(self):
        return Packing(self.inv.copy(), self.radii.copy())

    def with_radii(self, radii):
        return Packing(self.inv.copy(), np.asarray(radii, dtype=float))


def validate_packing(surface, packing, require_triangle_inequalities=True):
    """Operational validity check for a packing on a surface.

    Requires I > 1 on every edge and r > 0 finite on every vertex; with
    the flag set, also that every face satisfies the triangle
    inequalities under the induced edge lengths.  This proxy is weaker
    than bounding radii by injectivity radii, which is not computable
    from (I, r) alone; all downstream formulas depend only on the proxy.
    """
    if len(packing.inv) != len(surface.edges):
        raise DomainError("inversive distance count does not match edge count")
    if len(packing.radii) != surface.vertex_count:
        raise DomainError("radius count does not match vertex count")
    if not np.all(np.isfinite(packing.radii)) or np.any(packing.radii <= 0.0):
        raise DomainError("radii must be positive and finite")
    if not np.all(np.isfinite(packing.inv)) or np.any(packing.inv <= 1.0):
        raise DomainError("inversive distances must exceed 1")
    if require_triangle_inequalities:
        for fid in range(len(surface.faces)):
            fm = face_metrics(surface, packing, fid)
            if not fm.triangle_inequalities_hold():
                raise DegenerateTriangle(
                    f"face {fid} violates the triangle inequalities"
                )


def edge_cosh_length(r_i, r_j, inv):
    """cosh of the geodesic length induced by two radii and an inversive
    distance: cosh l = cosh r_i cosh r_j + I sinh r_i sinh r_j."""
    if r_i <= 0.0 or r_j <= 0.0:
        raise DomainError("radii must be positive")
    if inv <= 1.0:
        raise DomainError("inversive distance must exceed 1")
    return math.cosh(r_i) * math.cosh(r_j) + inv * math.sinh(r_i) * math.sinh(r_j)


def inversive_from_length(r_i, r_j, cosh_l):
    """Exact inverse of edge_cosh_length:
    I = (cosh l - cosh r_i cosh r_j) / (sinh r_i sinh r_j)."""
    if r_i <= 0.0 or r_j <= 0.0:
        raise DomainError("radii must be positive")
    return (cosh_l - math.cosh(r_i) * math.cosh(r_j)) / (
        math.sinh(r_i) * math.sinh(r_j)
    )


def auxiliary_length(r_i, r_j, inv):
    """sqrt(tanh^2 r_i + tanh^2 r_j + 2 I tanh r_i tanh r_j).

    The triangle inequalities of these per-edge quantities characterise
    the sign of the compactness discriminant Xi.
    """
    if r_i <= 0.0 or r_j <= 0.0:
        raise DomainError("radii must be positive")
    ti = math.tanh(r_i)
    tj = math.tanh(r_j)
    return math.sqrt(ti * ti + tj * tj + 2.0 * inv * ti * tj)


def xi_discriminant(radii, inv):
    """Compactness discriminant Xi of one face, in the tanh-radius form.

    ``radii`` are the three corner radii, ``inv`` the inversive
    distances of the opposite sides (slot m opposite corner m).  The
    orthogonal circle of the face is a compact circle iff Xi > 0.
    """
    tp, tq, tr = (math.tanh(r) for r in radii)
    a, b, c = inv
    num = (
        (1.0 - c * c) * tp * tp * tq * tq
        + (1.0 - b * b) * tp * tp * tr * tr
        + (1.0 - a * a) * tq * tq * tr * tr
        + 2.0
        * ((a + b * c) * tp + (b + a * c) * tq + (c + a * b) * tr)
        * tp
        * tq
        * tr
    )
    return num / ((1.0 - tp * tp) * (1.0 - tq * tq) * (1.0 - tr * tr))


def xi_from_cosh(cosh_lengths, cosh_radii):
    """Xi recomputed from cosh lengths and cosh radii (debug cross-check).

    Algebraically equal to xi_discriminant but worse conditioned for
    large radii, where the cosh values blow up.
    """
    x, y, z = cosh_lengths
    p, q, r = cosh_radii
    return (
        p * p * (1.0 - x * x)
        + q * q * (1.0 - y * y)
        + r * r * (1.0 - z * z)
        + 2.0 * p * q * (x * y - z)
        + 2.0 * p * r * (x * z - y)
        + 2.0 * q * r * (y * z - x)
    )


@dataclass(frozen=True)
class FaceMetrics:
    """All metric quantities of one face, slot-ordered by corner.

    ``cosh_lengths[m]`` is the cosh length of the side opposite corner m,
    ``inv[m]`` its inversive distance; radii follow the corners.
    """

    face: int
    corners: tuple
    sides: tuple
    radii: tuple
    cosh_radii: tuple
    tanh_radii: tuple
    cosh_lengths: tuple
    inv: tuple
    xi: float
    delta: float

    def triangle_inequalities_hold(self):
        x, y, z = self.cosh_lengths
        sx, sy, sz = (sinh_from_cosh(c) for c in self.cosh_lengths)
        return (
            x < y * z + sy * sz and y < x * z + sx * sz and z < x * y + sx * sy
        )

    def angles(self):
        """Corner angles (angle m at corner m)."""
        x, y, z = self.cosh_lengths
        return (
            angle_from_sides(x, y, z),
            angle_from_sides(y, z, x),
            angle_from_sides(z, x, y),
        )

    def area(self):
        return math.pi - math.fsum(self.angles())


def face_metrics(surface, packing, face):
    """Evaluate FaceMetrics for one face of the surface."""
    f = surface.faces[face]
    radii = tuple(float(packing.radii[v]) for v in f.corners)
    inv = tuple(float(packing.inv[e]) for e in f.sides)
    cosh_lengths = tuple(
        edge_cosh_length(radii[(m + 1) % 3], radii[(m + 2) % 3], inv[m])
        for m in range(3)
    )
    return FaceMetrics(
        face=face,
        corners=f.corners,
        sides=f.sides,
        radii=radii,
        cosh_radii=tuple(math.cosh(r) for r in radii),
        tanh_radii=tuple(math.tanh(r) for r in radii),
        cosh_lengths=cosh_lengths,
        inv=inv,
        xi=xi_discriminant(radii, inv),
        delta=delta_discriminant(*inv),
    )


def orthocircle_radius(fm):
    """Radius of the face's orthogonal circle.

    sinh rho = sinh r_i sinh r_j sinh r_k sqrt(Delta / Xi); defined only
    while the circle is compact (Xi > 0).
    """
    if fm.xi <= 0.0:
        raise NonCompactOrthocircle(
            f"face {fm.face} has Xi = {fm.xi:.3e} <= 0", face=fm.face, xi=fm.xi
        )
    sinh_rho = (
        math.prod(math.sinh(r) for r in fm.radii)
        * math.sqrt(fm.delta)
        / math.sqrt(fm.xi)
    )
    return math.asinh(sinh_rho)


def signed_center_distance(fm, slot):
    """Signed distance from the orthocircle center to the side ``slot``.

    Positive when the center lies on the same side of the edge as the
    opposite corner.  Solved from the linear relation

        sinh h * sqrt((Y^2-1) Xi) = (B Y - A) p_i + (A Y - B) p_j - (Y^2-1) p_k

    with Y the cosh length of the edge, A and B the cosh lengths of the
    sides at its two endpoints, and p the cosh radii; the linear form
    (rather than its square) preserves the sign.
    """
    if fm.xi <= 0.0:
        raise NonCompactOrthocircle(
            f"face {fm.face} has Xi = {fm.xi:.3e} <= 0", face=fm.face, xi=fm.xi
        )
    yy = fm.cosh_lengths[slot]
    aa = fm.cosh_lengths[(slot + 2) % 3]  # side joining corner slot+1 to the apex
    bb = fm.cosh_lengths[(slot + 1) % 3]  # side joining corner slot+2 to the apex
    p_i = fm.cosh_radii[(slot + 1) % 3]
    p_j = fm.cosh_radii[(slot + 2) % 3]
    p_k = fm.cosh_radii[slot]
    num = (bb * yy - aa) * p_i + (aa * yy - bb) * p_j - (yy * yy - 1.0) * p_k
    sinh_h = num / math.sqrt((yy * yy - 1.0) * fm.xi)
    return math.asinh(sinh_h)


def _hinge_faces_metrics(hv, packing):
    """FaceMetrics of the two hinge faces, hinge-labelled.

    Both are built with corner order (i, j, apex), so slot 2 is the
    shared edge in each.
    """
    r_i = float(packing.radii[hv.v_i])
    r_j = float(packing.radii[hv.v_j])
    r_k = float(packing.radii[hv.v_k])
    r_l = float(packing.radii[hv.v_l])
    a, b, c, d = (float(packing.inv[e]) for e in hv.boundary_edges)
    e = float(packing.inv[hv.edge])

    def metrics(face_id, corners, sides, radii, inv):
        cosh_lengths = tuple(
            edge_cosh_length(radii[(m + 1) % 3], radii[(m + 2) % 3], inv[m])
            for m in range(3)
        )
        return FaceMetrics(
            face=face_id,
            corners=corners,
            sides=sides,
            radii=radii,
            cosh_radii=tuple(math.cosh(r) for r in radii),
            tanh_radii=tuple(math.tanh(r) for r in radii),
            cosh_lengths=cosh_lengths,
            inv=inv,
            xi=xi_discriminant(radii, inv),
            delta=delta_discriminant(*inv),
        )

    fm_k = metrics(
        hv.face_k,
        (hv.v_i, hv.v_j, hv.v_k),
        (hv.e_d, hv.e_a, hv.edge),
        (r_i, r_j, r_k),
        (d, a, e),
    )
    fm_l = metrics(
        hv.face_l,
        (hv.v_i, hv.v_j, hv.v_l),
        (hv.e_c, hv.e_b, hv.edge),
        (r_i, r_j, r_l),
        (c, b, e),
    )
    return fm_k, fm_l


def hinge_h_sum(hv, packing):
    """sinh h_k / sinh rho_k + sinh h_l / sinh rho_l across the hinge.

    This is the geometric route to the Delaunay predicate: the sum is
    non-negative exactly when the two signed center distances add to a
    non-negative total.
    """
    fm_k, fm_l = _hinge_faces_metrics(hv, packing)
    total = 0.0
    for fm in (fm_k, fm_l):
        h = signed_center_distance(fm, 2)
        rho = orthocircle_radius(fm)
        total += math.sinh(h) / math.sinh(rho)
    return total


def hinge_delaunay_margin(hv, packing, require_compact=True):
    """Algebraic local Delaunay margin of a hinge (RHS minus LHS of the
    flip inequality).

    With hinge labels (a, b, c, d, e), f the flip value of the diagonal,
    and hatted tanh radii, the edge is local weighted Delaunay iff

        sqrt(D_bce)/p^ + sqrt(D_ade)/r^ <= sqrt(D_cdf)/q^ + sqrt(D_abf)/s^

    By default both faces must have compact orthocircles (Xi > 0); the
    margin formula itself does not involve Xi, so the gate can be
    dropped to probe states outside the compact regime.
    """
    fm_k, fm_l = _hinge_faces_metrics(hv, packing)
    if require_compact:
        for fm in (fm_k, fm_l):
            if fm.xi <= 0.0:
                raise NonCompactOrthocircle(
                    f"face {fm.face} has Xi = {fm.xi:.3e} <= 0",
                    face=fm.face,
                    xi=fm.xi,
                )
    a, b, c, d = (float(packing.inv[eid]) for eid in hv.boundary_edges)
    e = float(packing.inv[hv.edge])
    f = ptolemy_flip_value(a, b, c, d, e)
    t_k = math.tanh(float(packing.radii[hv.v_k]))
    t_i = math.tanh(float(packing.radii[hv.v_i]))
    t_l = math.tanh(float(packing.radii[hv.v_l]))
    t_j = math.tanh(float(packing.radii[hv.v_j]))
    lhs = (
        math.sqrt(delta_discriminant(b, c, e)) / t_k
        + math.sqrt(delta_discriminant(a, d, e)) / t_l
    )
    rhs = (
        math.sqrt(delta_discriminant(c, d, f)) / t_i
        + math.sqrt(delta_discriminant(a, b, f)) / t_j
    )
    return rhs - lhs


def is_local_delaunay(hv, packing, tol=TOL_DELAUNAY):
    """(flag, margin) for the hinge: Delaunay iff margin >= -tol."""
    margin = hinge_delaunay_margin(hv, packing)
    return margin >= -tol, margin


def disk_point(distance, angle):
    """Poincare-disk coordinates of the point at a given hyperbolic
    distance from the origin along a direction angle."""
    return cmath.rect(math.tanh(0.5 * distance), angle)


def disk_distance(z1, z2):
    """Hyperbolic distance between two Poincare-disk points."""
    num = 2.0 * abs(z1 - z2) ** 2
    den = (1.0 - abs(z1) ** 2) * (1.0 - abs(z2) ** 2)
    return acosh_stable(1.0 + num / den)


def develop_face_in_disk(fm):
    """Isometric placement of a face's vertex circles in the Poincare disk.

    Corner 0 sits at the origin, corner 1 on the positive real axis, and
    corner 2 in the upper half (counterclockwise orientation).  Returns
    (centers, radii) with centers as complex disk coordinates.
    """
    if not fm.triangle_inequalities_hold():
        raise DegenerateTriangle(f"face {fm.face} cannot be developed")
    l01 = acosh_stable(fm.cosh_lengths[2])
    l02 = acosh_stable(fm.cosh_lengths[1])
    theta = angle_from_sides(*fm.cosh_lengths)
    centers = (0j, disk_point(l01, 0.0), disk_point(l02, theta))
    return centers, fm.radii
