"""Curvature prescription on inversive-distance circle packings.

The solver works in the coordinates u_i = log tanh(r_i / 2), in which
the normalized Ricci potential (the path integral of (K - Kbar) . du)
is convex and the flow is linear.  Radii are materialized only when the
geometry is evaluated.  After every accepted step the triangulation is
repaired to weighted Delaunay by flip surgery, and every flip is logged
so the discrete conformal class can be audited afterwards.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.linalg import solve as dense_solve

from .errors import (
    DegenerateTriangle,
    DomainError,
    FlowStalled,
    MaxIterationsExceeded,
    NonCompactOrthocircle,
    SolverStalled,
    TargetOutOfRange,
)
from .flips import make_weighted_delaunay, surface_delaunay_margins
from .geometry import TOL_DELAUNAY, Packing, face_metrics, validate_packing
from .hyptrig import sinh_from_cosh
from .surface import euler_characteristic

DEFAULT_TOL_K = 1e-10
DEFAULT_MAX_ITERATIONS = 100
MIN_LINE_SEARCH_STEP = 1e-12
MIN_FLOW_DT = 1e-12

STATUS_CONVERGED = "converged"
STATUS_MAX_ITERATIONS = "max_iterations"


def u_from_r(radii):
    """u = log tanh(r/2) componentwise; the image is (-inf, 0)."""
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0.0):
        raise DomainError("radii must be positive")
    return np.log(np.tanh(0.5 * radii))


def r_from_u(u):
    """r = 2 artanh(exp(u)); inverse of u_from_r."""
    u = np.asarray(u, dtype=float)
    if np.any(u >= 0.0):
        raise DomainError("u-coordinates must be negative")
    return 2.0 * np.arctanh(np.exp(u))


def curvatures(surface, packing):
    """Vertex curvatures 2*pi minus cone angle, and the total area.

    Corner angles at self-glued faces count with multiplicity.  The
    returned pair satisfies sum(K) = 2*pi*chi + area by construction.
    """
    angle_sum = np.zeros(surface.vertex_count)
    total_area = 0.0
    for fid in range(len(surface.faces)):
        fm = face_metrics(surface, packing, fid)
        angles = fm.angles()
        for m in range(3):
            angle_sum[fm.corners[m]] += angles[m]
        total_area += math.pi - math.fsum(angles)
    return 2.0 * math.pi - angle_sum, total_area


def gauss_bonnet_residual(surface, packing):
    """sum(K) - 2 pi chi - area; zero up to roundoff on any valid state."""
    K, area = curvatures(surface, packing)
    return float(K.sum() - 2.0 * math.pi * euler_characteristic(surface) - area)


def curvature_gradient(surface, packing, target):
    """Gradient K(u) - Kbar of the normalized Ricci potential."""
    K, _ = curvatures(surface, packing)
    return K - np.asarray(target, dtype=float)


def _face_angle_radius_jacobian(fm):
    """3x3 matrix of corner-angle derivatives with respect to the three
    corner radii (corner-slot indexed)."""
    C = fm.cosh_lengths
    S = tuple(sinh_from_cosh(c) for c in C)
    angles = fm.angles()
    R = fm.radii
    inv = fm.inv

    # dC[s][n]: derivative of cosh length s with respect to radius n.
    dC = [[0.0] * 3 for _ in range(3)]
    for s in range(3):
        n1, n2 = (s + 1) % 3, (s + 2) % 3
        dC[s][n1] = math.sinh(R[n1]) * math.cosh(R[n2]) + inv[s] * math.cosh(
            R[n1]
        ) * math.sinh(R[n2])
        dC[s][n2] = math.sinh(R[n2]) * math.cosh(R[n1]) + inv[s] * math.cosh(
            R[n2]
        ) * math.sinh(R[n1])

    J = [[0.0] * 3 for _ in range(3)]
    for m in range(3):
        m1, m2 = (m + 1) % 3, (m + 2) % 3
        sin_t = math.sin(angles[m])
        dT = [0.0] * 3
        dT[m] = 1.0 / (S[m1] * S[m2] * sin_t)
        dT[m1] = (C[m2] - C[m] * C[m1]) / (S[m1] ** 3 * S[m2] * sin_t)
        dT[m2] = (C[m1] - C[m] * C[m2]) / (S[m2] ** 3 * S[m1] * sin_t)
        for n in range(3):
            J[m][n] = math.fsum(dT[s] * dC[s][n] for s in range(3))
    return J


def hessian(surface, packing, symmetrize=True):
    """Jacobian dK/du assembled from per-face angle derivatives.

    Entries are nonzero only on the diagonal and for combinatorially
    adjacent vertex pairs.  The analytic matrix is symmetric up to
    roundoff; with ``symmetrize`` it is averaged with its transpose.
    """
    n = surface.vertex_count
    H = np.zeros((n, n))
    sinh_r = np.sinh(packing.radii)
    for fid in range(len(surface.faces)):
        fm = face_metrics(surface, packing, fid)
        J = _face_angle_radius_jacobian(fm)
        for m in range(3):
            vm = fm.corners[m]
            for nn in range(3):
                vn = fm.corners[nn]
                H[vm, vn] -= J[m][nn] * sinh_r[vn]
    if symmetrize:
        H = 0.5 * (H + H.T)
    return H


def hessian_spectrum_sign(H):
    """+1 / -1 when all eigenvalues share that sign, else 0."""
    eigs = np.linalg.eigvalsh(np.asarray(H))
    if np.all(eigs > 0.0):
        return 1
    if np.all(eigs < 0.0):
        return -1
    return 0


def validate_target(surface, target):
    """Admissibility of a target curvature: every component below 2*pi
    and the total above 2*pi*chi.  Raises TargetOutOfRange otherwise."""
    target = np.asarray(target, dtype=float)
    if len(target) != surface.vertex_count:
        raise TargetOutOfRange("target length does not match vertex count")
    if not np.all(np.isfinite(target)):
        raise TargetOutOfRange("target curvature must be finite")
    if np.any(target >= 2.0 * math.pi):
        raise TargetOutOfRange("every target curvature must be below 2*pi")
    bound = 2.0 * math.pi * euler_characteristic(surface)
    if target.sum() <= bound:
        raise TargetOutOfRange(
            f"target curvature sum {target.sum():.6f} must exceed "
            f"2*pi*chi = {bound:.6f}"
        )
    return target


def segment_potential(
    surface,
    packing,
    target,
    u_start,
    u_end,
    tol_delaunay=TOL_DELAUNAY,
    flip_budget=None,
    checkpoints=64,
    iteration=0,
):
    """Integral of (K - Kbar) . du over the straight u-segment.

    The carried triangulation is marched along the segment; where the
    segment leaves the current Delaunay cell, the wall is located by
    bisection on the worst edge margin, the smooth piece up to the wall
    is integrated by adaptive quadrature, and flip surgery moves the
    march into the next cell.  The integrand is continuous across walls,
    so the piecewise sum is the path integral.

    Returns (value, end_surface, end_packing, wall_flip_events); the end
    packing carries the radii of u_end.
    """
    u_start = np.asarray(u_start, dtype=float)
    u_end = np.asarray(u_end, dtype=float)
    du = u_end - u_start
    target = np.asarray(target, dtype=float)

    surf = surface
    inv = packing.inv.copy()
    events = []

    if not du.any():
        return 0.0, surf, Packing(inv, r_from_u(u_end)), events

    def packing_at(s):
        return Packing(inv, r_from_u(u_start + s * du))

    def min_margin(s):
        return min(surface_delaunay_margins(surf, packing_at(s)))

    def integrand(s):
        K, _ = curvatures(surf, packing_at(s))
        return float((K - target) @ du)

    def piece(a, b):
        if b - a < 1e-14:
            return 0.0
        val, _ = quad(integrand, a, b, epsabs=1e-10, epsrel=1e-11, limit=100)
        return val

    surf, pk, ev = make_weighted_delaunay(
        surf, packing_at(0.0), tol=tol_delaunay, flip_budget=flip_budget,
        iteration=iteration,
    )
    inv = pk.inv
    events += ev

    total = 0.0
    piece_start = 0.0
    s_pos = 0.0
    step = 1.0 / checkpoints
    while s_pos < 1.0:
        s_next = min(1.0, s_pos + step)
        if min_margin(s_next) >= -tol_delaunay:
            s_pos = s_next
            continue
        # Wall between s_pos (inside the cell) and s_next (outside):
        # shrink the bracket, keeping the outside end strictly outside.
        lo, hi = s_pos, s_next
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if min_margin(mid) >= -tol_delaunay:
                lo = mid
            else:
                hi = mid
        total += piece(piece_start, lo)
        surf, pk, ev = make_weighted_delaunay(
            surf, packing_at(hi), tol=tol_delaunay, flip_budget=flip_budget,
            iteration=iteration,
        )
        inv = pk.inv
        events += ev
        piece_start = lo
        s_pos = hi
    total += piece(piece_start, 1.0)
    return total, surf, Packing(inv, r_from_u(u_end)), events


def ricci_potential(
    surface,
    packing,
    target,
    u_reference,
    tol_delaunay=TOL_DELAUNAY,
    flip_budget=None,
    checkpoints=64,
):
    """Normalized Ricci potential of the state relative to u_reference.

    The potential is only defined up to a constant, so the reference
    point is always explicit; path independence makes the straight
    segment as good as any path.
    """
    u_end = u_from_r(packing.radii)
    start_packing = Packing(packing.inv, r_from_u(np.asarray(u_reference, float)))
    value, _, _, _ = segment_potential(
        surface,
        start_packing,
        target,
        u_reference,
        u_end,
        tol_delaunay=tol_delaunay,
        flip_budget=flip_budget,
        checkpoints=checkpoints,
    )
    return value


@dataclass
class SolveState:
    """Result of a curvature-prescription run."""

    surface: object
    packing: Packing
    u: np.ndarray
    target: np.ndarray
    curvature: np.ndarray
    total_area: float
    status: str
    iterations: int
    flip_log: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    potential: float = 0.0
    hessian_sign: int = 0

    @property
    def max_error(self):
        return float(np.max(np.abs(self.curvature - self.target)))


def _clamped_step(u, delta):
    """Take u + delta in (-inf, 0)^V: any component that would reach 0
    is reflected back to the half-way point u/2 instead."""
    out = u + delta
    bad = out >= 0.0
    if np.any(bad):
        out = out.copy()
        out[bad] = 0.5 * u[bad]
    return out


def newton_solve(
    surface,
    packing,
    target,
    tol=DEFAULT_TOL_K,
    max_iterations=DEFAULT_MAX_ITERATIONS,
    tol_delaunay=TOL_DELAUNAY,
    flip_budget=None,
    track_potential=True,
):
    """Newton descent for the packing realizing the target curvature.

    Each iteration solves H . delta = -(K - Kbar) with the analytic
    curvature Jacobian, clamps the step to keep u negative, backtracks
    on the Euclidean norm of the curvature error, and re-runs flip
    surgery after the accepted step.  Trial evaluations reuse the
    current triangulation: the potential extends C1 across cell walls,
    so a marginally non-Delaunay trial still measures progress.
    """
    target = validate_target(surface, target)
    validate_packing(surface, packing)

    surface, packing, events = make_weighted_delaunay(
        surface, packing, tol=tol_delaunay, flip_budget=flip_budget
    )
    flip_log = list(events)
    u = u_from_r(packing.radii)
    potential = 0.0
    trace = []
    hess_sign = 0

    K, area = curvatures(surface, packing)
    for iteration in range(1, max_iterations + 1):
        err = float(np.max(np.abs(K - target)))
        if err <= tol:
            if hess_sign == 0:
                hess_sign = hessian_spectrum_sign(hessian(surface, packing))
            return SolveState(
                surface, packing, u, target, K, area,
                STATUS_CONVERGED, iteration - 1, flip_log, trace,
                potential, hess_sign,
            )

        H = hessian(surface, packing)
        hess_sign = hessian_spectrum_sign(H)
        # dense symmetric solve; sparsity exists but is not worth
        # exploiting at the vertex counts this targets
        delta = dense_solve(H, -(K - target), assume_a="sym")
        sup = float(np.max(np.abs(delta)))
        if sup > 1.0:
            delta *= 1.0 / sup

        base_norm = float(np.linalg.norm(K - target))
        step = 1.0
        while True:
            u_try = _clamped_step(u, step * delta)
            try:
                K_try, _ = curvatures(
                    surface, Packing(packing.inv, r_from_u(u_try))
                )
                ok = float(np.linalg.norm(K_try - target)) < base_norm
            except (DegenerateTriangle, DomainError):
                ok = False
            if ok:
                break
            step *= 0.5
            if step < MIN_LINE_SEARCH_STEP:
                state = SolveState(
                    surface, packing, u, target, K, area,
                    "stalled", iteration, flip_log, trace, potential, hess_sign,
                )
                raise SolverStalled("line search step underflow", state=state)

        if track_potential:
            d_pot, _, _, _ = segment_potential(
                surface, packing, target, u, u_try,
                tol_delaunay=tol_delaunay, flip_budget=flip_budget,
            )
            potential += d_pot
        u = u_try
        packing = Packing(packing.inv, r_from_u(u))
        surface, packing, events = make_weighted_delaunay(
            surface, packing, tol=tol_delaunay, flip_budget=flip_budget,
            iteration=iteration,
        )
        flip_log += events
        K, area = curvatures(surface, packing)
        trace.append(
            {
                "iteration": iteration,
                "max_error": float(np.max(np.abs(K - target))),
                "potential": potential,
                "step": step,
                "flips": len(events),
            }
        )

    state = SolveState(
        surface, packing, u, target, K, area,
        STATUS_MAX_ITERATIONS, max_iterations, flip_log, trace,
        potential, hess_sign,
    )
    raise MaxIterationsExceeded(
        f"no convergence within {max_iterations} Newton iterations", state=state
    )


def ricci_flow(
    surface,
    packing,
    target,
    dt=0.2,
    t_max=200.0,
    tol=1e-8,
    tol_delaunay=TOL_DELAUNAY,
    flip_budget=None,
):
    """Discrete Ricci flow du/dt = -(K - Kbar) with flip surgery.

    Explicit stepping; a step is accepted only if the normalized Ricci
    potential does not increase, otherwise dt is halved (FlowStalled on
    underflow).  The flow is gradient descent of the potential, so the
    recorded potential trace is non-increasing across accepted steps.
    Stops once max|K - Kbar| <= tol or the flow time reaches t_max.
    """
    target = validate_target(surface, target)
    validate_packing(surface, packing)

    surface, packing, events = make_weighted_delaunay(
        surface, packing, tol=tol_delaunay, flip_budget=flip_budget
    )
    flip_log = list(events)
    u = u_from_r(packing.radii)
    potential = 0.0
    trace = []

    t = 0.0
    step_index = 0
    K, area = curvatures(surface, packing)
    while True:
        err = float(np.max(np.abs(K - target)))
        if err <= tol:
            status = STATUS_CONVERGED
            break
        if t >= t_max:
            status = STATUS_MAX_ITERATIONS
            break

        direction = -(K - target)
        accepted = False
        while not accepted:
            u_try = _clamped_step(u, dt * direction)
            try:
                d_pot, surf_try, pk_try, ev_try = segment_potential(
                    surface, packing, target, u, u_try,
                    tol_delaunay=tol_delaunay, flip_budget=flip_budget,
                    iteration=step_index + 1,
                )
                accepted = d_pot <= 0.0
            except (DegenerateTriangle, DomainError, NonCompactOrthocircle):
                accepted = False
            if not accepted:
                dt *= 0.5
                if dt < MIN_FLOW_DT:
                    state = SolveState(
                        surface, packing, u, target, K, area,
                        "stalled", step_index, flip_log, trace, potential, 0,
                    )
                    raise FlowStalled("flow step size underflow", state=state)

        step_index += 1
        t += dt
        u = u_try
        surface, packing = surf_try, pk_try
        flip_log += ev_try
        potential += d_pot
        K, area = curvatures(surface, packing)
        trace.append(
            {
                "step": step_index,
                "t": t,
                "dt": dt,
                "max_error": float(np.max(np.abs(K - target))),
                "potential": potential,
                "flips": len(ev_try),
            }
        )

    state = SolveState(
        surface, packing, u, target, K, area,
        status, step_index, flip_log, trace, potential, 0,
    )
    state.hessian_sign = hessian_spectrum_sign(hessian(surface, packing))
    return state
