"""Stable hyperbolic trigonometry primitives.

Lengths are carried as hyperbolic cosines throughout: every law used here
is polynomial in cosh/sinh, so storing cosh values avoids repeated
transcendental calls and cancellation near degenerate configurations.
Raw lengths appear only at API boundaries (acosh_stable / math.cosh).
"""

import math

from .errors import DegenerateTriangle, DomainError

# Clamping width applied before acos/acosh: flip-boundary configurations
# sit exactly on the domain edge and may land epsilon outside it.
TOL_DOMAIN = 1e-12


def acosh_stable(x):
    """Inverse hyperbolic cosine, accurate down to x = 1.

    Uses log1p on x - 1 so that the relative error stays ~1 ulp even for
    x - 1 of order 1e-14, where the naive log(x + sqrt(x^2-1)) loses
    half its digits.  Inputs within TOL_DOMAIN below 1 are clamped to 1.
    """
    if x < 1.0 - TOL_DOMAIN:
        raise DomainError(f"acosh argument {x} below 1")
    t = x - 1.0
    if t <= 0.0:
        return 0.0
    return math.log1p(t + math.sqrt(t * (t + 2.0)))


def sinh_from_cosh(c):
    """sinh of the length whose cosh is c, via sqrt((c-1)(c+1)).

    The factored form keeps full precision for c near 1; values within
    roundoff below 1 are treated as sinh = 0.
    """
    return math.sqrt(max(c - 1.0, 0.0) * (c + 1.0))


def _acos_clamped(t):
    if t > 1.0:
        if t > 1.0 + TOL_DOMAIN:
            raise DegenerateTriangle(f"cosine {t} exceeds 1")
        return 0.0
    if t < -1.0:
        if t < -1.0 - TOL_DOMAIN:
            raise DegenerateTriangle(f"cosine {t} below -1")
        return math.pi
    return math.acos(t)


def angle_from_sides(x, y, z):
    """Angle opposite the side of cosh-length x, given all three sides.

    cos A = (cosh y cosh z - cosh x) / (sinh y sinh z)
    """
    sy = sinh_from_cosh(y)
    sz = sinh_from_cosh(z)
    if sy == 0.0 or sz == 0.0:
        raise DegenerateTriangle("adjacent side has zero length")
    return _acos_clamped((y * z - x) / (sy * sz))


def side_from_angles(alpha, beta, gamma):
    """cosh of the side opposite alpha, from the three angles.

    cosh x = (cos beta cos gamma + cos alpha) / (sin beta sin gamma)
    Requires alpha + beta + gamma < pi (hyperbolic angle deficit).
    """
    if alpha + beta + gamma >= math.pi:
        raise DomainError("angle sum must be below pi")
    return (math.cos(beta) * math.cos(gamma) + math.cos(alpha)) / (
        math.sin(beta) * math.sin(gamma)
    )


def hexagon_side(x, y, z):
    """Right-angled hexagon law: side a opposite x with neighbours y, z.

    cosh a = (cosh y cosh z + cosh x) / (sinh y sinh z)
    """
    if y <= 1.0 or z <= 1.0:
        raise DomainError("hexagon sides adjacent to a must have positive length")
    return (y * z + x) / (sinh_from_cosh(y) * sinh_from_cosh(z))


def quad_two_right(a, b, y):
    """Quadrilateral with two right angles at the ends of the side x.

    Given the raw lengths a, b of the legs and the cosh of the opposite
    side y, returns cosh x = (sinh a sinh b + cosh y) / (cosh a cosh b).
    """
    if a < 0.0 or b < 0.0:
        raise DomainError("leg lengths must be non-negative")
    return (math.sinh(a) * math.sinh(b) + y) / (math.cosh(a) * math.cosh(b))


def quad_three_right(ad, bc):
    """Quadrilateral ABCD with right angles at A, B, C (raw leg lengths).

    Returns (cosh AB, cosh CD) = (tanh AD / tanh BC, sinh AD / sinh BC);
    requires 0 < BC <= AD so both ratios are at least 1.
    """
    if bc <= 0.0:
        raise DomainError("BC must be positive")
    if math.tanh(ad) < math.tanh(bc):
        raise DomainError("need tanh AD >= tanh BC")
    return math.tanh(ad) / math.tanh(bc), math.sinh(ad) / math.sinh(bc)


def triangle_area(alpha, beta, gamma):
    """Hyperbolic triangle area as the angle defect pi - alpha - beta - gamma."""
    s = alpha + beta + gamma
    if s >= math.pi:
        raise DomainError("angle sum must be below pi")
    return math.pi - s


def hinge_diagonal(u, v, w, x, y):
    """cosh distance between the far vertices of a developed hinge.

    The hinge is two triangles glued along the side of cosh-length y:
    (u, x, y) and (v, w, y), with u and v adjacent to the common vertex.
    Developing both into the plane and adding the two angles at that
    vertex gives the diagonal z:

        z = u v - cos(alpha + beta) sinh(acosh u) sinh(acosh v)
    """
    su = sinh_from_cosh(u)
    sv = sinh_from_cosh(v)
    sy = sinh_from_cosh(y)
    if su == 0.0 or sv == 0.0 or sy == 0.0:
        raise DegenerateTriangle("hinge side has zero length")
    alpha = _acos_clamped((u * y - x) / (su * sy))
    beta = _acos_clamped((v * y - w) / (sv * sy))
    return u * v - math.cos(alpha + beta) * su * sv


def hinge_poly_residual(u, v, w, x, y, z):
    """Relative residual of the algebraic identity tying z to (u,v,w,x,y).

    A developed hinge's six cosh values satisfy

        u^2 w^2 + v^2 x^2 + y^2 z^2 - u^2 - v^2 - w^2 - x^2 - y^2 - z^2 + 1
        - 2 (u v w x + u w y z + v x y z - v w y - u x y - u v z - w x z) = 0.

    Returns the left side divided by the largest monomial magnitude.
    """
    terms = (
        u * u * w * w,
        v * v * x * x,
        y * y * z * z,
        -u * u,
        -v * v,
        -w * w,
        -x * x,
        -y * y,
        -z * z,
        1.0,
        -2.0 * u * v * w * x,
        -2.0 * u * w * y * z,
        -2.0 * v * x * y * z,
        2.0 * v * w * y,
        2.0 * u * x * y,
        2.0 * u * v * z,
        2.0 * w * x * z,
    )
    scale = max(abs(t) for t in terms)
    return math.fsum(terms) / scale
