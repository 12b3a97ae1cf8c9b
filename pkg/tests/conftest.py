import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("repeatable", settings(derandomize=True, deadline=None))
settings.load_profile("repeatable")

from hidra.complexes import (
    octahedron_sphere,
    one_vertex_genus2,
    one_vertex_torus,
    tetrahedron_sphere,
    two_triangle_sphere,
)
from hidra.geometry import Packing
from hidra.solver import curvatures, r_from_u, u_from_r


@pytest.fixture
def torus():
    return one_vertex_torus()


@pytest.fixture
def genus2():
    return one_vertex_genus2()


@pytest.fixture
def octahedron():
    return octahedron_sphere()


@pytest.fixture
def tetrahedron():
    return tetrahedron_sphere()


@pytest.fixture
def sphere2():
    return two_triangle_sphere()


@pytest.fixture
def torus_packing(torus):
    """The symmetric anchor packing: I = 2, tanh r = 1/2, cosh lengths 2."""
    return Packing(np.full(3, 2.0), np.full(1, np.arctanh(0.5)))


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def hessian_fd(surface, packing, h=1e-6):
    """Central-difference Jacobian of K with respect to u (the oracle the
    analytic Hessian is validated against)."""
    u0 = u_from_r(packing.radii)
    n = len(u0)
    H = np.zeros((n, n))
    for j in range(n):
        up = u0.copy()
        dn = u0.copy()
        up[j] += h
        dn[j] -= h
        Kp, _ = curvatures(surface, Packing(packing.inv, r_from_u(up)))
        Kn, _ = curvatures(surface, Packing(packing.inv, r_from_u(dn)))
        H[:, j] = (Kp - Kn) / (2.0 * h)
    return H
