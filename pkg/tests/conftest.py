import numpy as np
import pytest

from curvhess import build_mesh, geometry
from curvhess.meshgen import (annulus, cone_fan, icosahedron, icosphere,
                              monge_grid, polar_disk, square_grid,
                              tetrahedron)


@pytest.fixture(scope="session")
def jittered_grid():
    return square_grid(12, jitter=0.25, seed=3)


@pytest.fixture(scope="session")
def disk_2k():
    return polar_disk(25)


@pytest.fixture(scope="session")
def sphere3():
    return icosphere(3)


@pytest.fixture(scope="session")
def saddle():
    return monge_grid(lambda x, y: x * x - y * y, 10, jitter=0.15, seed=9)


@pytest.fixture(scope="session")
def small_annulus():
    return annulus(4, 8, ring_step=0.125)
