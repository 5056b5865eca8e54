import cmath
import math

import numpy as np
import pytest

from risbeam.geometry import AngularPosition, RisGeometry


def scalar_upa(geom, theta, phi):
    """Element-by-element array response, column by column from the origin."""
    out = []
    for n in range(geom.cols_N):
        for m in range(geom.rows_M):
            phase = -2 * math.pi / geom.wavelength * (
                geom.spacing_y * n * math.sin(theta) * math.sin(phi) + geom.spacing_z * m * math.cos(theta)
            )
            out.append(cmath.exp(1j * phase))
    return np.array(out)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def geom22():
    return RisGeometry(2, 2, 0.2, 0.3, 1.0)


@pytest.fixture
def broadside():
    return AngularPosition(math.pi / 2, 0.0)
