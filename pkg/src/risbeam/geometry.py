"""Uniform planar array lattice, angular conventions and array responses.

Frame: rows run along z (``rows_M`` elements), columns along y
(``cols_N`` elements), the surface normal is +x and zenith is measured
from +z. Element (0, 0) sits at the origin and element vectors are
ordered column by column, so the m-th element of column n has flat index
``n * M + m``.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from ._validation import ScenarioError, check_positive_float, check_positive_int

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class RisGeometry:
    rows_M: int
    cols_N: int
    spacing_y: float
    spacing_z: float
    wavelength: float

    def __post_init__(self):
        object.__setattr__(self, "rows_M", check_positive_int(self.rows_M, "rows_M"))
        object.__setattr__(self, "cols_N", check_positive_int(self.cols_N, "cols_N"))
        for name in ("spacing_y", "spacing_z", "wavelength"):
            object.__setattr__(self, name, check_positive_float(getattr(self, name), name))
        half = self.wavelength / 2
        # tiny slack so that exactly lambda/2 entered in mm does not warn
        if self.spacing_y > half * (1 + 1e-12) or self.spacing_z > half * (1 + 1e-12):
            warnings.warn(
                "element spacing exceeds half a wavelength; grating lobes may appear",
                stacklevel=3,
            )

    @property
    def n_elements(self):
        return self.rows_M * self.cols_N

    @property
    def shape(self):
        return (self.rows_M, self.cols_N)

    @classmethod
    def from_frequency(cls, rows_M, cols_N, spacing_y, spacing_z, frequency):
        return cls(rows_M, cols_N, spacing_y, spacing_z, SPEED_OF_LIGHT / frequency)

    @classmethod
    def half_wavelength(cls, rows_M, cols_N, wavelength=1.0):
        return cls(rows_M, cols_N, wavelength / 2, wavelength / 2, wavelength)

    @classmethod
    def prototype(cls, frequency=5.8e9):
        """20 x 55 board at 5.8 GHz with 14.3 mm row and 10.27 mm column pitch."""
        return cls.from_frequency(20, 55, 10.27e-3, 14.3e-3, frequency)


@dataclass(frozen=True)
class AngularPosition:
    """Far-field direction seen from the origin element, in radians."""

    zenith_theta: float
    azimuth_phi: float

    def __post_init__(self):
        theta = float(self.zenith_theta)
        phi = float(self.azimuth_phi)
        if not (np.isfinite(theta) and np.isfinite(phi)):
            raise ScenarioError("angles must be finite")
        if not 0.0 < theta < math.pi:
            raise ScenarioError(f"zenith must lie strictly inside (0, pi), got {theta!r}")
        # wrap azimuth into [-pi, pi)
        phi = (phi + math.pi) % (2 * math.pi) - math.pi
        object.__setattr__(self, "zenith_theta", theta)
        object.__setattr__(self, "azimuth_phi", phi)

    @classmethod
    def from_degrees(cls, zenith_deg, azimuth_deg):
        return cls(math.radians(zenith_deg), math.radians(azimuth_deg))

    @classmethod
    def azimuth(cls, azimuth_deg):
        """Direction in the horizontal plane (zenith 90 deg)."""
        return cls(math.pi / 2, math.radians(azimuth_deg))

    @property
    def y_cosine(self):
        return math.sin(self.zenith_theta) * math.sin(self.azimuth_phi)

    @property
    def z_cosine(self):
        return math.cos(self.zenith_theta)

    @property
    def off_normal_angle(self):
        """Angle between the direction and the surface normal (+x), radians."""
        x = math.sin(self.zenith_theta) * math.cos(self.azimuth_phi)
        return math.acos(max(-1.0, min(1.0, x)))


def _ula(count, spacing, wavelength, direction_cosine):
    k = 2 * np.pi / wavelength
    n = np.arange(count)
    out = np.exp(-1j * k * spacing * n * direction_cosine)
    out[0] = 1.0
    return out


def ula_response_y(geom, direction):
    """Response of one row (length ``cols_N``) to a plane wave from ``direction``."""
    return _ula(geom.cols_N, geom.spacing_y, geom.wavelength, direction.y_cosine)


def ula_response_z(geom, direction):
    """Response of one column (length ``rows_M``) to a plane wave from ``direction``."""
    return _ula(geom.rows_M, geom.spacing_z, geom.wavelength, direction.z_cosine)


def upa_response(geom, direction):
    """Planar array response, ``kron(a_y, a_z)``, ordered column by column."""
    return np.kron(ula_response_y(geom, direction), ula_response_z(geom, direction))
