"""Control state -> complex reflection coefficient, with incidence-angle impairments."""

from dataclasses import dataclass
import math

import numpy as np

from ._validation import ScenarioError, check_nonnegative_float
from .config import STATE_COEFFICIENTS, ReflectionConfig

MODES = ("ideal_1bit", "ideal_continuous", "angle_dependent")

# measured phase span over the 0-16 V sweep versus incidence angle (degrees)
MEASURED_PHASE_SPANS = ((15.0, 276.0), (30.0, 265.0), (45.0, 250.0))
# span at which the bias pair was calibrated to give exactly 180 degrees
CALIBRATION_SPAN_DEG = 250.0
WORST_CASE_RIPPLE_DB = 6.5


class Reflection(complex):
    """A reflection coefficient that also remembers whether its incidence was clamped."""

    clamped = False

    def __new__(cls, value, clamped=False):
        obj = super().__new__(cls, value)
        obj.clamped = bool(clamped)
        return obj


@dataclass(frozen=True)
class ElementResponseModel:
    mode: str = "ideal_1bit"
    phase_range_table: tuple = MEASURED_PHASE_SPANS
    amplitude_ripple_db: float = 0.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ScenarioError(f"unknown element mode {self.mode!r}; expected one of {MODES}")
        table = tuple((float(a), float(s)) for a, s in self.phase_range_table)
        if not table:
            raise ScenarioError("phase_range_table must not be empty")
        angles = [a for a, _ in table]
        if any(b <= a for a, b in zip(angles, angles[1:])):
            raise ScenarioError("phase_range_table angles must be strictly increasing")
        if any(not 0.0 < s <= 360.0 for _, s in table):
            raise ScenarioError("phase spans must lie in (0, 360] degrees")
        object.__setattr__(self, "phase_range_table", table)
        object.__setattr__(
            self, "amplitude_ripple_db", check_nonnegative_float(self.amplitude_ripple_db, "amplitude_ripple_db")
        )

    @property
    def is_binary(self):
        return self.mode != "ideal_continuous"

    def phase_span(self, incident):
        """Interpolated phase span (deg) and whether the angle was clamped."""
        angle = math.degrees(incident.off_normal_angle)
        angles, spans = zip(*self.phase_range_table)
        clamped = not angles[0] <= angle <= angles[-1]
        return float(np.interp(angle, angles, spans)), clamped

    def separation(self, incident):
        """Phase difference (deg) between the two control states."""
        if self.mode != "angle_dependent":
            return 180.0, False
        span, clamped = self.phase_span(incident)
        return min(180.0, span * 180.0 / CALIBRATION_SPAN_DEG), clamped

    def state_coefficients(self, incident):
        """Coefficients of logic 0 and logic 1, as a length-2 array."""
        if self.mode == "ideal_1bit":
            return STATE_COEFFICIENTS.copy(), False
        if self.mode == "ideal_continuous":
            raise ValueError("continuous elements have no discrete states")
        sep, clamped = self.separation(incident)
        half = math.radians(sep) / 2
        # logic 0 sits at the no-loss end of the ripple, logic 1 at the lossy end
        amp = 10.0 ** (-self.amplitude_ripple_db * np.array([0.0, 1.0]) / 20.0)
        return amp * np.exp(1j * np.array([-half, half])), clamped

    def realize(self, config, incident):
        """Physical coefficients of ``config`` when illuminated from ``incident``."""
        if self.mode == "ideal_continuous" or self.mode == "ideal_1bit":
            return config
        if not config.is_binary:
            raise ValueError("angle-dependent elements need a binary configuration")
        coeffs, _ = self.state_coefficients(incident)
        return ReflectionConfig(coeffs[config.states])


def reflection_coefficient(model, state, incident=None):
    """Reflection coefficient of one element in ``state`` lit from ``incident``.

    ``state`` is 0/1 for the binary modes and a phase in radians for
    ``ideal_continuous``. The returned value is a ``complex`` whose
    ``clamped`` attribute flags an incidence outside the model's table.
    """
    if model.mode == "ideal_continuous":
        return Reflection(np.exp(1j * float(state)))
    if state not in (0, 1):
        raise ScenarioError(f"binary elements take state 0 or 1, got {state!r}")
    if model.mode == "ideal_1bit":
        return Reflection(STATE_COEFFICIENTS[int(state)])
    if incident is None:
        raise ValueError("angle-dependent elements need an incidence direction")
    coeffs, clamped = model.state_coefficients(incident)
    return Reflection(coeffs[int(state)], clamped)
