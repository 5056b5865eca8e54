"""Per-element reflection configurations for an M x N surface."""

import numpy as np

from ._validation import ScenarioError, check_positive_int

# logic "0" -> exp(-j pi/2), logic "1" -> exp(+j pi/2)
STATE_COEFFICIENTS = np.array([-1j, 1j])


class ReflectionConfig:
    """M x N grid of reflection coefficients, optionally backed by 1-bit states.

    Parameters
    ----------
    coefficients : array_like of complex, shape (M, N)
        Reflection coefficient of the element at row m, column n.
    states : array_like of {0, 1}, shape (M, N), optional
        Binary control states. When given, ``coefficients`` must be omitted
        or agree with the ideal state mapping.
    group_size : int, optional
        Number of vertically adjacent elements sharing one control signal.

    Instances are treated as immutable; every modifier returns a new object.
    """

    __slots__ = ("_coefficients", "_states", "_group_size")

    def __init__(self, coefficients=None, states=None, group_size=None):
        if states is not None:
            states = np.array(states, dtype=np.int8)
            if states.ndim != 2:
                raise ScenarioError("states must be a 2-D grid")
            if not np.isin(states, (0, 1)).all():
                raise ScenarioError("binary states must be 0 or 1")
            ideal = STATE_COEFFICIENTS[states]
            if coefficients is None:
                coefficients = ideal
        if coefficients is None:
            raise ScenarioError("either coefficients or states are required")
        coefficients = np.array(coefficients, dtype=complex)
        if coefficients.ndim != 2:
            raise ScenarioError("coefficients must be a 2-D grid")
        if not np.all(np.isfinite(coefficients)):
            raise ScenarioError("coefficients must be finite")
        if states is not None and states.shape != coefficients.shape:
            raise ScenarioError("states and coefficients differ in shape")
        if group_size is not None:
            group_size = check_positive_int(group_size, "group_size")
            rows = coefficients.shape[0]
            if rows % group_size:
                raise ScenarioError(f"group size {group_size} does not divide {rows} rows")
            grid = states if states is not None else coefficients
            blocks = grid.reshape(rows // group_size, group_size, -1)
            if not np.all(blocks == blocks[:, :1, :]):
                raise ScenarioError("grouped elements must share one state")
        coefficients.setflags(write=False)
        if states is not None:
            states.setflags(write=False)
        self._coefficients = coefficients
        self._states = states
        self._group_size = group_size

    @classmethod
    def from_states(cls, states, group_size=None):
        return cls(states=states, group_size=group_size)

    @classmethod
    def from_phases(cls, phases, group_size=None):
        return cls(np.exp(1j * np.asarray(phases, dtype=float)), group_size=group_size)

    @classmethod
    def from_vector(cls, vector, shape):
        """Inverse of :attr:`vector` (column-major reshape)."""
        return cls(np.asarray(vector, dtype=complex).reshape(shape, order="F"))

    @classmethod
    def homogeneous(cls, shape, state=0, group_size=None):
        return cls(states=np.full(shape, state, dtype=np.int8), group_size=group_size)

    @classmethod
    def random_binary(cls, shape, rng, group_size=None):
        rows, cols = shape
        g = group_size or 1
        ctrl = rng.integers(0, 2, size=(rows // g, cols), dtype=np.int8)
        return cls(states=np.repeat(ctrl, g, axis=0), group_size=group_size)

    @property
    def coefficients(self):
        return self._coefficients

    @property
    def states(self):
        return self._states

    @property
    def group_size(self):
        return self._group_size

    @property
    def shape(self):
        return self._coefficients.shape

    @property
    def is_binary(self):
        return self._states is not None

    @property
    def vector(self):
        """Column-major vectorization, consistent with ``upa_response``."""
        return self._coefficients.ravel(order="F")

    @property
    def phases(self):
        return np.angle(self._coefficients)

    @property
    def control_shape(self):
        """Shape of the grid of independent control signals."""
        rows, cols = self.shape
        return (rows // (self._group_size or 1), cols)

    @property
    def control_states(self):
        if self._states is None:
            raise ValueError("configuration is not binary")
        return self._states[:: self._group_size or 1, :]

    def with_states(self, states):
        return type(self)(states=states, group_size=self._group_size)

    def _require_binary(self):
        if self._states is None:
            raise ValueError("row/column flips need a binary configuration")

    def flip_column(self, n):
        """Toggle every element of column ``n``."""
        self._require_binary()
        states = self._states.copy()
        states[:, n] ^= 1
        return self.with_states(states)

    def flip_row(self, m):
        """Toggle control row ``m``; for grouped surfaces this is a whole group row."""
        self._require_binary()
        g = self._group_size or 1
        states = self._states.copy()
        states[m * g:(m + 1) * g, :] ^= 1
        return self.with_states(states)

    def __eq__(self, other):
        if not isinstance(other, ReflectionConfig):
            return NotImplemented
        if self.is_binary and other.is_binary:
            return self._group_size == other._group_size and np.array_equal(self._states, other._states)
        return (
            self._group_size == other._group_size
            and self.is_binary == other.is_binary
            and np.array_equal(self._coefficients, other._coefficients)
        )

    def __hash__(self):
        return hash((self.shape, self._coefficients.tobytes()))

    def __repr__(self):
        kind = "binary" if self.is_binary else "continuous"
        return f"ReflectionConfig({kind}, shape={self.shape}, group_size={self._group_size})"
