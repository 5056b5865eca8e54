"""scikit-learn compatible wrappers around the beamforming routines."""

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .beamforming import apply_grouping, optimal_continuous, quantize_1bit, quantize_1bit_optimal
from .config import ReflectionConfig
from .experiments import Scenario
from .geometry import AngularPosition
from .greedy import FeedbackChannel, greedy_beamform

QUANTIZERS = (None, "case_rule", "optimal")


class SteeringTransformer(TransformerMixin, BaseEstimator):
    """Map direction pairs to surface configurations.

    Each row of ``X`` is ``(ue_zenith, ue_azimuth, ap_zenith, ap_azimuth)``
    in radians; ``transform`` returns one column-major configuration vector
    of length ``M * N`` per row.

    Parameters
    ----------
    geometry : RisGeometry
    quantize : {None, "case_rule", "optimal"}
        ``None`` keeps the continuous optimum.
    group_size : int, optional
        Vertical grouping applied after quantization.
    """

    def __init__(self, geometry=None, quantize="case_rule", group_size=None):
        self.geometry = geometry
        self.quantize = quantize
        self.group_size = group_size

    def _check(self, X):
        X = check_array(X, dtype=float, ensure_min_features=4)
        if X.shape[1] != 4:
            raise ValueError(f"expected 4 angle columns, got {X.shape[1]}")
        return X

    def fit(self, X, y=None):
        if self.geometry is None:
            raise ValueError("geometry is required")
        if self.quantize not in QUANTIZERS:
            raise ValueError(f"quantize must be one of {QUANTIZERS}, got {self.quantize!r}")
        if self.group_size is not None and self.quantize is None:
            raise ValueError("grouping needs a quantized output")
        X = self._check(X)
        self.n_features_in_ = X.shape[1]
        self.n_elements_ = self.geometry.n_elements
        return self

    def config_for(self, row):
        ue = AngularPosition(row[0], row[1])
        ap = AngularPosition(row[2], row[3])
        cfg = optimal_continuous(self.geometry, ue, ap)
        if self.group_size:
            return apply_grouping(cfg, self.group_size)
        if self.quantize == "case_rule":
            return quantize_1bit(cfg)
        if self.quantize == "optimal":
            return quantize_1bit_optimal(cfg)
        return cfg

    def transform(self, X):
        check_is_fitted(self, "n_elements_")
        X = self._check(X)
        return np.stack([self.config_for(row).vector for row in X])


class GreedyBeamformer(BaseEstimator):
    """Greedy column/row-flip beamformer fitted against received-power feedback.

    ``fit`` accepts a :class:`Scenario` or a :class:`FeedbackChannel`; the
    latter needs ``shape`` set.

    Attributes
    ----------
    config_ : ReflectionConfig
    trace_ : GreedyTrace
    n_measurements_ : int
    """

    def __init__(self, sweeps=1, init="homogeneous", group_size=None, shape=None, random_state=None):
        self.sweeps = sweeps
        self.init = init
        self.group_size = group_size
        self.shape = shape
        self.random_state = random_state

    def _feedback(self, X):
        if isinstance(X, Scenario):
            return X.feedback_channel(), X.geometry.shape, X.group_size
        if isinstance(X, FeedbackChannel):
            if self.shape is None:
                raise ValueError("shape is required when fitting on a bare FeedbackChannel")
            return X, tuple(self.shape), self.group_size
        raise TypeError(f"cannot fit on {type(X).__name__}; pass a Scenario or FeedbackChannel")

    def fit(self, X, y=None):
        fb, shape, group = self._feedback(X)
        if self.group_size is not None:
            group = self.group_size
        if self.init == "homogeneous":
            start = ReflectionConfig.homogeneous(shape, 0, group)
        elif self.init == "random":
            start = ReflectionConfig.random_binary(shape, np.random.default_rng(self.random_state), group)
        elif isinstance(self.init, ReflectionConfig):
            start = self.init
        else:
            raise ValueError(f"unknown init {self.init!r}")
        self.trace_ = greedy_beamform(start, fb, self.sweeps)
        self.config_ = self.trace_.final_config
        self.n_measurements_ = self.trace_.n_measurements
        return self

    def predict(self, X=None):
        """The fitted configuration as a column-major coefficient vector."""
        check_is_fitted(self, "config_")
        return self.config_.vector

    def score(self, X, y=None):
        """Received power of the fitted configuration in dB."""
        check_is_fitted(self, "config_")
        fb, _, _ = self._feedback(X)
        p = fb.true_power(self.config_)
        return 10 * math.log10(p) if p > 0 else -math.inf
