import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from risbeam.beamforming import optimal_continuous, quantize_1bit
from risbeam.estimators import GreedyBeamformer, SteeringTransformer
from risbeam.experiments import random_scenario
from risbeam.geometry import AngularPosition, RisGeometry
from risbeam.greedy import FeedbackChannel, greedy_beamform


def test_steering_transformer_matches_functions():
    geom = RisGeometry(3, 4, 0.25, 0.25, 1.0)
    X = np.array([[1.2, 0.3, 1.6, -0.4], [1.0, -0.9, 2.0, 0.1]])
    est = SteeringTransformer(geom, quantize=None).fit(X)
    out = est.transform(X)
    assert out.shape == (2, 12)
    ue, ap = AngularPosition(1.2, 0.3), AngularPosition(1.6, -0.4)
    np.testing.assert_allclose(out[0], optimal_continuous(geom, ue, ap).vector)
    q = SteeringTransformer(geom).fit_transform(X)
    np.testing.assert_array_equal(q[0], quantize_1bit(optimal_continuous(geom, ue, ap)).vector)


def test_steering_transformer_parameters_and_validation():
    geom = RisGeometry(4, 4, 0.25, 0.25, 1.0)
    est = SteeringTransformer(geom, quantize="optimal", group_size=2)
    assert est.get_params()["group_size"] == 2
    assert clone(est).get_params()["quantize"] == "optimal"
    with pytest.raises(NotFittedError):
        est.transform([[1, 0, 1, 0]])
    with pytest.raises(ValueError):
        SteeringTransformer(geom).fit([[1, 0, 1]])
    with pytest.raises(ValueError):
        SteeringTransformer(geom, quantize="nope").fit([[1, 0, 1, 0]])
    with pytest.raises(ValueError):
        SteeringTransformer(geom, quantize=None, group_size=2).fit([[1, 0, 1, 0]])
    grouped = est.fit([[1.0, 0.2, 1.5, 0.0]]).transform([[1.0, 0.2, 1.5, 0.0]])
    assert np.all(np.abs(grouped) == 1)


def test_greedy_estimator_on_scenario():
    sc = random_scenario(5, 4, 4)
    est = GreedyBeamformer(sweeps=2).fit(sc)
    ref = greedy_beamform(sc.homogeneous(), sc.feedback_channel(), 2)
    assert est.config_ == ref.final_config
    assert est.n_measurements_ == 1 + 2 * 8
    np.testing.assert_array_equal(est.predict(), ref.final_config.vector)
    assert est.score(sc) == pytest.approx(10 * math.log10(ref.final_true_power))


def test_greedy_estimator_on_bare_feedback_channel():
    sc = random_scenario(6, 3, 3)
    fb = FeedbackChannel(sc.measure)
    with pytest.raises(ValueError):
        GreedyBeamformer().fit(fb)
    est = GreedyBeamformer(shape=(3, 3), init="random", random_state=1, sweeps=3).fit(fb)
    assert est.trace_.sweep_count == 3
    with pytest.raises(TypeError):
        GreedyBeamformer().fit("scenario")
    with pytest.raises(NotFittedError):
        GreedyBeamformer().predict()
    assert set(GreedyBeamformer().get_params()) == {"sweeps", "init", "group_size", "shape", "random_state"}
