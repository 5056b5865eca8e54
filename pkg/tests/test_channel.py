import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import scalar_upa
from risbeam import ScenarioError
from risbeam.channel import (
    ChannelMatrix,
    PropagationPath,
    SubcarrierGrid,
    cascaded_response,
    complex_gaussian,
    delay_response,
    end_to_end_gain,
    received_signal,
    received_symbol,
    reciprocity_check,
    subcarrier_gains,
    synthesize_channel,
)
from risbeam.config import ReflectionConfig
from risbeam.element_model import ElementResponseModel
from risbeam.experiments import random_scenario
from risbeam.geometry import AngularPosition, RisGeometry


def test_default_grid_matches_operating_numbers():
    grid = SubcarrierGrid.centered()
    f = np.asarray(grid.frequencies)
    assert grid.count_K == 64
    np.testing.assert_allclose(np.diff(f), 312.5e3)
    assert grid.center == pytest.approx(5.8e9)


@pytest.mark.parametrize("freqs", [(), (2.0, 1.0), (1.0, 1.0), (-1.0,)])
def test_bad_grids_rejected(freqs):
    with pytest.raises(ScenarioError):
        SubcarrierGrid(freqs)


def test_zero_delay_is_flat():
    assert np.array_equal(delay_response(SubcarrierGrid.centered(), 0.0), np.ones(64))


def test_half_period_delay():
    grid = SubcarrierGrid((5.8e9,))
    assert delay_response(grid, 1 / (2 * 5.8e9))[0] == pytest.approx(-1, abs=1e-12)


def test_delay_response_matches_scalar_loop():
    grid = SubcarrierGrid.centered(5.8e9, 20e6, 64)
    tau = 50e-9
    expected = [cmath.exp(-2j * math.pi * f * tau) for f in grid.frequencies]
    got = delay_response(grid, tau)
    np.testing.assert_allclose(got, expected, atol=1e-9)
    np.testing.assert_allclose(np.abs(got), 1, atol=1e-12)


def test_path_validation():
    d = AngularPosition(1.0, 0.0)
    with pytest.raises(ScenarioError):
        PropagationPath(1.0, d, -1e-9)
    with pytest.raises(ScenarioError):
        PropagationPath(complex("nan"), d)


def test_empty_path_list_is_degenerate():
    with pytest.raises(ScenarioError):
        synthesize_channel(RisGeometry(2, 2, 0.5, 0.5, 1.0), [], SubcarrierGrid.centered())


def test_single_unit_path_without_delay_is_frequency_flat():
    g = RisGeometry(3, 2, 0.3, 0.4, 1.0)
    H = synthesize_channel(g, [PropagationPath(1.0, AngularPosition(1.2, 0.4))], SubcarrierGrid.centered(count=5))
    for k in range(5):
        np.testing.assert_array_equal(H.column(k), H.column(0))


def test_single_path_channel_is_rank_one():
    g = RisGeometry(4, 5, 0.25, 0.25, 1.0)
    H = synthesize_channel(g, [PropagationPath(0.3 - 0.8j, AngularPosition(1.0, -0.6), 40e-9)], SubcarrierGrid.centered(count=16))
    assert H.is_rank_one()
    s = H.singular_values()
    assert s[1] < 1e-9 * s[0]


def test_two_paths_match_brute_force_sum():
    g = RisGeometry(2, 3, 0.3, 0.2, 1.0)
    grid = SubcarrierGrid.centered(5.8e9, 20e6, 8)
    paths = [PropagationPath(0.7 + 0.2j, AngularPosition(1.1, 0.3), 10e-9),
             PropagationPath(-0.4j, AngularPosition(2.0, -1.0), 85e-9)]
    H = synthesize_channel(g, paths, grid).entries
    expected = np.zeros((6, 8), dtype=complex)
    for p in paths:
        a = scalar_upa(g, p.direction.zenith_theta, p.direction.azimuth_phi)
        for i in range(6):
            for k, f in enumerate(grid.frequencies):
                expected[i, k] += p.complex_gain * a[i] * cmath.exp(-2j * math.pi * f * p.delay)
    assert not H.flags.writeable
    np.testing.assert_allclose(H, expected, atol=1e-12)
    assert not synthesize_channel(g, paths, grid).is_rank_one()


def test_received_symbol_trivial_cases():
    cfg = ReflectionConfig([[1j]])
    assert received_symbol([1], [1], cfg, 1.0, 0.0) == 1j
    assert received_symbol([1], [1], cfg, 0.0, 0.0) == 0


def test_received_symbol_matches_scalar_accumulation(rng):
    g = rng.normal(size=4) + 1j * rng.normal(size=4)
    h = rng.normal(size=4) + 1j * rng.normal(size=4)
    w = np.exp(1j * rng.uniform(-np.pi, np.pi, size=4))
    x, n = 0.3 - 1.1j, 0.05 + 0.02j
    acc = 0j
    for i in range(4):
        acc += g[i] * h[i] * w[i]
    cfg = ReflectionConfig.from_vector(w, (2, 2))
    assert received_symbol(g, h, cfg, x, n) == pytest.approx(acc * x + n, abs=1e-13)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        received_symbol([1, 1], [1], ReflectionConfig([[1]]))
    with pytest.raises(ValueError):
        end_to_end_gain([1, 1], [1, 1], ReflectionConfig([[1, 1, 1]]))


def test_gain_trivial_cases():
    assert end_to_end_gain([1], [1], ReflectionConfig([[np.exp(0.7j)]])) == pytest.approx(1.0)
    L = 12
    assert end_to_end_gain(np.ones(L), np.ones(L), ReflectionConfig(np.ones((3, 4)))) == pytest.approx(L**2)


def test_single_path_gain_is_independent_of_subcarrier(rng):
    g = RisGeometry(4, 4, 0.25, 0.25, 1.0)
    grid = SubcarrierGrid.centered(count=16)
    G = synthesize_channel(g, [PropagationPath(0.9j, AngularPosition(1.3, 0.5), 70e-9)], grid)
    H = synthesize_channel(g, [PropagationPath(1.2, AngularPosition(1.9, -0.2), 15e-9)], grid)
    cfg = ReflectionConfig.from_phases(rng.uniform(-np.pi, np.pi, size=(4, 4)))
    g0 = end_to_end_gain(G.column(0), H.column(0), cfg)
    g15 = end_to_end_gain(G.column(15), H.column(15), cfg)
    assert g15 == pytest.approx(g0, rel=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_linearity_and_scaling(seed):
    sc = random_scenario(seed, 2, 3, n_ap_paths=3, n_ue_paths=2, max_delay=100e-9)
    g, grid = sc.geometry, sc.grid
    whole = synthesize_channel(g, sc.ap_paths, grid).entries
    parts = sum(synthesize_channel(g, [p], grid).entries for p in sc.ap_paths)
    np.testing.assert_allclose(whole, parts, atol=1e-12)

    rng = np.random.default_rng(seed)
    cfg = ReflectionConfig.random_binary(g.shape, rng)
    c = complex(*rng.normal(size=2))
    G = synthesize_channel(g, sc.ue_paths[:1], grid)
    H = synthesize_channel(g, sc.ap_paths[:1], grid)
    scaled = synthesize_channel(g, [type(sc.ue_paths[0])(c * sc.ue_paths[0].complex_gain, sc.ue_paths[0].direction, sc.ue_paths[0].delay)], grid)
    np.testing.assert_allclose(subcarrier_gains(scaled, H, cfg), abs(c) ** 2 * subcarrier_gains(G, H, cfg), rtol=1e-10)


def test_channel_matrix_validation():
    with pytest.raises(ScenarioError):
        ChannelMatrix(np.ones(3))
    with pytest.raises(ScenarioError):
        ChannelMatrix(np.array([[np.inf]]))
    m = ChannelMatrix(np.ones((2, 3)))
    assert (m + m).entries.sum() == 12


def test_noise_statistics_and_seeding():
    a = complex_gaussian(7, 2.0, 200_000)
    b = complex_gaussian(7, 2.0, 200_000)
    assert np.array_equal(a, b)
    assert np.mean(np.abs(a) ** 2) == pytest.approx(2.0, rel=0.02)
    assert abs(np.mean(a)) < 0.02
    assert np.var(a.real) == pytest.approx(np.var(a.imag), rel=0.03)


def test_received_signal_default_is_noiseless():
    sc = random_scenario(3)
    H, G = sc.channels()
    cfg = sc.homogeneous()
    np.testing.assert_array_equal(received_signal(G, H, cfg, 1.0), cascaded_response(G, H, cfg))
    noisy = received_signal(G, H, cfg, 1.0, noise_variance=1.0, rng=1)
    assert not np.allclose(noisy, cascaded_response(G, H, cfg))


def test_reciprocity_single_path_has_zero_deviation():
    sc = random_scenario(11)
    res = reciprocity_check(sc.geometry, sc.ap_paths, sc.ue_paths, sc.grid, sc.homogeneous())
    assert res.equal and res.max_deviation <= 1e-12
    np.testing.assert_allclose(res.forward, res.reverse, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_reciprocity_multipath_with_angle_dependent_elements(seed):
    model = ElementResponseModel("angle_dependent", amplitude_ripple_db=6.5)
    sc = random_scenario(seed, 4, 5, n_ap_paths=3, n_ue_paths=4, max_delay=200e-9, model=model)
    cfg = ReflectionConfig.random_binary(sc.geometry.shape, np.random.default_rng(seed))
    res = reciprocity_check(sc.geometry, sc.ap_paths, sc.ue_paths, sc.grid, cfg, model)
    assert bool(res)
    assert res.max_deviation <= 1e-12
