"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line, visible with or without
``-s``. Run alone with ``pytest tests/test_acceptance.py``.
"""

import csv
import io
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from risbeam.channel import SubcarrierGrid, reciprocity_check, subcarrier_gains
from risbeam.cli import run
from risbeam.config import ReflectionConfig
from risbeam.element_model import ElementResponseModel
from risbeam.experiments import (
    brute_force_optimum,
    gain_vs_baseline,
    quantization_loss_mc,
    radiation_pattern,
    random_scenario,
    steering_codeword,
)
from risbeam.geometry import AngularPosition
from risbeam.greedy import greedy_beamform
from risbeam.scenario_file import load_scenario

GOLDEN = Path(__file__).parent / "golden" / "greedy_vs_oracle_3x3.json"


@pytest.fixture
def verdict(capsys):
    def report(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}")
        assert ok, detail
    return report


def test_criterion_1_ideal_array_gain(verdict):
    t0 = time.perf_counter()
    out, err = io.StringIO(), io.StringIO()
    code = run(["gain", "--scenario", "prototype", "--method", "optimal", "--baseline", "random", "--trials", "1000"],
               stdout=out, stderr=err)
    elapsed = time.perf_counter() - t0
    assert code == 0, err.getvalue()
    (row,) = list(csv.DictReader(io.StringIO(out.getvalue())))
    gain = float(row["gain_db"])
    sc = load_scenario("prototype")
    assert sc.n_elements == 1100 and len(sc.ap_paths) == len(sc.ue_paths) == 1
    ok = abs(gain - 30.4) <= 0.3 and elapsed < 60
    verdict(1, "ideal array gain", ok, f"optimal vs random {gain:.2f} dB (target 30.4 +/- 0.3), {elapsed:.1f} s")


@pytest.mark.parametrize("elements", [400, 1100])
def test_criterion_2_quantization_loss(verdict, elements):
    t0 = time.perf_counter()
    loss = quantization_loss_mc(elements, draws=100_000, rng=np.random.default_rng(2))
    elapsed = time.perf_counter() - t0
    ok = -4.2 <= loss <= -3.6 and elapsed < 60
    verdict(2, f"1-bit loss, L={elements}", ok, f"{loss:.3f} dB (window [-4.2, -3.6]), {elapsed:.1f} s")


def test_criterion_3_greedy_budget_and_monotonicity(verdict):
    bad = []
    for seed in range(100):
        rng = np.random.default_rng(10_000 + seed)
        rows, cols = (int(v) for v in rng.integers(2, 7, size=2))
        sc = random_scenario(seed, rows, cols, n_ap_paths=int(rng.integers(1, 3)),
                             n_ue_paths=int(rng.integers(1, 3)), max_delay=5e-8)
        sweeps = int(rng.integers(1, 4))
        fb = sc.feedback_channel()
        trace = greedy_beamform(sc.homogeneous(), fb, sweeps)
        per_sweep = [sum(1 for s in trace.iterations if s.sweep == k) for k in range(1, sweeps + 1)]
        accepted = trace.accepted_powers
        if (per_sweep != [rows + cols] * sweeps or fb.n_measurements != 1 + sweeps * (rows + cols)
                or any(b < a for a, b in zip(accepted, accepted[1:]))):
            bad.append(seed)
    verdict(3, "greedy budget and monotonicity", not bad,
            f"{100 - len(bad)}/100 scenarios used M+N measurements per sweep with non-decreasing accepted power")


def test_criterion_4_greedy_vs_oracle(verdict):
    golden = json.loads(GOLDEN.read_text())
    t0 = time.perf_counter()
    gaps, below, mismatched = [], [], []
    for rec in golden["records"]:
        sc = random_scenario(rec["seed"])
        trace = greedy_beamform(sc.homogeneous(), sc.feedback_channel(), golden["sweeps"])
        p = trace.final_true_power
        homog = sc.measure(sc.homogeneous())
        gap = 10 * math.log10(rec["optimum_power"] / p)
        gaps.append(gap)
        if p < homog:
            below.append(rec["seed"])
        exhaustive = brute_force_optimum(sc)[1]
        if (not math.isclose(p, rec["greedy_power"], rel_tol=1e-9) or abs(gap - rec["gap_db"]) > 1e-9
                or not math.isclose(exhaustive, rec["optimum_power"], rel_tol=1e-9)):
            mismatched.append(rec["seed"])
    elapsed = time.perf_counter() - t0
    ok = (len(gaps) == 100 and not below and not mismatched and max(gaps) <= golden["gap_threshold_db"]
          and elapsed < 60)
    verdict(4, "greedy vs exhaustive oracle", ok,
            f"max gap {max(gaps):.3f} dB (threshold {golden['gap_threshold_db']}), mean {np.mean(gaps):.3f} dB, "
            f"{len(below)} below homogeneous, {len(mismatched)} differ from golden, {elapsed:.1f} s")


def test_criterion_5_pattern_steering(verdict):
    sc = load_scenario("chamber")
    assert sc.geometry.shape == (20, 55)
    t0 = time.perf_counter()
    target = AngularPosition.from_degrees(90, 30)
    cw = steering_codeword(sc.geometry, target, sc.ap_direction, sc.group_size)
    res = radiation_pattern(sc.geometry, sc.realize(cw), sc.ap_direction, 0, 90, 0.1)
    elapsed = time.perf_counter() - t0
    ok = (abs(res.main_lobe_angle - 30) <= 1 and 4 <= res.half_power_beamwidth <= 7
          and res.largest_sidelobe_db < -7 and elapsed < 30)
    verdict(5, "pattern steering", ok,
            f"main lobe {res.main_lobe_angle:.1f} deg, HPBW {res.half_power_beamwidth:.2f} deg, "
            f"worst sidelobe {res.largest_sidelobe_db:.2f} dB, {elapsed:.1f} s")


def test_criterion_6_reciprocity(verdict):
    worst = 0.0
    for seed in range(100):
        rng = np.random.default_rng(20_000 + seed)
        ripple = float(rng.uniform(0, 6.5))
        model = ElementResponseModel("angle_dependent", amplitude_ripple_db=ripple) if seed % 4 else ElementResponseModel()
        sc = random_scenario(seed, 4, 5, n_ap_paths=2, n_ue_paths=3, max_delay=1e-7, model=model,
                             grid=SubcarrierGrid.centered(count=16))
        cfg = ReflectionConfig.random_binary(sc.geometry.shape, rng)
        res = reciprocity_check(sc.geometry, sc.ap_paths, sc.ue_paths, sc.grid, cfg, sc.element_model)
        worst = max(worst, res.max_deviation)
    verdict(6, "reciprocity", worst <= 1e-12, f"worst relative deviation {worst:.2e} over 100 scenarios")


def test_criterion_7_frequency_flatness(verdict):
    grid = SubcarrierGrid.centered(count=64)
    worst = 0.0
    for seed in range(50):
        sc = random_scenario(seed, 4, 6, max_delay=2e-7, grid=grid)
        H, G = sc.channels()
        cfg = ReflectionConfig.random_binary(sc.geometry.shape, np.random.default_rng(seed))
        gains = subcarrier_gains(G, H, cfg)
        worst = max(worst, float((gains.max() - gains.min()) / gains.mean()))
    verdict(7, "frequency flatness", worst < 1e-10, f"worst relative spread {worst:.2e} across K=64")


def test_criterion_8_field_trial_bracket(verdict):
    sc = load_scenario("prototype")
    gain = gain_vs_baseline(sc, "greedy", "random", trials=1000, sweeps=3, rng=np.random.default_rng(sc.seed))
    verdict(8, "field-trial bracket", 22 <= gain <= 30, f"greedy vs random {gain:.2f} dB (window [22, 30])")
