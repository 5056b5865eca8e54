"""Scenarios, pattern sweeps, Monte Carlo budgets and exhaustive oracles."""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from ._validation import ScenarioError, check_positive_int, check_random_state
from .beamforming import apply_grouping, optimal_continuous, quantize_1bit
from .channel import PropagationPath, SubcarrierGrid, synthesize_channel
from .config import ReflectionConfig
from .element_model import ElementResponseModel
from .geometry import SPEED_OF_LIGHT, AngularPosition, RisGeometry
from .greedy import FeedbackChannel, greedy_beamform

BRUTE_FORCE_LIMIT = 16
METHODS = ("greedy", "codeword", "optimal", "homogeneous")
BASELINES = ("homogeneous", "random")


@dataclass(frozen=True)
class FeedbackSettings:
    quantization_step_db: float = 0.0
    noise_std_db: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class PatternSettings:
    """Receive-azimuth sweep, degrees. ``target`` is the steering goal."""

    target_azimuth_deg: float = 30.0
    target_zenith_deg: float = 90.0
    start_deg: float = 0.0
    stop_deg: float = 90.0
    step_deg: float = 0.1


@dataclass
class Scenario:
    geometry: RisGeometry
    ap_paths: list
    ue_paths: list
    grid: SubcarrierGrid = field(default_factory=SubcarrierGrid.centered)
    element_model: ElementResponseModel = field(default_factory=ElementResponseModel)
    feedback: FeedbackSettings = field(default_factory=FeedbackSettings)
    seed: int = 0
    group_size: int = None
    pattern: PatternSettings = field(default_factory=PatternSettings)
    name: str = ""

    def __post_init__(self):
        self.ap_paths = list(self.ap_paths)
        self.ue_paths = list(self.ue_paths)
        if not self.ap_paths or not self.ue_paths:
            raise ScenarioError("a scenario needs at least one AP path and one UE path")
        if self.group_size is not None:
            self.group_size = check_positive_int(self.group_size, "group_size")
            if self.geometry.rows_M % self.group_size:
                raise ScenarioError(
                    f"group size {self.group_size} does not divide {self.geometry.rows_M} rows"
                )
        self._H = None
        self._G = None

    @property
    def n_elements(self):
        return self.geometry.n_elements

    @property
    def ap_direction(self):
        return self.ap_paths[0].direction

    @property
    def ue_direction(self):
        return self.ue_paths[0].direction

    def channels(self):
        """``(H, G)``: AP-RIS and RIS-UE channel matrices."""
        if self._H is None:
            self._H = synthesize_channel(self.geometry, self.ap_paths, self.grid)
            self._G = synthesize_channel(self.geometry, self.ue_paths, self.grid)
        return self._H, self._G

    def cascade(self):
        """``G * H`` elementwise, shape (L, K)."""
        H, G = self.channels()
        return G.entries * H.entries

    def realize(self, config):
        if config.is_binary:
            return self.element_model.realize(config, self.ap_direction)
        return config

    def measure(self, config):
        """Wideband-average received power of ``config``."""
        y = self.cascade().T @ self.realize(config).vector
        return float(np.mean(np.abs(y) ** 2))

    def feedback_channel(self, seed=None):
        fb = self.feedback
        return FeedbackChannel(
            self.measure, fb.quantization_step_db, fb.noise_std_db, fb.seed if seed is None else seed
        )

    def homogeneous(self, state=0):
        return ReflectionConfig.homogeneous(self.geometry.shape, state, self.group_size)

    def with_seed(self, seed):
        return replace(self, seed=int(seed))


# -- radiation patterns -------------------------------------------------------


@dataclass(frozen=True)
class PatternResult:
    angles_deg: np.ndarray = field(repr=False)
    gain_db: np.ndarray = field(repr=False)
    main_lobe_angle: float = 0.0
    half_power_beamwidth: float = 0.0
    largest_sidelobe_left_db: float = -math.inf
    largest_sidelobe_right_db: float = -math.inf

    @property
    def samples(self):
        return list(zip(self.angles_deg.tolist(), self.gain_db.tolist()))

    @property
    def largest_sidelobe_db(self):
        return max(self.largest_sidelobe_left_db, self.largest_sidelobe_right_db)


def _crossing(a0, a1, g0, g1, level):
    if g1 == g0:
        return a1
    return a0 + (level - g0) * (a1 - a0) / (g1 - g0)


def pattern_metrics(angles, gain_db):
    """Main lobe, -3 dB width and per-side largest sidelobes of a sampled cut."""
    i = int(np.argmax(gain_db))
    n = gain_db.size
    # -3 dB points, linearly interpolated
    lo = i
    while lo > 0 and gain_db[lo - 1] >= -3.0:
        lo -= 1
    hi = i
    while hi < n - 1 and gain_db[hi + 1] >= -3.0:
        hi += 1
    left = angles[0] if lo == 0 else _crossing(angles[lo - 1], angles[lo], gain_db[lo - 1], gain_db[lo], -3.0)
    right = angles[-1] if hi == n - 1 else _crossing(angles[hi], angles[hi + 1], gain_db[hi], gain_db[hi + 1], -3.0)
    # main lobe extends to the first minimum on each side
    a = i
    while a > 0 and gain_db[a - 1] <= gain_db[a]:
        a -= 1
    b = i
    while b < n - 1 and gain_db[b + 1] <= gain_db[b]:
        b += 1
    left_side = gain_db[:a]
    right_side = gain_db[b + 1:]
    return (
        float(angles[i]),
        float(right - left),
        float(left_side.max()) if left_side.size else -math.inf,
        float(right_side.max()) if right_side.size else -math.inf,
    )


def pattern_gains(geom, config, incident, azimuths_deg, zenith=math.pi / 2):
    """Unnormalized ``|(a(zenith, psi) * a(incident))^T w|^2`` for every azimuth."""
    k = 2 * np.pi / geom.wavelength
    psi = np.radians(np.asarray(azimuths_deg, dtype=float))
    u_y = math.sin(zenith) * np.sin(psi) + incident.y_cosine
    u_z = math.cos(zenith) + incident.z_cosine
    a_z = np.exp(-1j * k * geom.spacing_z * np.arange(geom.rows_M) * u_z)
    a_y = np.exp(-1j * k * geom.spacing_y * np.outer(u_y, np.arange(geom.cols_N)))
    # sum_{m,n} a_z[m] a_y[psi, n] W[m, n]
    col_sums = a_z @ config.coefficients
    return np.abs(a_y @ col_sums) ** 2


def radiation_pattern(geom, config, incident, start_deg=0.0, stop_deg=90.0, step_deg=0.1, zenith=math.pi / 2):
    """Normalized receive-azimuth cut of the reflected beam."""
    step = float(step_deg)
    if not step > 0:
        raise ValueError(f"sweep step must be positive, got {step_deg!r}")
    if stop_deg < start_deg:
        raise ValueError("sweep stop must not precede start")
    count = int(math.floor((stop_deg - start_deg) / step + 1e-9)) + 1
    angles = start_deg + step * np.arange(count)
    p = pattern_gains(geom, config, incident, angles, zenith)
    peak = p.max()
    if peak <= 0:
        raise ValueError("configuration radiates no power over the sweep")
    with np.errstate(divide="ignore"):
        gain_db = 10 * np.log10(p / peak)
    gain_db[np.argmax(p)] = 0.0
    return PatternResult(angles, gain_db, *pattern_metrics(angles, gain_db))


def steering_codeword(geom, target, incident, group_size=None):
    """1-bit configuration steering a beam lit from ``incident`` towards ``target``."""
    ideal = optimal_continuous(geom, target, incident)
    if group_size:
        return apply_grouping(ideal, group_size)
    return quantize_1bit(ideal)


# -- budgets and Monte Carlo --------------------------------------------------


@dataclass(frozen=True)
class GainBudget:
    elements: int
    array_gain_db: float
    quantization_loss_db: float

    @property
    def predicted_gain_db(self):
        return self.array_gain_db + self.quantization_loss_db


def quantization_loss_mc(n_elements, draws=100_000, rng=None, chunk=2_000_000):
    """Mean ``|w_o^H q(w_o)|^2 / L^2`` in dB over uniformly random phases.

    At least ``draws`` element phases are drawn in total.
    """
    L = check_positive_int(n_elements, "n_elements")
    rng = check_random_state(rng)
    trials = max(1, math.ceil(draws / L))
    per_chunk = max(1, chunk // L)
    total, done = 0.0, 0
    while done < trials:
        t = min(per_chunk, trials - done)
        phi = rng.uniform(-np.pi, np.pi, size=(t, L))
        quant = np.where(phi < 0, 1j, -1j)
        ip = np.sum(np.exp(-1j * phi) * quant, axis=1)
        total += float(np.sum(np.abs(ip) ** 2)) / L**2
        done += t
    return 10 * math.log10(total / trials)


def ideal_gain_budget(n_elements, draws=100_000, rng=None):
    L = check_positive_int(n_elements, "n_elements")
    return GainBudget(L, 10 * math.log10(L), quantization_loss_mc(L, draws, rng))


# -- oracles and comparisons --------------------------------------------------


def _control_to_elements(bits, shape, group_size):
    g = group_size or 1
    rows, cols = shape
    grid = bits.reshape(bits.shape[:-1] + (rows // g, cols), order="C")
    return np.repeat(grid, g, axis=-2)


def brute_force_powers(scenario):
    """Power of every binary control configuration, in enumeration order.

    Control configuration ``i`` sets control ``c`` (row-major over the
    control grid) to bit ``c`` of ``i``.
    """
    rows, cols = scenario.geometry.shape
    g = scenario.group_size or 1
    n_ctrl = (rows // g) * cols
    if n_ctrl > BRUTE_FORCE_LIMIT:
        raise ScenarioError(f"{n_ctrl} controls is too many to enumerate (limit {BRUTE_FORCE_LIMIT})")
    idx = np.arange(2**n_ctrl)
    bits = ((idx[:, None] >> np.arange(n_ctrl)) & 1).astype(np.int8)
    states = _control_to_elements(bits, (rows, cols), scenario.group_size)
    coeffs, _ = scenario.element_model.state_coefficients(scenario.ap_direction)
    omega = coeffs[states].transpose(0, 2, 1).reshape(len(idx), -1)  # column-major per config
    y = omega @ scenario.cascade()
    return np.mean(np.abs(y) ** 2, axis=1), states


def brute_force_optimum(scenario):
    """Exhaustive best binary configuration and its power."""
    powers, states = brute_force_powers(scenario)
    i = int(np.argmax(powers))
    return ReflectionConfig.from_states(states[i], scenario.group_size), float(powers[i])


def random_average_power(scenario, trials=1000, rng=None):
    """Mean power over random per-element binary configurations.

    This stands in for a passive plate and is deliberately ungrouped,
    whatever the scenario's control grouping.
    """
    trials = check_positive_int(trials, "trials")
    rng = check_random_state(scenario.seed if rng is None else rng)
    rows, cols = scenario.geometry.shape
    coeffs, _ = scenario.element_model.state_coefficients(scenario.ap_direction)
    C = scenario.cascade()
    total = 0.0
    for start in range(0, trials, 256):
        t = min(256, trials - start)
        states = rng.integers(0, 2, size=(t, rows * cols))
        y = coeffs[states] @ C
        total += float(np.sum(np.mean(np.abs(y) ** 2, axis=1)))
    return total / trials


def method_power(scenario, method, sweeps=3):
    if method == "greedy":
        trace = greedy_beamform(scenario.homogeneous(), scenario.feedback_channel(), sweeps)
        return trace.final_true_power
    if method == "codeword":
        cw = steering_codeword(scenario.geometry, scenario.ue_direction, scenario.ap_direction, scenario.group_size)
        return scenario.measure(cw)
    if method == "homogeneous":
        return scenario.measure(scenario.homogeneous())
    if method == "optimal":
        return scenario.measure(optimal_continuous(scenario.geometry, scenario.ue_direction, scenario.ap_direction))
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def baseline_power(scenario, baseline, trials=1000, rng=None):
    if baseline == "homogeneous":
        return scenario.measure(scenario.homogeneous())
    if baseline == "random":
        return random_average_power(scenario, trials, rng)
    raise ValueError(f"unknown baseline {baseline!r}; expected one of {BASELINES}")


def gain_vs_baseline(scenario, method, baseline, trials=1000, sweeps=3, rng=None):
    """Power of ``method`` over ``baseline`` in dB."""
    num = method_power(scenario, method, sweeps)
    den = baseline_power(scenario, baseline, trials, rng)
    return 10 * math.log10(num / den)


# -- random scenario factories ------------------------------------------------


def random_direction(rng, zenith_range=(math.pi / 6, 5 * math.pi / 6), azimuth_range=(-math.pi / 2, math.pi / 2)):
    return AngularPosition(rng.uniform(*zenith_range), rng.uniform(*azimuth_range))


def random_path(rng, max_delay=0.0, **direction_kw):
    gain = np.exp(1j * rng.uniform(-np.pi, np.pi)) * rng.uniform(0.5, 1.5)
    delay = rng.uniform(0, max_delay) if max_delay else 0.0
    return PropagationPath(gain, random_direction(rng, **direction_kw), delay)


def random_scenario(seed, rows=3, cols=3, n_ap_paths=1, n_ue_paths=1, max_delay=0.0, model=None, grid=None, **direction_kw):
    """Seeded scenario with random directions and path gains, half-wave spacing."""
    rng = np.random.default_rng(seed)
    geom = RisGeometry.half_wavelength(rows, cols, SPEED_OF_LIGHT / 5.8e9)
    ap = [random_path(rng, max_delay, **direction_kw) for _ in range(n_ap_paths)]
    ue = [random_path(rng, max_delay, **direction_kw) for _ in range(n_ue_paths)]
    return Scenario(
        geom,
        ap,
        ue,
        grid=grid or SubcarrierGrid.centered(count=8),
        element_model=model or ElementResponseModel(),
        seed=int(seed),
        name=f"random-{seed}",
    )


def drifting_ue(scenario, azimuths_deg, zenith_deg=None):
    """One measurement contract per UE azimuth, other paths unchanged."""
    base = scenario.ue_paths[0]
    zen = base.direction.zenith_theta if zenith_deg is None else math.radians(zenith_deg)
    for az in azimuths_deg:
        path = replace(base, direction=AngularPosition(zen, math.radians(az)))
        yield replace(scenario, ue_paths=[path] + scenario.ue_paths[1:]).measure
