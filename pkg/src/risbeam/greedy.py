"""Greedy row/column-flip beamforming driven by received-power feedback."""

from dataclasses import dataclass, field
import math

import numpy as np

from ._validation import check_nonnegative_float, check_positive_int


class FeedbackError(RuntimeError):
    """The measurement contract returned an unusable power report."""


class FeedbackChannel:
    """Delivers received-power reports for candidate configurations.

    Parameters
    ----------
    measure : callable
        ``measure(config) -> float``, the true (linear) received power.
    quantization_step_db : float
        Reported powers are rounded to this step in dB; 0 disables it.
    noise_std_db : float
        Standard deviation of log-normal report noise in dB.
    rng_seed : int
        Seed of the report-noise generator.
    """

    def __init__(self, measure, quantization_step_db=0.0, noise_std_db=0.0, rng_seed=0):
        if not callable(measure):
            raise TypeError("measure must be callable")
        self.measure = measure
        self.quantization_step_db = check_nonnegative_float(quantization_step_db, "quantization_step_db")
        self.noise_std_db = check_nonnegative_float(noise_std_db, "noise_std_db")
        self.rng_seed = int(rng_seed)
        self.reset()

    def reset(self):
        self._rng = np.random.default_rng(self.rng_seed)
        self.n_measurements = 0

    @property
    def is_exact(self):
        return self.quantization_step_db == 0 and self.noise_std_db == 0

    def true_power(self, config):
        p = self.measure(config)
        try:
            p = float(p)
        except (TypeError, ValueError):
            raise FeedbackError(f"measurement returned a non-numeric value {p!r}") from None
        if not math.isfinite(p) or p < 0:
            raise FeedbackError(f"measurement returned invalid power {p!r}")
        return p

    def report(self, config):
        """Measure ``config`` and return ``(reported_power, true_power)``."""
        p = self.true_power(config)
        self.n_measurements += 1
        if self.is_exact or p == 0:
            return p, p
        db = 10 * math.log10(p)
        if self.noise_std_db:
            db += self.noise_std_db * self._rng.standard_normal()
        if self.quantization_step_db:
            db = self.quantization_step_db * round(db / self.quantization_step_db)
        return 10 ** (db / 10), p

    def __call__(self, config):
        return self.report(config)[0]


@dataclass(frozen=True)
class GreedyStep:
    step: int
    sweep: int
    flip_type: str  # "init", "column" or "row"
    flip_index: int
    candidate_power: float
    accepted: bool
    true_power: float
    running_best: float


@dataclass
class GreedyTrace:
    iterations: list
    final_config: object
    sweep_count: int
    measurements_per_sweep: int = 0
    final_true_power: float = field(default=float("nan"))

    @property
    def accepted_powers(self):
        return [s.candidate_power for s in self.iterations if s.accepted]

    @property
    def initial_power(self):
        return self.iterations[0].candidate_power

    @property
    def final_power(self):
        return self.iterations[-1].running_best

    @property
    def n_measurements(self):
        return len(self.iterations)


def greedy_beamform(initial, fb, sweeps=1):
    """Refine a binary configuration by flipping whole columns, then rows.

    One initial report is taken, then every sweep tries each column in turn
    followed by each (control) row, keeping a flip only when the reported
    power strictly increases. A grouped surface flips whole group rows.
    """
    sweeps = check_positive_int(sweeps, "sweeps")
    if not initial.is_binary:
        raise ValueError("greedy beamforming starts from a binary configuration")
    n_rows, n_cols = initial.control_shape
    config = initial
    power, truth = fb.report(config)
    steps = [GreedyStep(0, 0, "init", -1, power, True, truth, power)]
    t = 0
    for sweep in range(1, sweeps + 1):
        for kind, count, flip in (("column", n_cols, "flip_column"), ("row", n_rows, "flip_row")):
            for i in range(count):
                t += 1
                candidate = getattr(config, flip)(i)
                p, p_true = fb.report(candidate)
                accepted = p > power
                if accepted:
                    config, power, truth = candidate, p, p_true
                steps.append(GreedyStep(t, sweep, kind, i, p, accepted, p_true, power))
    return GreedyTrace(steps, config, sweeps, n_rows + n_cols, truth)


def track_continuously(fb, schedule, sweeps_per_epoch=1, initial=None):
    """Keep re-running greedy sweeps while the scenario drifts.

    ``schedule`` yields one :class:`FeedbackChannel` (or bare measurement
    callable) per epoch. Each epoch warm-starts from the previous final
    configuration; the first starts from ``initial``. ``fb`` supplies the
    report quantization/noise settings applied to bare callables.
    """
    if initial is None:
        raise ValueError("an initial configuration is required")
    traces = []
    config = initial
    for epoch, contract in enumerate(schedule):
        if not isinstance(contract, FeedbackChannel):
            contract = FeedbackChannel(
                contract, fb.quantization_step_db, fb.noise_std_db, fb.rng_seed + epoch
            )
        trace = greedy_beamform(config, contract, sweeps_per_epoch)
        traces.append(trace)
        config = trace.final_config
    return traces


def power_series(traces):
    """``(power at epoch start, power after the epoch's sweeps)`` per epoch."""
    return [(t.initial_power, t.final_power) for t in traces]
