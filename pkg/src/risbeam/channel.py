"""Multipath AP-RIS / RIS-UE channels and the cascaded received signal."""

from dataclasses import dataclass, field

import numpy as np

from ._validation import (
    ScenarioError,
    check_complex_vector,
    check_nonnegative_float,
    check_positive_float,
    check_positive_int,
    check_random_state,
)
from .config import ReflectionConfig
from .geometry import AngularPosition, upa_response


@dataclass(frozen=True)
class PropagationPath:
    """One plane-wave term ``alpha * a(theta, phi) * b(tau)^T``."""

    complex_gain: complex
    direction: AngularPosition
    delay: float = 0.0

    def __post_init__(self):
        gain = complex(self.complex_gain)
        if not np.isfinite(gain):
            raise ScenarioError("path gain must be finite")
        object.__setattr__(self, "complex_gain", gain)
        object.__setattr__(self, "delay", check_nonnegative_float(self.delay, "delay"))


@dataclass(frozen=True)
class SubcarrierGrid:
    frequencies: tuple

    def __post_init__(self):
        freqs = tuple(float(f) for f in np.atleast_1d(self.frequencies))
        if not freqs:
            raise ScenarioError("a subcarrier grid needs at least one frequency")
        if not all(np.isfinite(freqs)) or any(f <= 0 for f in freqs):
            raise ScenarioError("subcarrier frequencies must be positive and finite")
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ScenarioError("subcarrier frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", freqs)

    @property
    def count_K(self):
        return len(self.frequencies)

    @property
    def center(self):
        return 0.5 * (self.frequencies[0] + self.frequencies[-1])

    @classmethod
    def centered(cls, center=5.8e9, bandwidth=20e6, count=64):
        """``count`` subcarriers spaced ``bandwidth / count`` around ``center``."""
        count = check_positive_int(count, "count")
        center = check_positive_float(center, "center")
        spacing = check_positive_float(bandwidth, "bandwidth") / count
        k = np.arange(count) - (count - 1) / 2
        return cls(tuple(center + k * spacing))


@dataclass(frozen=True)
class ChannelMatrix:
    """Per-subcarrier channel vectors stacked as an ``L x K`` matrix."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2:
            raise ScenarioError("channel matrix must be 2-D")
        if not np.all(np.isfinite(entries)):
            raise ScenarioError("channel matrix has non-finite entries")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n_elements(self):
        return self.entries.shape[0]

    @property
    def count_K(self):
        return self.entries.shape[1]

    def column(self, k):
        return self.entries[:, k]

    def singular_values(self):
        return np.linalg.svd(self.entries, compute_uv=False)

    def is_rank_one(self, rtol=1e-9):
        s = self.singular_values()
        return s.size < 2 or s[1] < rtol * s[0]

    def __add__(self, other):
        return ChannelMatrix(self.entries + other.entries)


def delay_response(grid, delay):
    """``exp(-j 2 pi f_k tau)`` for every subcarrier."""
    f = np.asarray(grid.frequencies)
    return np.exp(-2j * np.pi * f * float(delay))


def synthesize_channel(geom, paths, grid):
    paths = list(paths)
    if not paths:
        raise ScenarioError("at least one propagation path is required")
    entries = np.zeros((geom.n_elements, grid.count_K), dtype=complex)
    for p in paths:
        entries += p.complex_gain * np.outer(upa_response(geom, p.direction), delay_response(grid, p.delay))
    return ChannelMatrix(entries)


def _omega(config, length):
    vec = config.vector if isinstance(config, ReflectionConfig) else config
    return check_complex_vector(vec, "configuration", length)


def received_symbol(g_k, h_k, config, x_k=1.0, noise=0.0):
    """Received sample ``(g_k * h_k)^T omega x_k + noise`` at one subcarrier."""
    g_k = check_complex_vector(g_k, "g_k")
    h_k = check_complex_vector(h_k, "h_k", g_k.size)
    omega = _omega(config, g_k.size)
    return complex(np.dot(g_k * h_k, omega) * x_k + noise)


def end_to_end_gain(g_k, h_k, config):
    return abs(received_symbol(g_k, h_k, config)) ** 2


def cascaded_response(G, H, config):
    """Scalar end-to-end channel on every subcarrier, shape (K,)."""
    G = G.entries if isinstance(G, ChannelMatrix) else np.asarray(G)
    H = H.entries if isinstance(H, ChannelMatrix) else np.asarray(H)
    if G.shape != H.shape:
        raise ValueError(f"channel shapes differ: {G.shape} vs {H.shape}")
    omega = _omega(config, G.shape[0])
    return (G * H).T @ omega


def subcarrier_gains(G, H, config):
    return np.abs(cascaded_response(G, H, config)) ** 2


def wideband_power(G, H, config):
    """Received power averaged over the whole band."""
    return float(np.mean(subcarrier_gains(G, H, config)))


def complex_gaussian(rng, variance, size=None):
    """Circularly-symmetric CN(0, variance) samples."""
    rng = check_random_state(rng)
    variance = check_nonnegative_float(variance, "variance")
    scale = np.sqrt(variance / 2)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def received_signal(G, H, config, x, noise_variance=0.0, rng=None):
    """Received samples on all subcarriers for transmitted symbols ``x``."""
    y = cascaded_response(G, H, config) * np.asarray(x, dtype=complex)
    if noise_variance:
        y = y + complex_gaussian(rng, noise_variance, y.shape)
    return y


@dataclass(frozen=True)
class ReciprocityResult:
    equal: bool
    max_deviation: float
    forward: np.ndarray = field(repr=False)
    reverse: np.ndarray = field(repr=False)

    def __bool__(self):
        return self.equal


def reciprocity_check(geom, paths_ap, paths_ue, grid, config, element_model=None, tol=1e-12):
    """Compare AP->RIS->UE and UE->RIS->AP scalar channels under one configuration.

    The element coefficients are realized once (illuminated from the first
    AP path) and shared by both link directions. ``max_deviation`` is
    relative to the peak forward magnitude.
    """
    H = synthesize_channel(geom, paths_ap, grid).entries
    G = synthesize_channel(geom, paths_ue, grid).entries
    if element_model is not None:
        config = element_model.realize(config, paths_ap[0].direction)
    omega = _omega(config, geom.n_elements)
    # downlink: illuminate with H then radiate through G
    forward = (G * H).T @ omega
    # uplink: per subcarrier h_k^T diag(omega) g_k
    reverse = np.einsum("lk,l,lk->k", H, omega, G)
    scale = max(float(np.max(np.abs(forward))), np.finfo(float).tiny)
    dev = float(np.max(np.abs(forward - reverse))) / scale
    return ReciprocityResult(dev <= tol, dev, forward, reverse)
