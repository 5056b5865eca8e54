"""Continuous optimum, DFT codebook, 1-bit quantization and grouping."""

from dataclasses import dataclass, field

import numpy as np

from ._validation import ScenarioError, check_positive_int
from .config import ReflectionConfig
from .geometry import upa_response


def _grid(vector, geom):
    return vector.reshape(geom.shape, order="F")


def optimal_continuous(geom, ue_dir, ap_dir):
    """Unit-modulus configuration that co-phases every element at the UE.

    Returns ``conj(a(ue) * a(ap))`` laid out on the M x N grid.
    """
    vec = np.conj(upa_response(geom, ue_dir) * upa_response(geom, ap_dir))
    return ReflectionConfig(_grid(vec, geom))


def desired_factored(geom, ue_dir, ap_dir):
    """Same optimum built from the combined-angle row and column factors."""
    k = 2 * np.pi / geom.wavelength
    u_y = ap_dir.y_cosine + ue_dir.y_cosine
    u_z = ap_dir.z_cosine + ue_dir.z_cosine
    a_y = np.exp(-1j * k * geom.spacing_y * np.arange(geom.cols_N) * u_y)
    a_z = np.exp(-1j * k * geom.spacing_z * np.arange(geom.rows_M) * u_z)
    # grid[m, n] = a_z[m] a_y[n], i.e. kron(a_y, a_z) read column-major
    return ReflectionConfig(np.conj(np.outer(a_z, a_y)))


def dft_matrix(size):
    size = check_positive_int(size, "size")
    idx = np.arange(size)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / size)


@dataclass(frozen=True)
class Codeword:
    """Column ``(p, q)`` of the 2-D DFT codebook.

    ``coefficients`` uses this package's column-major element order, so
    ``grid[m, n] = F(M)[m, p] * F(N)[n, q]``.
    """

    index_pair: tuple
    coefficients: np.ndarray = field(repr=False)
    shape: tuple = ()

    @property
    def grid(self):
        return self.coefficients.reshape(self.shape, order="F")

    @property
    def config(self):
        return ReflectionConfig(self.grid)

    def row_major(self):
        """The same codeword in row-by-row order, i.e. a column of ``kron(F(M), F(N))``."""
        return self.grid.ravel(order="C")


def dft_codebook(geom):
    """All ``M * N`` codewords, column-DFT index varying fastest."""
    FM, FN = dft_matrix(geom.rows_M), dft_matrix(geom.cols_N)
    book = []
    for p in range(geom.rows_M):
        for q in range(geom.cols_N):
            book.append(Codeword((p, q), np.kron(FN[:, q], FM[:, p]), geom.shape))
    return book


def codebook_matrix(geom):
    """Codewords stacked as columns, in :func:`dft_codebook` order."""
    return np.stack([c.coefficients for c in dft_codebook(geom)], axis=1)


def nearest_codeword(geom, target):
    """Codeword with the largest ``|c^H target|``."""
    target = target.vector if isinstance(target, ReflectionConfig) else np.asarray(target)
    book = dft_codebook(geom)
    scores = np.abs(np.stack([c.coefficients for c in book]).conj() @ target)
    return book[int(np.argmax(scores))]


def _case_rule_states(phases):
    # arg in [-pi, 0) -> +j (logic 1); arg in [0, pi) -> -j (logic 0)
    phases = np.where(phases >= np.pi, phases - 2 * np.pi, phases)
    return (phases < 0).astype(np.int8)


def quantize_1bit(config):
    """Per-element 1-bit quantization by the sign of the phase.

    Elements with phase in [-pi, 0) become ``+j`` and those in [0, pi)
    become ``-j``; the boundary phase 0 goes to ``-j``.
    """
    coeffs = config.coefficients if isinstance(config, ReflectionConfig) else np.asarray(config)
    return ReflectionConfig.from_states(_case_rule_states(np.angle(coeffs)))


def quantize_1bit_optimal(config):
    """Binary configuration maximizing ``|w_o^H w|`` exactly.

    The per-element sign rule is optimal only up to a common phase
    rotation; this scans every rotation at which some element changes
    sign and keeps the best pattern.
    """
    coeffs = config.coefficients if isinstance(config, ReflectionConfig) else np.asarray(config)
    phi = np.angle(coeffs).ravel(order="F")
    z = np.exp(-1j * phi)
    breaks = np.sort(np.mod(np.concatenate([np.pi / 2 - phi, -np.pi / 2 - phi]), 2 * np.pi))
    mids = 0.5 * (breaks + np.roll(breaks, -1))
    mids[-1] += np.pi  # wrap-around interval
    best, best_sigma = -1.0, None
    for chunk in np.array_split(mids, max(1, mids.size // 256)):
        sigma = np.where(np.cos(phi[None, :] + chunk[:, None]) >= 0, 1.0, -1.0)
        score = np.abs(sigma @ z)
        i = int(np.argmax(score))
        if score[i] > best:
            best, best_sigma = float(score[i]), sigma[i]
    states = (best_sigma > 0).astype(np.int8)
    return ReflectionConfig.from_states(states.reshape(coeffs.shape, order="F"))


def inner_product_power(ideal, quantized):
    a = ideal.vector if isinstance(ideal, ReflectionConfig) else np.asarray(ideal)
    b = quantized.vector if isinstance(quantized, ReflectionConfig) else np.asarray(quantized)
    return float(abs(np.vdot(a, b)) ** 2)


def apply_grouping(config, g):
    """Force each run of ``g`` vertically adjacent elements onto one state.

    Binary inputs take the group majority (ties go to logic 0). Continuous
    inputs take the circular mean of each group and are then quantized.
    """
    g = check_positive_int(g, "group size")
    rows, cols = config.shape
    if rows % g:
        raise ScenarioError(f"group size {g} does not divide {rows} rows")
    if config.is_binary:
        counts = config.states.reshape(rows // g, g, cols).sum(axis=1)
        ctrl = (2 * counts > g).astype(np.int8)
    else:
        mean = config.coefficients.reshape(rows // g, g, cols).sum(axis=1)
        ctrl = _case_rule_states(np.angle(mean))
    return ReflectionConfig.from_states(np.repeat(ctrl, g, axis=0), group_size=g)


def bias_state_listing(config):
    """One ``(group_row, column, state)`` tuple per independent control signal."""
    ctrl = config.control_states
    return [(r, c, int(ctrl[r, c])) for c in range(ctrl.shape[1]) for r in range(ctrl.shape[0])]
