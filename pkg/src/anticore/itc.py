"""Transfer probabilities, maximum transfer probability (ITC) and the pre-metric."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, check_spin
from .errors import CrossCheckError
from .kernels import abs_overlap, transfer_probabilities
from .spectral import SpectralDecomposition, spectrum

CLIP_ATOL = 1e-12
ZERO_PMAX = 1e-300
DEFAULT_ALPHA = 2.0


@dataclass(frozen=True)
class ITCMatrix:
    """Symmetric matrix of ``p_max(i, j)`` and the distance ``-log p_max``.

    Both arrays are 0-based; entry ``[i - 1, j - 1]`` belongs to spins ``i, j``.
    """

    pmax: np.ndarray
    distance: np.ndarray
    spec: ChainSpec

    @property
    def n(self) -> int:
        return self.pmax.shape[0]

    @property
    def sqrt_pmax(self) -> np.ndarray:
        return np.sqrt(self.pmax)

    def p(self, i: int, j: int) -> float:
        return float(self.pmax[check_spin(self.n, i), check_spin(self.n, j)])

    def d(self, i: int, j: int) -> float:
        return float(self.distance[check_spin(self.n, i), check_spin(self.n, j)])


def clip_probability(p):
    """Clip rounding excess above 1; anything beyond ``CLIP_ATOL`` is an error."""
    p = np.asarray(p, dtype=np.float64)
    excess = float(np.max(p, initial=0.0)) - 1.0
    if excess > CLIP_ATOL:
        raise CrossCheckError(f"p_max exceeds 1 by {excess:.3e}")
    return np.minimum(p, 1.0)


def to_distance(pmax):
    """``-log p_max`` with ``p_max <= 1e-300`` mapped to ``+inf``."""
    pmax = np.asarray(pmax, dtype=np.float64)
    with np.errstate(divide="ignore"):
        d = 0.0 - np.log(np.where(pmax <= ZERO_PMAX, 0.0, pmax))
    return d


def p_t(dec: SpectralDecomposition, i: int, j: int, t: float) -> float:
    """Probability that an excitation on spin ``i`` is on spin ``j`` at time ``t``."""
    a, b = check_spin(dec.n, i), check_spin(dec.n, j)
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    v = dec.eigenvectors
    amp = np.sum(np.exp(-1j * dec.eigenvalues * t) * v[a] * v[b])
    return float(amp.real ** 2 + amp.imag ** 2)


def p_t_grid(dec: SpectralDecomposition, times) -> np.ndarray:
    """``p_t(i, j)`` for every pair on a time grid, shape ``(len(times), N, N)``."""
    return transfer_probabilities(dec.eigenvalues, dec.eigenvectors, times)


def row_sum_check(dec: SpectralDecomposition, i: int, t: float) -> float:
    """``sum_j p_t(i, j)``; equals 1 up to rounding by unitarity."""
    a = check_spin(dec.n, i)
    v = dec.eigenvectors
    amp = (v * np.exp(-1j * dec.eigenvalues * t)) @ v[a]
    return float(np.sum(amp.real ** 2 + amp.imag ** 2))


def p_max(dec: SpectralDecomposition, i: int, j: int) -> float:
    """``(sum_k |v_k[i] v_k[j]|)^2``, the time-independent bound on ``p_t(i, j)``."""
    a, b = check_spin(dec.n, i), check_spin(dec.n, j)
    v = dec.eigenvectors
    s = float(np.sum(np.abs(v[a] * v[b])))
    return float(clip_probability(s * s))


def pmax_sine(n: int, i: int, j: int) -> float:
    """Homogeneous-chain ``p_max`` straight from the explicit sine sum.

    Independent of any eigen-decomposition; kept for cross-validation.
    """
    check_spin(n, i)
    check_spin(n, j)
    k = np.arange(1, n + 1)
    s = 2.0 / (n + 1) * np.sum(
        np.abs(np.sin(np.pi * k * i / (n + 1)) * np.sin(np.pi * k * j / (n + 1)))
    )
    return s * s


def pmax_row(dec: SpectralDecomposition, i: int) -> np.ndarray:
    """``p_max(i, j)`` for all ``j``; O(N^2) instead of the full O(N^3) matrix."""
    a = check_spin(dec.n, i)
    av = np.abs(dec.eigenvectors)
    s = av @ av[a]
    return clip_probability(s * s)


def itc_from_spectrum(dec: SpectralDecomposition, spec: ChainSpec) -> ITCMatrix:
    s = abs_overlap(dec.eigenvectors)
    pmax = clip_probability(s * s)
    distance = to_distance(pmax)
    np.fill_diagonal(distance, 0.0)
    pmax.setflags(write=False)
    distance.setflags(write=False)
    return ITCMatrix(pmax, distance, spec)


def itc_matrix(spec: ChainSpec) -> ITCMatrix:
    """Full ITC matrix of a chain (analytic spectrum when unbiased)."""
    return itc_from_spectrum(spectrum(spec), spec)


def inertia(m: ITCMatrix, j: int, alpha: float = DEFAULT_ALPHA) -> float:
    """``sum_i d(i, j)^alpha``; ``+inf`` as soon as one distance is infinite."""
    col = m.distance[:, check_spin(m.n, j)]
    if not np.all(np.isfinite(col)):
        return float("inf")
    return float(np.sum(col ** alpha))


def inertia_profile(m: ITCMatrix, alpha: float = DEFAULT_ALPHA) -> np.ndarray:
    return np.array([inertia(m, j, alpha) for j in range(1, m.n + 1)])
