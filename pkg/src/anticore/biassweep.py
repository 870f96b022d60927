"""Center-bias sweeps of engineered chains.

Large-N runs here stand in for the infinite-chain operator argument: they are
numeric proxies, not a computation on the infinite chain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, center_index
from .errors import ChainError
from .itc import ITCMatrix, itc_from_spectrum, pmax_row, to_distance
from .spectral import spectrum

DEFAULT_GRID = (1.0, 10.0, 1e2, 1e3, 1e4)
FIT_MIN_ZETA = 1e2
MONOTONE_ATOL = 1e-10


@dataclass(frozen=True)
class SweepPoint:
    zeta: float
    lambda_max: float
    pmax_1_omega: float
    pmax_1_N: float
    d_1_omega: float

    @property
    def lambda_max_over_zeta(self) -> float:
        return self.lambda_max / self.zeta if self.zeta > 0 else math.nan

    @property
    def d_1_omega_over_log_zeta(self) -> float:
        return self.d_1_omega / math.log(self.zeta) if self.zeta > 1 else math.nan


def _check_grid(spec: ChainSpec, zeta_grid) -> np.ndarray:
    if not spec.odd:
        raise ChainError("bias sweeps need an odd chain")
    grid = np.asarray(list(zeta_grid), dtype=np.float64)
    if grid.size == 0:
        raise ValueError("empty zeta grid")
    if np.any(grid < 0) or not np.all(np.isfinite(grid)):
        raise ValueError("zeta grid must be finite and nonnegative")
    if np.any(np.diff(grid) < 0):
        raise ValueError("zeta grid must be ascending")
    return grid


def sweep_point(spec: ChainSpec, zeta: float) -> SweepPoint:
    chain = spec.with_bias(zeta)
    dec = spectrum(chain)
    row = pmax_row(dec, 1)
    w = center_index(chain) - 1
    return SweepPoint(
        zeta=float(zeta),
        lambda_max=float(dec.eigenvalues[-1]),
        pmax_1_omega=float(row[w]),
        pmax_1_N=float(row[-1]),
        d_1_omega=float(to_distance(row[w])),
    )


def sweep(spec: ChainSpec, zeta_grid=DEFAULT_GRID) -> list[SweepPoint]:
    """One :class:`SweepPoint` per bias value, in grid order."""
    return [sweep_point(spec, z) for z in _check_grid(spec, zeta_grid)]


def monotone_violations(points, atol: float = MONOTONE_ATOL) -> list[tuple[float, float]]:
    """Consecutive ``(zeta1, zeta2)`` where ``p_max(1, omega)`` went up."""
    out = []
    for a, b in zip(points, points[1:]):
        if b.zeta > a.zeta and b.pmax_1_omega > a.pmax_1_omega + atol:
            out.append((a.zeta, b.zeta))
    return out


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit ``log y = log prefactor + slope * log zeta``."""

    slope: float
    prefactor: float
    n_points: int
    quantity: str


def scaling_constant_estimate(points, min_zeta: float = FIT_MIN_ZETA,
                              quantity: str = "pmax") -> ScalingFit:
    """Fit the decay of ``p_max(1, omega)`` (or its square root) against bias.

    ``quantity`` is ``"pmax"`` or ``"amplitude"`` (``sqrt(p_max)``).
    """
    if quantity not in ("pmax", "amplitude"):
        raise ValueError(f"unknown quantity {quantity!r}")
    use = [p for p in points if p.zeta >= min_zeta and p.pmax_1_omega > 0]
    if len(use) < 3:
        raise ValueError(f"need >= 3 points with zeta >= {min_zeta}, got {len(use)}")
    x = np.log([p.zeta for p in use])
    if np.ptp(x) == 0:
        raise ValueError("degenerate zeta grid: all fit points share one bias")
    y = np.log([p.pmax_1_omega for p in use])
    if quantity == "amplitude":
        y = 0.5 * y
    slope, intercept = np.polyfit(x, y, 1)
    return ScalingFit(float(slope), float(math.exp(intercept)), len(use), quantity)


@dataclass(frozen=True)
class DecouplingReport:
    """Extremes of ``p_max`` per pair class for a biased chain.

    Classes: both spins in the same half, spins in opposite halves, and pairs
    with the center spin.
    """

    zeta: float
    same_half: tuple[float, float] | None  # None when each half is a single spin
    cross_half: tuple[float, float]
    omega_pairs: tuple[float, float]

    @property
    def omega_minimal(self) -> bool:
        others = self.cross_half[0]
        if self.same_half is not None:
            others = min(others, self.same_half[0])
        return self.omega_pairs[1] < others

    @property
    def tunneling_floor(self) -> float:
        return self.cross_half[0]


def decoupling_report(spec: ChainSpec, zeta: float, m: ITCMatrix | None = None) -> DecouplingReport:
    chain = spec.with_bias(zeta)
    if not chain.odd:
        raise ChainError("decoupling needs an odd chain")
    if m is None:
        m = itc_from_spectrum(spectrum(chain), chain)
    w = center_index(chain) - 1
    idx = np.arange(chain.n_spins)
    left, right = idx[idx < w], idx[idx > w]
    p = m.pmax

    def extremes(vals):
        vals = np.asarray(vals)
        if vals.size == 0:
            return None
        return float(vals.min()), float(vals.max())

    same = [p[a, b] for half in (left, right) for a in half for b in half if a < b]
    cross = p[np.ix_(left, right)].ravel()
    omega = np.delete(p[w], w)
    return DecouplingReport(float(zeta), extremes(same), extremes(cross), extremes(omega))
