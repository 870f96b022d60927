"""Metric-geometry diagnostics on ITC pre-metrics."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .chain import center_index, check_spin
from .itc import DEFAULT_ALPHA, ITCMatrix, inertia_profile
from .kernels import four_point_scan

TIE_ATOL = 1e-12
TRIANGLE_ATOL = 1e-12
DEFAULT_BUDGET = 2_000_000
DEFAULT_SEED = 0


@dataclass(frozen=True)
class AnticoreResult:
    """Majority farthest spin and whether every row ``i != omega`` peaks at omega.

    ``violations`` lists ``(i, j)`` where row ``i`` is strictly farther from
    ``j`` than from omega; ``ties`` lists rows where omega shares the maximum.
    """

    index: int
    flag: bool
    omega: int
    violations: tuple = ()
    ties: tuple = ()


def find_anticore(m: ITCMatrix, tie_atol: float = TIE_ATOL) -> AnticoreResult:
    omega = center_index(m.spec)
    w = omega - 1
    d = m.distance
    votes = Counter()
    violations = []
    ties = []
    for i in range(m.n):
        if i == w:
            continue
        row = d[i]
        top = row.max()
        if row[w] >= top - tie_atol:
            votes[omega] += 1
            if np.count_nonzero(row >= top - tie_atol) > 1:
                ties.append(i + 1)
        else:
            j = int(np.argmax(row)) + 1
            votes[j] += 1
            violations.append((i + 1, j))
    best = max(votes.values())
    # majority vote, ties toward omega then toward the smaller index
    index = omega if votes[omega] == best else min(k for k, c in votes.items() if c == best)
    return AnticoreResult(index, not violations, omega, tuple(violations), tuple(ties))


def diameter(m: ITCMatrix):
    """Largest ``d(i, j)`` over ``i != j`` and the first (1-based) pair attaining it."""
    d = m.distance.copy()
    np.fill_diagonal(d, -np.inf)
    k = int(np.argmax(d))
    i, j = divmod(k, m.n)
    return float(d[i, j]), (i + 1, j + 1)


@dataclass(frozen=True)
class TriangleAudit:
    violations: np.ndarray  # (k, 3) rows of 1-based (i, j, k)
    max_excess: float

    @property
    def count(self) -> int:
        return int(self.violations.shape[0])


def triangle_audit(distance: np.ndarray, atol: float = TRIANGLE_ATOL) -> TriangleAudit:
    """All ``(i, j, k)`` with ``d(i, k) > d(i, j) + d(j, k) + atol``.

    Triples involving infinite distances are ignored.
    """
    d = np.asarray(distance, dtype=np.float64)
    n = d.shape[0]
    found = []
    worst = 0.0
    with np.errstate(invalid="ignore"):
        for j in range(n):
            via = d[:, j, None] + d[None, j, :]
            excess = d - via
            excess[~np.isfinite(excess)] = -np.inf
            hits = np.argwhere(excess > atol)
            if hits.size:
                worst = max(worst, float(excess[excess > atol].max()))
                found.append(np.column_stack([hits[:, 0], np.full(len(hits), j), hits[:, 1]]))
    if found:
        viol = np.concatenate(found) + 1
        viol = viol[np.lexsort((viol[:, 2], viol[:, 1], viol[:, 0]))]
    else:
        viol = np.empty((0, 3), dtype=np.int64)
    return TriangleAudit(viol, worst)


@dataclass(frozen=True)
class FourPointResult:
    delta: float
    quadruple: tuple | None  # 1-based
    scanned: int
    skipped: int
    exhaustive: bool
    seed: int | None
    label: str = "four-point delta (diagnostic)"


def four_point_delta(distance, budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED) -> FourPointResult:
    """Gromov four-point delta: max over quadruples of half the gap between
    the two largest of the three pair sums.

    Exhaustive when ``C(N, 4) <= budget``; otherwise ``budget`` quadruples of
    distinct points are drawn with a seeded generator.  Quadruples touching an
    infinite distance are skipped and counted.
    """
    d = distance.distance if isinstance(distance, ITCMatrix) else np.asarray(distance, dtype=np.float64)
    n = d.shape[0]
    total = math.comb(n, 4)
    if total == 0:
        return FourPointResult(0.0, None, 0, 0, True, None)
    if total <= budget:
        delta, quad, skipped = four_point_scan(d)
        scanned, exhaustive, used_seed = total, True, None
    else:
        rng = np.random.default_rng(seed)
        quads = _sample_quads(rng, n, budget)
        delta, quad, skipped = four_point_scan(d, quads)
        scanned, exhaustive, used_seed = budget, False, seed
    q = None if quad[0] < 0 else tuple(x + 1 for x in quad)
    return FourPointResult(delta, q, scanned, skipped, exhaustive, used_seed)


def _sample_quads(rng, n, count):
    # 4 distinct indices per row: draw from a shrinking range, shift past taken ones
    out = np.empty((count, 4), dtype=np.int64)
    out[:, 0] = rng.integers(0, n, count)
    for c in range(1, 4):
        r = rng.integers(0, n - c, count)
        prev = np.sort(out[:, :c], axis=1)
        for p in range(c):
            r = r + (r >= prev[:, p])
        out[:, c] = r
    return np.sort(out, axis=1)


@dataclass(frozen=True)
class PathBound:
    """Path-product bound ``sqrt p_max(i,j) <= sum over paths of prod sqrt p_max``.

    ``rhs`` sums over every intermediate sequence ``k_1..k_{segments-2}``;
    ``through_omega`` is the part of ``rhs`` from sequences visiting the
    center spin.
    """

    i: int
    j: int
    segments: int
    lhs: float
    rhs: float
    through_omega: float | None

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def omega_share(self) -> float | None:
        if self.through_omega is None:
            return None
        return self.through_omega / self.rhs


def path_product_bound_check(m: ITCMatrix, i: int, j: int, segments: int = 3) -> PathBound:
    """Exhaustive path-product bound via powers of the ``sqrt(p_max)`` matrix."""
    a, b = check_spin(m.n, i), check_spin(m.n, j)
    if segments < 2:
        raise ValueError(f"segments must be >= 2, got {segments}")
    amp = m.sqrt_pmax
    steps = segments - 1
    rhs = np.linalg.matrix_power(amp, steps)[a, b]
    through = None
    if m.spec.odd:
        w = center_index(m.spec) - 1
        if w in (a, b):
            through = float(rhs)
        else:
            avoid = amp.copy()
            avoid[w, :] = 0.0
            avoid[:, w] = 0.0
            through = float(rhs - np.linalg.matrix_power(avoid, steps)[a, b])
    return PathBound(i, j, segments, float(amp[a, b]), float(rhs), through)


@dataclass(frozen=True)
class GeometryReport:
    anticore: AnticoreResult | None
    inertia_profile: np.ndarray
    diameter: float
    diameter_pair: tuple
    triangle: TriangleAudit
    four_point: FourPointResult
    infinite_pairs: int = field(default=0)


def geometry_report(m: ITCMatrix, alpha: float = DEFAULT_ALPHA,
                    budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED) -> GeometryReport:
    anti = find_anticore(m) if m.spec.odd else None
    diam, pair = diameter(m)
    infinite = int(np.count_nonzero(~np.isfinite(m.distance))) // 2
    return GeometryReport(
        anticore=anti,
        inertia_profile=inertia_profile(m, alpha),
        diameter=diam,
        diameter_pair=pair,
        triangle=triangle_audit(m.distance),
        four_point=four_point_delta(m.distance, budget, seed),
        infinite_pairs=infinite,
    )
