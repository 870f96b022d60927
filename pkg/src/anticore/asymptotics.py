"""Infinite-chain limits of ``sqrt(p_max)``.

Two frames are supported.  In the semi-infinite frame positions count from the
left end (``i, j >= 1``).  In the doubly-infinite frame they are offsets from
the center spin and may be negative.  Each value is computed twice, once as
the positive series over even ``m`` with a certified tail bound and once as a
cotangent closed form, and the two must agree.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import CrossCheckError

TWO_OVER_PI = 2.0 / math.pi
EIGHT_OVER_PI2 = 8.0 / math.pi ** 2
DEFAULT_TOL = 1e-10
MAX_TOL = 1e-3
AGREEMENT_SLACK = 1e-10


class Frame(enum.Enum):
    SEMI_INFINITE = "semi"
    DOUBLY_INFINITE = "doubly"


class ParityClass(enum.Enum):
    EQUAL_DYADIC_VALUATION = "equal-2-adic"
    UNEQUAL_DYADIC_VALUATION = "unequal-2-adic"


def dyadic_valuation(x: int) -> int:
    """Exponent of 2 in ``x`` (``x != 0``)."""
    x = abs(int(x))
    if x == 0:
        raise ValueError("2-adic valuation of 0 is undefined")
    return (x & -x).bit_length() - 1


@dataclass(frozen=True)
class ReducedPair:
    i_raw: int
    j_raw: int
    g: int
    i_red: int
    j_red: int
    parity_class: ParityClass | None = None

    @property
    def mirrored(self) -> bool:
        """Opposite-sign doubly-infinite offsets of equal magnitude."""
        return self.i_raw == -self.j_raw


def reduce_pair(i: int, j: int, frame: Frame = Frame.SEMI_INFINITE) -> ReducedPair:
    """Divide a pair of positions by their gcd and classify its parity.

    Doubly-infinite offsets are reflected to positive values first.
    """
    i, j = int(i), int(j)
    frame = Frame(frame)
    if frame is Frame.SEMI_INFINITE:
        if i < 1 or j < 1:
            raise ValueError(f"semi-infinite positions must be >= 1, got ({i}, {j})")
        parity = None
    else:
        if i == 0 or j == 0:
            raise ValueError("zero offset is the center spin; use center_value()")
        parity = (
            ParityClass.EQUAL_DYADIC_VALUATION
            if dyadic_valuation(i) == dyadic_valuation(j)
            else ParityClass.UNEQUAL_DYADIC_VALUATION
        )
    a, b = abs(i), abs(j)
    g = math.gcd(a, b)
    return ReducedPair(i, j, g, a // g, b // g, parity)


def _series_step(pair: ReducedPair) -> int:
    if pair.parity_class is ParityClass.UNEQUAL_DYADIC_VALUATION:
        return 4
    return 2


def tail_bound(a: int, b: int, last_m: int, step: int) -> float:
    """Upper bound on the series terms with ``m > last_m`` (``m`` a multiple of ``step``).

    Uses ``m^2 x^2 - 1 >= 3/4 m^2 x^2`` for ``m x >= 2`` and the integral
    bound ``sum_{m > M} m^-4 <= 1 / (3 step M^3)``.
    """
    return 64.0 / (27.0 * step * last_m ** 3 * a * a * b * b)


def even_series(a: int, b: int, step: int = 2, tol: float = DEFAULT_TOL):
    """``(4/pi^2)(2 + sum_m 4/((m^2 a^2 - 1)(m^2 b^2 - 1)))`` over ``m = step, 2 step, ...``.

    Returns ``(value, bound, last_m)`` where ``bound`` certifies the truncation
    error of ``value`` (``bound < tol``).
    """
    if not 0 < tol <= MAX_TOL:
        raise ValueError(f"tol must lie in (0, {MAX_TOL}], got {tol}")
    need = (64.0 / (27.0 * step * tol * a * a * b * b)) ** (1.0 / 3.0)
    last_m = step * max(1, math.ceil(need / step))
    while tail_bound(a, b, last_m, step) >= tol:
        last_m += step
    m = np.arange(step, last_m + 1, step, dtype=np.float64)
    terms = 4.0 / ((m * m * a * a - 1.0) * (m * m * b * b - 1.0))
    total = math.fsum(terms[::-1])
    value = 4.0 / math.pi ** 2 * (2.0 + total)
    bound = 4.0 / math.pi ** 2 * tail_bound(a, b, last_m, step)
    return value, bound, last_m


def _x_cot_x(x: float) -> float:
    # x cot x, exact 0 at x = pi/2 where cot vanishes
    if x == math.pi / 2:
        return 0.0
    return x / math.tan(x)


def cotangent_closed_form(a: int, b: int, quarter: bool = False) -> float:
    """``(8/pi^2)(a^2 c(a) - b^2 c(b)) / (a^2 - b^2)`` with ``c(x) = (pi/qx) cot(pi/qx)``.

    ``q`` is 2, or 4 when ``quarter`` is set.
    """
    if a == b:
        raise ValueError("closed form is singular for equal reduced positions")
    q = 4 if quarter else 2
    ca = _x_cot_x(math.pi / (q * a))
    cb = _x_cot_x(math.pi / (q * b))
    a2, b2 = a * a, b * b
    return EIGHT_OVER_PI2 * (a2 * ca - b2 * cb) / (a2 - b2)


def semi_infinite_pmax_series(pair: ReducedPair, tol: float = DEFAULT_TOL) -> float:
    """Series value of the semi-infinite ``sqrt(p_max)``, error below ``tol``."""
    return even_series(pair.i_red, pair.j_red, 2, tol)[0]


def semi_infinite_pmax_closed(pair: ReducedPair) -> float:
    """Cotangent closed form of the semi-infinite ``sqrt(p_max)`` (``i != j``)."""
    if pair.i_red == pair.j_red:
        raise ValueError("i == j: the exact value is 1")
    return cotangent_closed_form(pair.i_red, pair.j_red)


@dataclass(frozen=True)
class AsymptoticValue:
    """Both evaluations of one asymptotic ``sqrt(p_max)`` plus bookkeeping."""

    i: int
    j: int
    frame: Frame
    pair: ReducedPair | None
    series: float
    closed_form: float
    truncation_bound: float
    special: str | None = None

    @property
    def value(self) -> float:
        return self.closed_form

    @property
    def discrepancy(self) -> float:
        return abs(self.series - self.closed_form)


def _checked(result: AsymptoticValue, tol: float) -> AsymptoticValue:
    if result.discrepancy > tol + AGREEMENT_SLACK:
        raise CrossCheckError(
            f"series {result.series!r} and closed form {result.closed_form!r} "
            f"disagree by {result.discrepancy:.3e} for ({result.i}, {result.j})"
        )
    return result


def semi_infinite(i: int, j: int, tol: float = DEFAULT_TOL) -> AsymptoticValue:
    pair = reduce_pair(i, j, Frame.SEMI_INFINITE)
    if pair.i_red == pair.j_red:
        series, bound, _ = even_series(1, 1, 2, tol)
        return _checked(
            AsymptoticValue(i, j, Frame.SEMI_INFINITE, pair, series, 1.0, bound, "diagonal"),
            tol,
        )
    series, bound, _ = even_series(pair.i_red, pair.j_red, 2, tol)
    closed = semi_infinite_pmax_closed(pair)
    return _checked(
        AsymptoticValue(i, j, Frame.SEMI_INFINITE, pair, series, closed, bound), tol
    )


def doubly_infinite(i_rel: int, j_rel: int, tol: float = DEFAULT_TOL) -> AsymptoticValue:
    i_rel, j_rel = int(i_rel), int(j_rel)
    if i_rel == 0 and j_rel == 0:
        raise ValueError("both offsets are the center spin")
    if i_rel == 0 or j_rel == 0:
        return AsymptoticValue(
            i_rel, j_rel, Frame.DOUBLY_INFINITE, None, TWO_OVER_PI, TWO_OVER_PI, 0.0, "center"
        )
    pair = reduce_pair(i_rel, j_rel, Frame.DOUBLY_INFINITE)
    step = _series_step(pair)
    if pair.i_red == pair.j_red:
        series, bound, _ = even_series(1, 1, step, tol)
        special = "mirror" if pair.mirrored else "diagonal"
        return _checked(
            AsymptoticValue(i_rel, j_rel, Frame.DOUBLY_INFINITE, pair, series, 1.0, bound, special),
            tol,
        )
    series, bound, _ = even_series(pair.i_red, pair.j_red, step, tol)
    closed = cotangent_closed_form(pair.i_red, pair.j_red, quarter=(step == 4))
    special = "reflected" if (i_rel < 0) != (j_rel < 0) else None
    return _checked(
        AsymptoticValue(i_rel, j_rel, Frame.DOUBLY_INFINITE, pair, series, closed, bound, special),
        tol,
    )


def doubly_infinite_pmax(i_rel: int, j_rel: int, tol: float = DEFAULT_TOL) -> float:
    """Doubly-infinite ``sqrt(p_max)`` for offsets from the center.

    ``2/pi`` when exactly one offset is 0, 1 on the diagonal, otherwise the
    cotangent closed form, validated against the series.
    """
    return doubly_infinite(i_rel, j_rel, tol).value


def asymptotic(i: int, j: int, frame: Frame, tol: float = DEFAULT_TOL) -> AsymptoticValue:
    if Frame(frame) is Frame.SEMI_INFINITE:
        return semi_infinite(i, j, tol)
    return doubly_infinite(i, j, tol)


@dataclass(frozen=True)
class DiameterConstants:
    semi_floor_pmax: float
    doubly_floor_sqrt: float
    center_sqrt: float
    doubly_diameter: float
    zeta_even_sum: float


def diameter_constants() -> DiameterConstants:
    pi = math.pi
    return DiameterConstants(
        semi_floor_pmax=64.0 / pi ** 4,
        doubly_floor_sqrt=8.0 / pi ** 2,
        center_sqrt=2.0 / pi,
        doubly_diameter=-2.0 * math.log(2.0 / pi),
        zeta_even_sum=pi ** 2 - 8.0,
    )


def zeta_identity_check(cutoff: int) -> float:
    """Partial sum of ``16/(m^2 - 1)^2`` over even ``m <= cutoff``; tends to ``pi^2 - 8``."""
    cutoff = int(cutoff)
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    m = np.arange(2, cutoff + 1, 2, dtype=np.float64)
    return math.fsum((16.0 / (m * m - 1.0) ** 2)[::-1])
