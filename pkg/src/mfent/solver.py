"""Critical exponents of the pre-measure constructions.

Each pre-measure value, viewed as a function of the discount rate t, is
continuous and nonincreasing at finite depth, so the transition point of
the limiting 0/infinity dichotomy is estimated as the root of value = 1
by bisection, then tracked over an (N, D) schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BracketError
from .measures import MeasureModel, doubling_check
from .premeasure import TreeEvaluator
from .space import CylinderSet

DEFAULT_SCHEDULE: tuple[tuple[int, int], ...] = ((4, 4), (8, 8), (12, 12), (16, 16))


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    method: str  # "root" or "growth_rate"
    N_used: int
    D_used: int
    k: int
    error_bar: float
    degenerate: bool = False


def _critical_exponent_impl(
    log_value_at: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float,
) -> tuple[float, bool]:
    lo, hi = bracket
    if not lo < hi:
        raise ValueError(f"invalid bracket {bracket}")
    f_lo = log_value_at(lo)
    f_hi = log_value_at(hi)
    if f_lo == 0.0 and f_hi == 0.0:
        # flat at the critical value: exactly-normalized degenerate case
        return 0.5 * (lo + hi), True

    width = hi - lo
    for _ in range(60):
        if f_lo > 0.0:
            break
        lo -= width
        width *= 2.0
        f_lo = log_value_at(lo)
    else:
        if f_lo <= 0.0:
            # value never exceeds 1: the transition sits at -infinity
            return -math.inf, False
    width = hi - lo
    for _ in range(60):
        if f_hi < 0.0:
            break
        hi += width
        width *= 2.0
        f_hi = log_value_at(hi)
    else:
        if f_hi >= 0.0:
            return math.inf, False

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = log_value_at(mid)
        if f_mid > 0.0:
            lo = mid
        elif f_mid < 0.0:
            hi = mid
        else:
            return mid, False
    return 0.5 * (lo + hi), False


def critical_exponent(
    log_value_at: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = 1e-9,
) -> float:
    """Root t* of value(t) = 1 for a nonincreasing log-domain value function.

    Returns -inf/+inf when the value stays below/above 1 after 60 bracket
    doublings (identically-zero or blown-up tails).  A function flat at 1
    across the bracket returns the bracket midpoint.
    """
    return _critical_exponent_impl(log_value_at, bracket, tol)[0]


def _default_bracket(model: MeasureModel, q: float) -> tuple[float, float]:
    span = math.log(model.space.alphabet_size) * (2.0 + abs(q)) + 1.0
    return (-span, span)


def _schedule_estimate(
    values: list[tuple[int, int, float]], k: int, method: str, degenerate: bool
) -> EntropyEstimate:
    N, D, val = values[-1]
    if len(values) >= 2:
        err = abs(values[-1][2] - values[-2][2])
        if math.isnan(err):
            err = math.inf
    else:
        err = math.inf
    return EntropyEstimate(
        value=val, method=method, N_used=N, D_used=D, k=k, error_bar=err,
        degenerate=degenerate,
    )


def _run_schedule(
    model: MeasureModel,
    E: CylinderSet,
    q: float,
    k: int,
    schedule: Sequence[tuple[int, int]],
    sweep: str,
    cover_depth: int | None = None,
    tol: float = 1e-8,
) -> EntropyEstimate:
    bracket = _default_bracket(model, q)
    values = []
    degenerate = False
    for N, D in schedule:
        ev = TreeEvaluator(model, E, k, D)
        if sweep == "covering":
            f = lambda t: ev.covering_log(q, t, N)
        elif sweep == "packing":
            f = lambda t: ev.packing_log(q, t, N)
        else:
            cd = min(6, N) if cover_depth is None else cover_depth
            f = lambda t: ev.outer_log(q, t, N, cd)
        root, deg = _critical_exponent_impl(f, bracket, tol)
        degenerate = degenerate or deg
        values.append((N, D, root))
    return _schedule_estimate(values, k, "root", degenerate)


def bowen_entropy(
    model: MeasureModel,
    E: CylinderSet,
    q: float,
    k: int = 0,
    schedule: Sequence[tuple[int, int]] = DEFAULT_SCHEDULE,
) -> EntropyEstimate:
    """Critical exponent of the covering pre-measure over the schedule.

    For q > 0 the identification of this exponent with the covering
    entropy requires the measure to satisfy the one-step doubling bound,
    so models with an infinite analytic bound are rejected.
    """
    if q > 0:
        bound = model.one_step_log_bound()
        if bound is not None and math.isinf(bound):
            raise BracketError(
                "q > 0 needs the entropy doubling condition; this measure has "
                "zero-mass admissible transitions (unbounded doubling ratio)"
            )
        if bound is None:
            rep = doubling_check(model, max(k, 1), n_max=6)
            if math.isinf(rep.empirical_sup):
                raise BracketError(
                    "q > 0 needs the entropy doubling condition; empirical "
                    "doubling ratio is unbounded"
                )
    return _run_schedule(model, E, q, k, schedule, "covering")


def packing_entropy_delta(
    model: MeasureModel,
    E: CylinderSet,
    q: float,
    k: int = 0,
    schedule: Sequence[tuple[int, int]] = DEFAULT_SCHEDULE,
) -> EntropyEstimate:
    """Critical exponent of the raw packing pre-measure (no cover refinement)."""
    return _run_schedule(model, E, q, k, schedule, "packing")


def packing_entropy(
    model: MeasureModel,
    E: CylinderSet,
    q: float,
    k: int = 0,
    schedule: Sequence[tuple[int, int]] = DEFAULT_SCHEDULE,
    cover_depth: int | None = None,
) -> EntropyEstimate:
    """Critical exponent of the cover-refined packing construction.

    cover_depth defaults to min(6, N) per schedule entry.
    """
    return _run_schedule(model, E, q, k, schedule, "outer", cover_depth=cover_depth)
