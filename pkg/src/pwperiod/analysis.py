"""Higher-level analysis: witnesses, cross-validation, period profiles.

Everything here reports what was measured.  A missing witness is returned
as None together with an explanatory anomaly string; a series that cannot
be built (degenerate degree) simply stays absent.  No step hard-codes a
theorem's conclusion: the constant-period case in particular is detected
from the data and flagged as being in tension with the expected
non-isochronicity, not suppressed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeTooLow, HypothesisNotMet, NotACenter
from .flow import numeric_period, quadrature_period, smooth_period
from .periodseries import PeriodSeries, combined_period_series, first_obstruction
from .systems import (
    LOWER_SIDE,
    SIDES,
    SIGMA_CENTER,
    UPPER_SIDE,
    CenterClass,
    PiecewiseSystem,
    annulus_bound,
    classify,
    min_start_cap,
    start_radius_cap,
)
from .trigmoments import UPPER, LOWER, TrigValue, profile_power_integral

TWO_PI = 2.0 * math.pi

DECREASING = "decreasing"
INCREASING_UNBOUNDED = "increasing_unbounded"
MIN_CRITICAL = "min_critical"
CONSTANT = "constant"
UNDETERMINED = "undetermined"

__all__ = [
    "AnalysisReport",
    "WitnessSearch",
    "find_witness",
    "cross_validate",
    "monotonicity_profile",
    "predicted_profiles",
    "half_equals_half_full_check",
    "DECREASING",
    "INCREASING_UNBOUNDED",
    "MIN_CRITICAL",
    "CONSTANT",
    "UNDETERMINED",
]


@dataclass
class WitnessSearch:
    """Outcome of the non-isochronicity witness search."""

    witness: tuple[float, float, float] | None  # (r0, period, |period - 2 pi|)
    anomalies: list[str] = field(default_factory=list)
    evaluations: int = 0
    prediction: tuple[int, float] | None = None  # first obstruction (exponent, float coeff)


@dataclass
class AnalysisReport:
    """Everything the pipeline establishes about one system."""

    classification: CenterClass
    series: PeriodSeries | None
    obstruction: tuple[int, TrigValue] | None
    witness: tuple[float, float, float] | None
    monotonicity: dict[str, str]
    crosscheck: float | None
    anomalies: list[str]


def _default_r_hi(sys: PiecewiseSystem, r_max: float | None) -> float:
    cap = min_start_cap(sys)
    r_hi = 0.8 * cap if math.isfinite(cap) else 0.5
    if r_max is not None:
        r_hi = min(r_hi, r_max)
    return r_hi


def find_witness(sys: PiecewiseSystem, tol: float = 1e-6,
                 r_max: float | None = None, budget: int = 48) -> WitnessSearch:
    """Search for a radius whose period differs from 2 pi by more than tol.

    The search first probes for a constant period profile (possible for
    degenerate quadratic sides); a constant value away from 2 pi is an
    anomaly, not a witness, since the period function does not vary.  When
    the truncated series is available its first nonzero term supplies the
    starting radius; otherwise a geometric sweep is used.  Exhausting the
    budget without success is reported honestly.
    """
    verdict = classify(sys)
    if verdict.verdict != SIGMA_CENTER:
        raise NotACenter(f"witness search needs a center: {verdict.reason}")
    out = WitnessSearch(witness=None)
    r_hi = _default_r_hi(sys, r_max)

    probes = [r_hi, r_hi / 4.0, r_hi / 16.0]
    values = [numeric_period(sys, r) for r in probes]
    out.evaluations += len(probes)
    spread = max(values) - min(values)
    mean = sum(values) / len(values)
    if spread <= max(1e-9, 1e-12 * abs(mean)):
        if abs(mean - TWO_PI) > tol:
            out.anomalies.append(
                f"period is constant at {mean:.12g} but differs from 2*pi; "
                "apparently isochronous center, in tension with the expected "
                "non-isochronicity of nonlinear crossing centers"
            )
        return out
    for r, value in zip(probes, values):
        dev = abs(value - TWO_PI)
        if dev > tol:
            out.witness = (r, value, dev)
            return out

    r_start = None
    series_ok = all(p.is_zero() or p.degree >= 3 for p in (sys.upper, sys.lower))
    if series_ok:
        obstruction = first_obstruction(sys)
        if obstruction is not None:
            e, coeff = obstruction
            mu = abs(float(coeff))
            out.prediction = (e, float(coeff))
            if mu > 0.0:
                r_start = min(max((10.0 * tol / mu) ** (1.0 / e), 1e-8), r_hi)
    if r_start is None:
        r_start = r_hi / 2.0 ** 16

    r = r_start
    while r <= r_hi * (1.0 + 1e-12) and out.evaluations < budget:
        value = numeric_period(sys, r)
        out.evaluations += 1
        dev = abs(value - TWO_PI)
        if dev > tol:
            out.witness = (r, value, dev)
            return out
        r *= 2.0
    out.anomalies.append(
        f"no witness found within the evaluation budget ({out.evaluations} period "
        f"evaluations up to r0 = {r_hi:.6g})"
    )
    return out


def cross_validate(sys: PiecewiseSystem, order: int, grid) -> float:
    """Largest deviation between the ODE period and the truncated series.

    The series is truncated at the requested r0 exponent; the deviation must
    shrink like the first dropped exponent when the grid is scaled down,
    which the acceptance tests check by halving the grid.
    """
    steps = [p.degree - 2 for p in (sys.upper, sys.lower)
             if not p.is_zero() and p.degree >= 3]
    if not steps:
        jmax = 1
    else:
        jmax = max(-(-order // s) for s in steps) + 1
    series = combined_period_series(sys, jmax=jmax).truncate(order)
    worst = 0.0
    for r0 in grid:
        worst = max(worst, abs(numeric_period(sys, float(r0)) - series(float(r0))))
    return worst


def _profile_grid(sys: PiecewiseSystem, side: str, points: int = 9):
    p = sys.side(side)
    if p.is_zero() or p.degree == 2:
        return np.linspace(0.05, 1.0, points)
    cap = start_radius_cap(sys, side, "full")
    top = 0.8 * cap if math.isfinite(cap) else 1.0
    return np.linspace(0.05 * top, top, points)


def monotonicity_profile(sys: PiecewiseSystem, side: str, grid=None) -> str:
    """Tag the sampled whole-circle period profile of one side.

    Samples the side as a smooth system on the grid and classifies the
    shape: constant, decreasing, increasing (reported as unbounded growth
    when the annulus is bounded, which is what forces the increase to
    continue), or a single interior minimum.
    """
    p = sys.side(side)
    if p.is_zero():
        return CONSTANT
    if p.degree == 2:
        raise DegreeTooLow("period profile needs nonlinearity degree >= 3")
    if grid is None:
        grid = _profile_grid(sys, side)
    grid = [float(r) for r in grid]
    values = [smooth_period(sys, side, r) for r in grid]
    scale = max(abs(v) for v in values)
    tol = 1e-9 * scale
    if max(values) - min(values) <= tol:
        return CONSTANT
    diffs = [b - a for a, b in zip(values, values[1:])]
    if all(d <= tol for d in diffs):
        return DECREASING
    if all(d >= -tol for d in diffs):
        bounded = annulus_bound(sys, side).bounded
        return INCREASING_UNBOUNDED if bounded else UNDETERMINED
    signs = [d > 0 for d in diffs]
    switches = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    if switches == 1 and not signs[0] and signs[-1]:
        return MIN_CRITICAL
    return UNDETERMINED


def predicted_profiles(sys: PiecewiseSystem, side: str) -> set[str]:
    """Profile tags consistent with the side's exponent parity and sign of g."""
    p = sys.side(side)
    if p.is_zero():
        return {CONSTANT}
    if p.degree == 2:
        return {CONSTANT}
    n = p.degree - 1
    if n % 2 == 0:
        return {INCREASING_UNBOUNDED}
    thetas = np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False)
    gmin = min(p.profile(t) for t in thetas)
    scale = max(1.0, float(sum(abs(c) for c in p.coeffs)))
    if gmin >= -1e-12 * scale:
        return {DECREASING}
    return {INCREASING_UNBOUNDED, MIN_CRITICAL}


def half_equals_half_full_check(sys: PiecewiseSystem, side: str, grid,
                                tol: float = 1e-8, moment_bound: int = 15) -> bool:
    """Check T_half == T_full / 2 for one side across the grid.

    The identity requires either an odd exponent or vanishing odd half-range
    moments of the profile; both conditions are tested exactly before any
    numerics run, and HypothesisNotMet is raised when neither holds.
    """
    p = sys.side(side)
    if p.is_zero():
        return True
    n = p.degree - 1
    if n % 2 == 0:
        rng = UPPER if side == UPPER_SIDE else LOWER
        for j in range(1, moment_bound + 1, 2):
            if not profile_power_integral(p, j, rng).is_zero():
                raise HypothesisNotMet(
                    f"even exponent side with nonvanishing odd moment at power {j}; "
                    "the half-period identity does not apply"
                )
    for r0 in grid:
        r0 = float(r0)
        half = quadrature_period(sys, side, r0)
        full = smooth_period(sys, side, r0)
        if abs(half - 0.5 * full) > tol:
            return False
    return True
