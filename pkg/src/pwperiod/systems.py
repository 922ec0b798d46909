"""Piecewise Hamiltonian systems split along the horizontal axis.

A system is a pair of homogeneous nonlinearities: the upper Hamiltonian
(x^2 + y^2)/2 + upper(x, y) drives the flow for y >= 0, the lower one for
y < 0.  The flow is x' = -dH/dy, y' = dH/dx, counterclockwise rotation at
lowest order.  Whether the origin is a center depends only on the two degree
exponents and the two axis coefficients; ``classify`` decides it exactly
over the rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DegreeTooLow
from .trigmoments import HomogeneousPoly

SIGMA_CENTER = "SigmaCenter"
NOT_CENTER = "NotCenter"

UPPER_SIDE = "upper"
LOWER_SIDE = "lower"
SIDES = (UPPER_SIDE, LOWER_SIDE)

__all__ = [
    "PiecewiseSystem",
    "CenterClass",
    "AnnulusEstimate",
    "classify",
    "normalize",
    "vector_field",
    "hamiltonian",
    "annulus_bound",
    "min_annulus_radius",
    "start_radius_cap",
    "min_start_cap",
    "SIGMA_CENTER",
    "NOT_CENTER",
    "SIDES",
]


@dataclass(frozen=True)
class PiecewiseSystem:
    """Pair of homogeneous nonlinearities, one per half plane."""

    upper: HomogeneousPoly
    lower: HomogeneousPoly

    @property
    def n(self) -> int:
        """Degree exponent of the upper side (degree minus one)."""
        return self.upper.degree - 1

    @property
    def m(self) -> int:
        """Degree exponent of the lower side (degree minus one)."""
        return self.lower.degree - 1

    @property
    def a0_plus(self) -> Fraction:
        return self.upper.axis_value

    @property
    def a0_minus(self) -> Fraction:
        return self.lower.axis_value

    def side(self, side: str) -> HomogeneousPoly:
        if side == UPPER_SIDE:
            return self.upper
        if side == LOWER_SIDE:
            return self.lower
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")

    def side_exponent(self, side: str) -> int:
        return self.side(side).degree - 1


@dataclass(frozen=True)
class CenterClass:
    """Classification verdict with the matching case tag and a reason."""

    verdict: str
    case_tag: str | None
    reason: str

    @property
    def is_center(self) -> bool:
        return self.verdict == SIGMA_CENTER


@dataclass(frozen=True)
class AnnulusEstimate:
    """Outer radius bound of the period annulus for one side."""

    side: str
    r_star: float
    theta_star: float | None

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.r_star)


def classify(sys: PiecewiseSystem) -> CenterClass:
    """Decide, exactly, whether the origin is a crossing center.

    Both half orbits return to the axis at a radius fixed by the energy
    match with the axis coefficient alone; the orbits close if and only if
    the two return radii agree.  The five cases below enumerate exactly when
    that happens.
    """
    n, m = sys.n, sys.m
    ap, am = sys.a0_plus, sys.a0_minus
    n_odd = n % 2 == 1
    m_odd = m % 2 == 1
    if n_odd and m_odd:
        return CenterClass(SIGMA_CENTER, "I", "both exponents odd")
    if (not n_odd) and m_odd:
        if ap == 0:
            return CenterClass(SIGMA_CENTER, "II",
                               "upper exponent even with vanishing upper axis coefficient")
        return CenterClass(NOT_CENTER, None,
                           f"upper exponent even requires zero upper axis coefficient, got {ap}")
    if n_odd and not m_odd:
        if am == 0:
            return CenterClass(SIGMA_CENTER, "III",
                               "lower exponent even with vanishing lower axis coefficient")
        return CenterClass(NOT_CENTER, None,
                           f"lower exponent even requires zero lower axis coefficient, got {am}")
    # both even
    if n != m:
        if ap == 0 and am == 0:
            return CenterClass(SIGMA_CENTER, "IV",
                               "both exponents even, distinct, both axis coefficients zero")
        return CenterClass(NOT_CENTER, None,
                           "distinct even exponents require both axis coefficients zero, "
                           f"got {ap} and {am}")
    if ap == am:
        return CenterClass(SIGMA_CENTER, "V",
                           "equal even exponents with equal axis coefficients")
    return CenterClass(NOT_CENTER, None,
                       f"equal even exponents require equal axis coefficients, got {ap} != {am}")


def normalize(sys: PiecewiseSystem) -> PiecewiseSystem:
    """Swap the half planes through (x, y) -> (-x, -y) when m > n.

    The point reflection maps each side's nonlinearity to the other half
    plane with every coefficient picking up (-1)^degree; applying the map
    twice is the identity, and the classification verdict is unchanged.
    """
    if sys.m <= sys.n:
        return sys
    return PiecewiseSystem(upper=_reflect(sys.lower), lower=_reflect(sys.upper))


def _reflect(p: HomogeneousPoly) -> HomogeneousPoly:
    sign = -1 if p.degree % 2 else 1
    return HomogeneousPoly(p.degree, tuple(sign * c for c in p.coeffs))


def vector_field(sys: PiecewiseSystem, x: float, y: float) -> tuple[float, float]:
    """Field (-dH/dy, dH/dx) of the side active at (x, y); y = 0 uses the upper."""
    p = sys.upper if y >= 0.0 else sys.lower
    px = _eval_homo(p.partial_x_coeffs(), x, y)
    py = _eval_homo(p.partial_y_coeffs(), x, y)
    return (-y - py, x + px)


def hamiltonian(sys: PiecewiseSystem, x: float, y: float) -> float:
    """Energy of the side active at (x, y)."""
    p = sys.upper if y >= 0.0 else sys.lower
    return 0.5 * (x * x + y * y) + p(x, y)


def _eval_homo(coeffs, x: float, y: float) -> float:
    d = len(coeffs) - 1
    total = 0.0
    xp = 1.0
    xs = [1.0]
    for _ in range(d):
        xp *= x
        xs.append(xp)
    yp = 1.0
    for i, c in enumerate(coeffs):
        if c:
            total += float(c) * xs[d - i] * yp
        yp *= y
    return total


def annulus_bound(sys: PiecewiseSystem, side: str,
                  samples: int = 4096) -> AnnulusEstimate:
    """Outer radius of the side's period annulus.

    The annulus ends where the angular speed 1 + (degree) g(theta) r^(degree-2)
    first vanishes, so r_star = ((degree) * max(-g))^(-1/(degree-2)) whenever
    the profile g takes negative values, and the annulus is unbounded
    otherwise.  The profile extremum is located numerically: dense sampling
    followed by local refinement.
    """
    p = sys.side(side)
    if p.is_zero():
        return AnnulusEstimate(side, math.inf, None)
    if p.degree == 2:
        raise DegreeTooLow("annulus bound is defined for nonlinearity degree >= 3")
    d = p.degree
    thetas = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    values = np.array([p.profile(t) for t in thetas])
    order = np.argsort(values)
    window = 2.0 * (2.0 * math.pi / samples)
    best_val = math.inf
    best_theta = 0.0
    for idx in order[:6]:
        t0 = thetas[idx]
        res = minimize_scalar(p.profile, bounds=(t0 - window, t0 + window),
                              method="bounded", options={"xatol": 1e-14})
        if res.fun < best_val:
            best_val = res.fun
            best_theta = float(res.x) % (2.0 * math.pi)
    scale = max(1.0, float(sum(abs(c) for c in p.coeffs)))
    if best_val >= -1e-13 * scale:
        return AnnulusEstimate(side, math.inf, None)
    r_star = (d * (-best_val)) ** (-1.0 / (d - 2))
    return AnnulusEstimate(side, r_star, best_theta)


def min_annulus_radius(sys: PiecewiseSystem) -> float:
    """Smallest annulus bound over both sides; inf when both are unbounded.

    Sides of degree 2 have no r-dependent angular obstruction and count as
    unbounded here.
    """
    out = math.inf
    for side in SIDES:
        p = sys.side(side)
        if p.is_zero() or p.degree == 2:
            continue
        est = annulus_bound(sys, side)
        out = min(out, est.r_star)
    return out


def _max_negative_profile(p: HomogeneousPoly, lo: float, hi: float,
                          samples: int = 2048) -> float:
    """Maximum of -g over [lo, hi], located by sampling plus refinement."""
    thetas = np.linspace(lo, hi, samples)
    values = np.array([p.profile(t) for t in thetas])
    order = np.argsort(values)
    window = 2.0 * (hi - lo) / samples
    best = math.inf
    for idx in order[:6]:
        a = max(lo, thetas[idx] - window)
        b = min(hi, thetas[idx] + window)
        res = minimize_scalar(p.profile, bounds=(a, b), method="bounded",
                              options={"xatol": 1e-14})
        best = min(best, float(res.fun))
    return -best


def start_radius_cap(sys: PiecewiseSystem, side: str, rng: str = "transit") -> float:
    """Largest axis start radius whose orbit piece stays inside the annulus.

    The level curve through (r0, 0) reaches every angle of the range only
    while its energy stays below the critical level at the range's worst
    angle, where the angular speed first vanishes.  With q = max(-g) over
    the range and d the side degree, the critical passage radius is
    rc = (d q)^(-1/(d-2)), the critical squared energy rc^2 (d-2)/d, and the
    cap is the start radius whose energy matches it.  Unlimited (inf) when
    g is nonnegative on the range.  ``rng`` is "transit" for the side's own
    half circle or "full" for the whole circle (smooth sub-system orbits).
    """
    p = sys.side(side)
    if p.is_zero():
        return math.inf
    if rng == "transit":
        lo, hi = (0.0, math.pi) if side == UPPER_SIDE else (math.pi, 2.0 * math.pi)
    elif rng == "full":
        lo, hi = 0.0, 2.0 * math.pi
    else:
        raise ValueError(f"rng must be 'transit' or 'full', got {rng!r}")
    d = p.degree
    q = _max_negative_profile(p, lo, hi)
    scale = max(1.0, float(sum(abs(c) for c in p.coeffs)))
    if q <= 1e-13 * scale:
        return math.inf
    if d == 2:
        # angular speed 1 + 2 g is radius independent
        return math.inf if 2.0 * q < 1.0 else 0.0
    rc = (d * q) ** (-1.0 / (d - 2))
    h2_cap = rc * rc * (d - 2) / d
    a0 = float(p.axis_value)

    def energy_gap(r0: float) -> float:
        return r0 * r0 + 2.0 * a0 * r0 ** d - h2_cap

    # the cap lies in (0, rc]: the axis energy at rc is >= the critical level
    if energy_gap(rc) <= 0.0:
        return rc
    return brentq(energy_gap, 1e-300, rc, xtol=1e-15, rtol=8.9e-16, maxiter=200)


def min_start_cap(sys: PiecewiseSystem) -> float:
    """Start radius below which both half-plane transits exist."""
    return min(start_radius_cap(sys, UPPER_SIDE, "transit"),
               start_radius_cap(sys, LOWER_SIDE, "transit"))
