"""Shared fixtures: polynomial builders and the reference system suite.

The suite is the single source the cross-module tests draw from, so every
entry records what we know exactly about it: the classification case and,
for centers where we froze it by hand, the first obstruction.
"""

from fractions import Fraction as F

import pytest

from pwperiod import HomogeneousPoly, PiecewiseSystem


def hp(degree, *coeffs):
    """Homogeneous polynomial from ascending y-power coefficients."""
    assert len(coeffs) == degree + 1
    return HomogeneousPoly(degree, [F(c) for c in coeffs])


def zero(degree):
    return HomogeneousPoly.zero(degree)


# name -> (system, case tag)
# coeffs are (x^d, x^(d-1) y, ..., y^d)
CENTER_SUITE = {
    "x2y2/y4": (PiecewiseSystem(hp(4, 0, 0, 1, 0, 0), hp(4, 0, 0, 0, 0, 1)), "I"),
    "x4/x2y2": (PiecewiseSystem(hp(4, 1, 0, 0, 0, 0), hp(4, 0, 0, 1, 0, 0)), "I"),
    "x2y2/x2:2": (PiecewiseSystem(hp(4, 0, 0, 1, 0, 0), hp(2, F(1, 2), 0, 0)), "I"),
    "x2y2/-y4:3": (PiecewiseSystem(hp(4, 0, 0, 1, 0, 0), hp(4, 0, 0, 0, 0, F(-1, 3))), "I"),
    "x2y/y4": (PiecewiseSystem(hp(3, 0, 1, 0, 0), hp(4, 0, 0, 0, 0, 1)), "II"),
    "xy2/x2y2": (PiecewiseSystem(hp(3, 0, 0, 1, 0), hp(4, 0, 0, 1, 0, 0)), "II"),
    "x4/x2y": (PiecewiseSystem(hp(4, 1, 0, 0, 0, 0), hp(3, 0, 1, 0, 0)), "III"),
    "x4/xy2": (PiecewiseSystem(hp(4, 1, 0, 0, 0, 0), hp(3, 0, 0, 1, 0)), "III"),
    "x4/x4y": (PiecewiseSystem(hp(4, 1, 0, 0, 0, 0), hp(5, 0, 1, 0, 0, 0, 0)), "III"),
    "x4y/x2y": (PiecewiseSystem(hp(5, 0, 1, 0, 0, 0, 0), hp(3, 0, 1, 0, 0)), "IV"),
    "x2y/x4y": (PiecewiseSystem(hp(3, 0, 1, 0, 0), hp(5, 0, 1, 0, 0, 0, 0)), "IV"),
    "x2y/y3": (PiecewiseSystem(hp(3, 0, 1, 0, 0), hp(3, 0, 0, 0, 1)), "V"),
    "x3/x3": (PiecewiseSystem(hp(3, 1, 0, 0, 0), hp(3, 1, 0, 0, 0)), "V"),
    "x3-x2y/x3+y3": (PiecewiseSystem(hp(3, 1, -1, 0, 0), hp(3, 1, 0, 0, 1)), "V"),
    "x2y/y3:2": (PiecewiseSystem(hp(3, 0, 1, 0, 0), hp(3, 0, 0, 0, F(1, 2))), "V"),
}

NONCENTER_SUITE = {
    "x3/y4": PiecewiseSystem(hp(3, 1, 0, 0, 0), hp(4, 0, 0, 0, 0, 1)),
    "x4/x3": PiecewiseSystem(hp(4, 1, 0, 0, 0, 0), hp(3, 1, 0, 0, 0)),
    "x3/y3": PiecewiseSystem(hp(3, 1, 0, 0, 0), hp(3, 0, 0, 0, 1)),
    "x5/x2y": PiecewiseSystem(hp(5, 1, 0, 0, 0, 0, 0), hp(3, 0, 1, 0, 0)),
    "x2y/x3": PiecewiseSystem(hp(3, 0, 1, 0, 0), hp(3, 1, 0, 0, 0)),
    "2x3/x3": PiecewiseSystem(hp(3, 2, 0, 0, 0), hp(3, 1, 0, 0, 0)),
}

# hand-frozen first obstructions (exponent, rational part, pi multiple)
KNOWN_OBSTRUCTIONS = {
    "x2y/y3": (1, F(2), F(0)),
    "x2y/y3:2": (2, F(0), F(27, 16)),
    "x2y2/y4": (2, F(0), F(-2)),
    "x2y2/-y4:3": (4, F(0), F(31, 24)),
    "x4/x2y": (1, F(2), F(0)),
    "x4/xy2": (2, F(0), F(-3, 4)),
    "x4/x4y": (2, F(0), F(-3, 2)),
    "x3/x3": (2, F(0), F(15, 2)),
}


@pytest.fixture(scope="session")
def center_suite():
    return CENTER_SUITE


@pytest.fixture(scope="session")
def noncenter_suite():
    return NONCENTER_SUITE
