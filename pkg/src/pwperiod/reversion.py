"""Reversion of the level-curve equation h^2 = r^2 + 2 a r^(n+1).

The radius of a level curve, as a function of the energy parameter h, has a
power series r = h (1 + sum_j lam_j a^j h^(j(n-1))) whose coefficients lam_j
are polynomials in the degree parameter n with rational coefficients.  This
module computes that table parametrically (``build_coefficient_table``) and,
by a completely separate route, solves the same equation by undetermined
coefficients at a concrete n (``reversion_oracle``).  The two routes are kept
independent on purpose so each can check the other.

Writing u = a h^(n-1) and S(u) = sum_j lam_j u^j, substituting the series
into the level equation and dividing by h^2 gives

    2 S + S^2 + 2 u (1 + S)^(n+1) = 0,

which determines lam_j order by order; the binomial (1 + S)^(n+1) expands
through order u^(j-1) as a finite sum over C(n+1, s) S^s with s < j, and
C(n+1, s) is itself a polynomial in n.  The coefficient of h^(j(n-1)) in the
half-period series in h is then

    ((j(n-1) + 2) / 2) * (2 lam_j + sum_{i1+i2=j} lam_i1 lam_i2),

a polynomial of degree j in n, stored as the period table.  Substituting
h(r0) = r0 (1 + 2 a0 r0^(n-1))^(1/2) stays on the same exponent grid, and the
weight of a0^(j-i) c_i in the coefficient of r0^(j(n-1)) is

    period_i(n) * 2^(j-i) * C(i(n-1)/2, j-i),

stored as the triangular weight table.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence, Union

from .trigmoments import Rational, as_fraction

__all__ = [
    "ParamPoly",
    "CoefficientTable",
    "build_coefficient_table",
    "build_lambda_table",
    "reversion_oracle",
    "check_sparsity",
]


class ParamPoly:
    """Polynomial in the integer degree parameter, with rational coefficients.

    Coefficients are stored lowest power first and trailing zeros are
    trimmed, so equality is structural.  The zero polynomial has degree -1.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Sequence[Rational] = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)

    @classmethod
    def constant(cls, value: Rational) -> "ParamPoly":
        return cls((as_fraction(value),))

    @classmethod
    def variable(cls) -> "ParamPoly":
        return cls((0, 1))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self) -> int:
        return len(self._coeffs) - 1

    def leading_coefficient(self) -> Fraction:
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def __call__(self, n: Rational) -> Fraction:
        n = as_fraction(n)
        out = Fraction(0)
        for c in reversed(self._coeffs):
            out = out * n + c
        return out

    def __add__(self, other) -> "ParamPoly":
        other = _as_poly(other)
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return ParamPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "ParamPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "ParamPoly":
        return _as_poly(other) + (-self)

    def __neg__(self) -> "ParamPoly":
        return ParamPoly(tuple(-c for c in self._coeffs))

    def __mul__(self, other) -> "ParamPoly":
        if isinstance(other, (int, Fraction)):
            return ParamPoly(tuple(c * other for c in self._coeffs))
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return ParamPoly()
        out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                if b:
                    out[i + j] += a * b
        return ParamPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self == ParamPoly((other,))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"ParamPoly({list(self._coeffs)!r})"


def _as_poly(value) -> ParamPoly:
    if isinstance(value, ParamPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return ParamPoly((value,))
    raise TypeError(f"cannot coerce {type(value).__name__} to ParamPoly")


_ZERO = ParamPoly()
_ONE = ParamPoly((1,))


def binom_linear(a: Rational, b: Rational, k: int) -> ParamPoly:
    """Generalized binomial C(a*n + b, k) as a ParamPoly of degree k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    base = ParamPoly((as_fraction(b), as_fraction(a)))
    out = _ONE
    for t in range(k):
        out = out * (base - t)
    return out * Fraction(1, factorial(k))


def _series_mul(a: list[ParamPoly], b: list[ParamPoly], limit: int) -> list[ParamPoly]:
    # truncated product of series indexed by power of u, index 0 .. limit
    out = [_ZERO] * (limit + 1)
    for i, ai in enumerate(a):
        if i > limit or ai.is_zero():
            continue
        for j, bj in enumerate(b):
            if i + j > limit:
                break
            if not bj.is_zero():
                out[i + j] = out[i + j] + ai * bj
    return out


class CoefficientTable:
    """Tables of coefficient polynomials for the level-radius and period series.

    ``radius(j)`` is the polynomial multiplying a^j h^(j(n-1)) in the
    reverted radius series, ``period(j)`` the one multiplying c_j h^(j(n-1))
    in the half-period series in h, and ``weight(j, i)`` the one multiplying
    a0^(j-i) c_i in the coefficient of r0^(j(n-1)) after substituting h(r0).
    Indices are the reduced index j, starting at 1.
    """

    def __init__(self, jmax: int, radius: Sequence[ParamPoly],
                 period: Sequence[ParamPoly],
                 weights: Sequence[Sequence[ParamPoly]]):
        self.jmax = jmax
        self._radius = tuple(radius)
        self._period = tuple(period)
        self._weights = tuple(tuple(row) for row in weights)

    def _check_index(self, j: int) -> None:
        if not 1 <= j <= self.jmax:
            raise IndexError(f"reduced index {j} outside 1..{self.jmax}")

    def radius(self, j: int) -> ParamPoly:
        self._check_index(j)
        return self._radius[j - 1]

    def period(self, j: int) -> ParamPoly:
        self._check_index(j)
        return self._period[j - 1]

    def weight(self, j: int, i: int) -> ParamPoly:
        self._check_index(j)
        if not 1 <= i <= j:
            raise IndexError(f"weight index {i} outside 1..{j}")
        return self._weights[j - 1][i - 1]


@lru_cache(maxsize=None)
def build_coefficient_table(jmax: int = 8) -> CoefficientTable:
    """Build the coefficient tables up to reduced index jmax."""
    if jmax < 1:
        raise ValueError("jmax must be at least 1")
    radius: list[ParamPoly] = [ParamPoly((-1,))]  # reduced index 1
    for j in range(2, jmax + 1):
        # quadratic convolution over i1 + i2 = j with both parts >= 1
        conv = _ZERO
        for i in range(1, j):
            conv = conv + radius[i - 1] * radius[j - i - 1]
        # binomial part: coefficient of u^(j-1) in (1+S)^(n+1), S known so far
        limit = j - 1
        series = [_ZERO] * (limit + 1)
        for i, lam in enumerate(radius, start=1):
            if i <= limit:
                series[i] = lam
        power = [_ONE] + [_ZERO] * limit
        binom_part = _ZERO
        for s in range(1, j):
            power = _series_mul(power, series, limit)
            if power[limit].is_zero():
                continue
            binom_part = binom_part + binom_linear(1, 1, s) * power[limit]
        radius.append((conv + 2 * binom_part) * Fraction(-1, 2))

    period: list[ParamPoly] = []
    for j in range(1, jmax + 1):
        square = _ZERO
        for i in range(1, j):
            square = square + radius[i - 1] * radius[j - i - 1]
        e_j = 2 * radius[j - 1] + square
        # (j(n-1) + 2)/2 as a polynomial in n
        factor = ParamPoly((Fraction(2 - j, 2), Fraction(j, 2)))
        period.append(factor * e_j)

    weights: list[list[ParamPoly]] = []
    for j in range(1, jmax + 1):
        row = []
        for i in range(1, j + 1):
            half_exp = binom_linear(Fraction(i, 2), Fraction(-i, 2), j - i)
            row.append(period[i - 1] * half_exp * Fraction(2 ** (j - i)))
        weights.append(row)

    return CoefficientTable(jmax, radius, period, weights)


def _dict_mul(a: dict[int, Fraction], b: dict[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for pa, ca in a.items():
        for pb, cb in b.items():
            key = pa + pb
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


def _revert_concrete(jmax: int, n: int) -> list[dict[int, Fraction]]:
    """Solve the level equation at concrete n by undetermined coefficients.

    The axis coefficient is kept formal: series coefficients are polynomials
    in a, represented as dicts {power of a: Fraction}.  Entry k-1 of the
    returned list is the coefficient of h^(k+1) in r(h), i.e. beta_k.
    Nothing here assumes the sparsity pattern; it comes out of the solve.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if jmax < 1:
        raise ValueError("jmax must be at least 1")
    klimit = jmax * (n - 1)
    c = n + 1
    betas: list[dict[int, Fraction]] = []                # beta_1 .. beta_klimit
    powers: list[dict[int, Fraction]] = [{0: Fraction(1)}]  # (1+S)^(n+1), coeff of h^k
    for k in range(1, klimit + 1):
        idx = k - (n - 1)
        if idx >= 0 and idx >= len(powers):
            # extend the power series via the logarithmic-derivative recurrence
            for kk in range(len(powers), idx + 1):
                acc: dict[int, Fraction] = {}
                for i in range(1, kk + 1):
                    scale = Fraction((c + 1) * i - kk, kk)
                    for pw, cf in _dict_mul(betas[i - 1], powers[kk - i]).items():
                        acc[pw] = acc.get(pw, Fraction(0)) + scale * cf
                powers.append({p: v for p, v in acc.items() if v != 0})
        rhs: dict[int, Fraction] = {}
        for i in range(1, k):
            for pw, cf in _dict_mul(betas[i - 1], betas[k - i - 1]).items():
                rhs[pw] = rhs.get(pw, Fraction(0)) + cf
        if idx >= 0:
            for pw, cf in powers[idx].items():
                # the 2 a h^(n-1) factor shifts the a power up by one
                rhs[pw + 1] = rhs.get(pw + 1, Fraction(0)) + 2 * cf
        betas.append({pw: -cf / 2 for pw, cf in rhs.items() if cf != 0})
    return betas


def reversion_oracle(jmax: int, n: int) -> list[Fraction]:
    """Independent reversion at concrete n; entry j-1 is beta_{j(n-1)} / a^j.

    Raises ValueError if the solve produces any coefficient off the
    (n-1)-grid, or a grid coefficient whose a-power is not exactly j.
    """
    betas = _revert_concrete(jmax, n)
    out: list[Fraction] = []
    for k, poly in enumerate(betas, start=1):
        if k % (n - 1) != 0:
            if poly:
                raise ValueError(
                    f"reversion produced unexpected off-grid coefficient at h^{k + 1}"
                )
            continue
        j = k // (n - 1)
        stray = [pw for pw in poly if pw != j]
        if stray:
            raise ValueError(
                f"coefficient at h^{k + 1} carries a-powers {sorted(stray)}, expected only {j}"
            )
        out.append(poly.get(j, Fraction(0)))
    return out


def check_sparsity(jmax: int, n: int) -> bool:
    """True when every off-grid coefficient of the reverted series vanishes."""
    betas = _revert_concrete(jmax, n)
    for k, poly in enumerate(betas, start=1):
        if k % (n - 1) != 0 and poly:
            return False
        if k % (n - 1) == 0:
            j = k // (n - 1)
            if any(pw != j for pw in poly):
                return False
    return True


# symbol-style alias for the same operation
build_lambda_table = build_coefficient_table
