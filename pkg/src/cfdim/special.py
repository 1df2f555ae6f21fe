"""High precision zeta values, tail sums, and pole-side approximations.

Everything runs through mpmath at a pinned working precision (50 digits
minimum). One Euler-Maclaurin routine serves both the full series and
its tails: partial sum up to a cutoff N, then

    N^(1-z)/(z-1) + N^(-z)/2 + sum_j B_{2j}/(2j)! (z)_{2j-1} N^(-z-2j+1)

through B_8, with the first omitted correction (the B_10 term) as a
computable remainder bound.  The cutoff starts at max(start, 64) and
doubles until that bound clears the requested tolerance with slack; at
the closest admitted approach to the pole (z = 1 + 2e-9) the bound is
already below 1e-20 at N = 64, so the doubling loop is quiescent in
ordinary use.

mpmath precision state is process global.  These functions set it only
via workdps around whole computations at one fixed value, so concurrent
calls at the same context are harmless, but callers must not interleave
them with mpmath work at a different precision on other threads.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import DivergenceError, DomainError, PoleProximityError

__all__ = [
    "PrecisionContext",
    "DEFAULT_CONTEXT",
    "euler_gamma",
    "zeta",
    "zeta_tail",
    "tail_integral_approx",
    "laurent_zeta_approx",
]

# 30-digit reference value; nothing downstream needs the constant beyond
# that accuracy
_EULER_GAMMA_30 = "0.577215664901532860606512090082"


@dataclass(frozen=True)
class PrecisionContext:
    """Accuracy goal (absolute) and internal working precision in digits."""

    target_abs_tol: float = 1e-12
    working_digits: int = 50

    def __post_init__(self):
        if not self.target_abs_tol > 0:
            raise DomainError("target_abs_tol must be positive")
        if not (isinstance(self.working_digits, int) and self.working_digits >= 30):
            raise DomainError("working_digits must be an integer >= 30")


DEFAULT_CONTEXT = PrecisionContext()


def _dps(ctx):
    # never drop below 50 digits: cancellation near the pole at z = 1
    return max(50, ctx.working_digits)


def as_real(x, what="value"):
    """Coerce int/float/str/Fraction/mpf to mpf at the current precision."""
    if isinstance(x, bool):
        raise DomainError("expected a real %s, got a boolean" % what)
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    try:
        return mpf(x)
    except (TypeError, ValueError):
        raise DomainError("cannot interpret %r as a real %s" % (x, what))


def euler_gamma(ctx=DEFAULT_CONTEXT):
    """Euler-Mascheroni constant from the stored 30-digit reference."""
    with mp.workdps(_dps(ctx)):
        return +mpf(_EULER_GAMMA_30)


_BERNOULLI = (Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30))
_NEXT_BERNOULLI = Fraction(5, 66)
_FACTORIAL = {2: 2, 4: 24, 6: 720, 8: 40320, 10: 3628800}


def _tail_correction(n0, z):
    # Euler-Maclaurin value of sum_{k >= n0} k^(-z)
    n0 = mpf(n0)
    total = n0 ** (1 - z) / (z - 1) + n0 ** (-z) / 2
    rising = z  # rising factorial (z)_{2j-1}, extended two factors per step
    for j, b in enumerate(_BERNOULLI, start=1):
        coeff = mpf(b.numerator) / b.denominator / _FACTORIAL[2 * j]
        total += coeff * rising * n0 ** (-z - 2 * j + 1)
        rising *= (z + 2 * j - 1) * (z + 2 * j)
    return total


def _remainder_bound(n0, z):
    # magnitude of the first omitted (B_10) correction term
    rising = mpf(1)
    for i in range(9):
        rising *= z + i
    scale = mpf(_NEXT_BERNOULLI.numerator) / _NEXT_BERNOULLI.denominator
    return abs(scale / _FACTORIAL[10] * rising * mpf(n0) ** (-z - 9))


def _series_from(start, z, ctx):
    cutoff = max(64, start)
    goal = mpf(ctx.target_abs_tol) / 8
    while _remainder_bound(cutoff, z) > goal:
        cutoff *= 2
        if cutoff > 1 << 40:
            raise DomainError(
                "tolerance %g is unreachable with B_8 corrections at z = %s"
                % (ctx.target_abs_tol, z)
            )
    head = mp.fsum(mpf(k) ** (-z) for k in range(start, cutoff))
    return head + _tail_correction(cutoff, z)


def _check_exponent(zm):
    if not mpmath.isfinite(zm):
        raise DomainError("exponent must be a finite real, got %s" % zm)
    if zm <= 1 + mpf("1e-9"):
        raise PoleProximityError(
            "z = %s is at or inside the guard window around the pole at 1 "
            "(need z > 1 + 1e-9)" % zm
        )


def zeta(z, ctx=DEFAULT_CONTEXT):
    """Riemann zeta on the real ray z > 1 + 1e-9, within ctx.target_abs_tol."""
    with mp.workdps(_dps(ctx)):
        zm = as_real(z, "exponent")
        _check_exponent(zm)
        return +_series_from(1, zm, ctx)


def zeta_tail(start, z, ctx=DEFAULT_CONTEXT):
    """Sum of k^(-z) over k >= start; same domain and accuracy as zeta."""
    if not isinstance(start, int) or isinstance(start, bool) or start < 1:
        raise DomainError("start must be an integer >= 1, got %r" % (start,))
    with mp.workdps(_dps(ctx)):
        zm = as_real(z, "exponent")
        _check_exponent(zm)
        return +_series_from(start, zm, ctx)


def tail_integral_approx(start, s, ctx=DEFAULT_CONTEXT):
    """Integral of x^(-2s) over [start, inf): start^(1-2s)/(2s-1)."""
    if not isinstance(start, int) or isinstance(start, bool) or start < 1:
        raise DomainError("start must be an integer >= 1, got %r" % (start,))
    with mp.workdps(_dps(ctx)):
        sm = as_real(s, "exponent")
        if not sm > mpf(1) / 2:
            raise DivergenceError("the tail integral diverges for s <= 1/2")
        return +(mpf(start) ** (1 - 2 * sm) / (2 * sm - 1))


def laurent_zeta_approx(delta, ctx=DEFAULT_CONTEXT):
    """Two-term pole expansion 1/(2 delta) + gamma, approximating zeta(1+2 delta)."""
    with mp.workdps(_dps(ctx)):
        d = as_real(delta, "delta")
        if not 0 < d <= mpf(1) / 2:
            raise DomainError("delta must lie in (0, 1/2], got %s" % d)
        return +(1 / (2 * d) + mpf(_EULER_GAMMA_30))
