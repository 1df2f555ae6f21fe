"""Covering machinery for continued fractions with a floor on even-position digits.

The sets under study fix a floor M for the digits at even positions and
leave odd positions free.  Level intervals J(a_1,...,a_{2n-1}) are the
unions of all order-2n cylinders whose even digit runs over [M, inf);
their exact lengths drive covering sums whose convergence at exponent s
is governed by the per-level factor

    (1 + 1/M)^s zeta(2s) sum_{k >= M} k^(-2s).

The critical exponent is the root of factor = 1 (pure bisection), and
the asymptotic form 1/2 + (log log M - log 2)/log M describes its
large-M behavior.  reference_bounds evaluates the classical dimension
windows (Jarnik, Kurzweil, Hensley, Good, Jaerisch-Kessebohmer) for
cross-checking.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import product
from typing import NamedTuple

from mpmath import mp, mpf

from .cfcore import as_word, evaluate
from .errors import DivergenceError, DomainError, ResourceCapError
from .special import DEFAULT_CONTEXT, as_real, zeta, zeta_tail

__all__ = [
    "CriticalSolveResult",
    "ReferenceBounds",
    "j_interval_length",
    "recursion_factor",
    "per_level_factor",
    "critical_exponent",
    "asymptotic_exponent",
    "covering_sum_enumerated",
    "reference_bounds",
]

_BISECTION_LIMIT = 200
_LEVEL_CAP = 3
_DIGIT_CAP = 50


def _check_floor(m_floor, minimum=1):
    if not isinstance(m_floor, int) or isinstance(m_floor, bool) or m_floor < minimum:
        raise DomainError("digit floor must be an integer >= %d, got %r" % (minimum, m_floor))


def j_interval_length(word, m_floor):
    """Exact length of the union of cylinders extending an odd word by a digit >= m_floor.

    The union telescopes to the interval between the word's value and
    the value of the word extended by m_floor itself, so the length is
    |evaluate(w + [m_floor]) - evaluate(w)| as an exact rational.
    """
    digits = as_word(word)
    if len(digits) % 2 == 0:
        raise DomainError("word must have odd length, got %d digits" % len(digits))
    _check_floor(m_floor)
    return abs(evaluate(digits + (m_floor,)) - evaluate(digits))


def recursion_factor(a_odd, a_even, m_floor):
    """Per-step factor (M+1)/(M a_odd^2 a_even^2) bounding J-length decay, exact."""
    _check_floor(m_floor)
    if not isinstance(a_odd, int) or a_odd < 1:
        raise DomainError("odd-position digit must be an integer >= 1")
    if not isinstance(a_even, int) or a_even < m_floor:
        raise DomainError("even-position digit must be an integer >= the floor %d" % m_floor)
    return Fraction(m_floor + 1, m_floor * a_odd * a_odd * a_even * a_even)


def per_level_factor(m_floor, s, ctx=DEFAULT_CONTEXT):
    """(1+1/M)^s zeta(2s) zeta_tail(M, 2s); the covering sum contracts when < 1."""
    _check_floor(m_floor, 2)
    with mp.workdps(max(50, ctx.working_digits)):
        sm = as_real(s, "exponent")
        if not sm > mpf(1) / 2:
            raise DivergenceError("the level sums diverge for s <= 1/2")
        z = 2 * sm
        base = (1 + mpf(1) / m_floor) ** sm
        return +(base * zeta(z, ctx) * zeta_tail(m_floor, z, ctx))


class CriticalSolveResult(NamedTuple):
    m_floor: int
    s_star: object  # mpf when converged, else None
    residual: object
    bracket: tuple
    iterations: int
    converged: bool
    message: str = ""


def critical_exponent(m_floor, tol=1e-12, s_max=2, ctx=DEFAULT_CONTEXT):
    """Root of per_level_factor(M, s) = 1 by bisection on (1/2 + 1e-9, s_max].

    The factor blows up at s = 1/2+ and is numerically strictly
    decreasing, so plain bisection is safe; no Newton step is taken.
    Stops when |factor - 1| <= tol.  When the factor is still above 1
    at s_max there is no root in the bracket and the result says so
    (converged False) instead of raising.
    """
    _check_floor(m_floor, 2)
    if not tol > 0:
        raise DomainError("tol must be positive")
    with mp.workdps(max(50, ctx.working_digits)):
        lo = mpf("0.5") + mpf("1e-9")
        hi = as_real(s_max, "s_max")
        if not lo < hi <= 8:
            raise DomainError("s_max must lie in (0.5 + 1e-9, 8]")
        tol_m = mpf(tol)
        f_hi = per_level_factor(m_floor, hi, ctx)
        if f_hi > 1:
            return CriticalSolveResult(
                m_floor, None, None, (lo, hi), 0, False,
                "factor is %s > 1 at s_max = %s; no root in the bracket "
                "(the covering bound is vacuous here)" % (mp.nstr(f_hi, 8), mp.nstr(hi, 8)),
            )
        f_lo = per_level_factor(m_floor, lo, ctx)
        if f_lo < 1:
            return CriticalSolveResult(
                m_floor, None, None, (lo, hi), 0, False,
                "factor is already below 1 at the left bracket edge",
            )
        for i in range(1, _BISECTION_LIMIT + 1):
            mid = (lo + hi) / 2
            val = per_level_factor(m_floor, mid, ctx)
            res = abs(val - 1)
            if res <= tol_m:
                return CriticalSolveResult(m_floor, +mid, +res, (+lo, +hi), i, True)
            if val > 1:
                lo = mid
            else:
                hi = mid
        return CriticalSolveResult(
            m_floor, None, +res, (+lo, +hi), _BISECTION_LIMIT, False,
            "residual did not reach %g within %d bisections" % (tol, _BISECTION_LIMIT),
        )


def asymptotic_exponent(m_floor, ctx=DEFAULT_CONTEXT):
    """Large-M form of the critical exponent: 1/2 + (log log M - log 2)/log M."""
    _check_floor(m_floor, 3)
    with mp.workdps(max(50, ctx.working_digits)):
        x = mpf(m_floor)
        return +(mpf(1) / 2 + (mp.log(mp.log(x)) - mp.log(2)) / mp.log(x))


def _level_word_lengths(first_digit, m_floor, levels, digit_cap):
    # exact J-lengths of all words with the given first digit, lex order
    length = 2 * levels - 1
    ranges = []
    for pos in range(2, length + 1):
        if pos % 2 == 0:
            ranges.append(range(m_floor, digit_cap + 1))
        else:
            ranges.append(range(1, digit_cap + 1))
    out = []
    for rest in product(*ranges):
        w = (first_digit,) + rest
        out.append(abs(evaluate(w + (m_floor,)) - evaluate(w)))
    return out


def covering_sum_enumerated(m_floor, s, levels, digit_cap, threads=1, ctx=DEFAULT_CONTEXT):
    """Sum of |J(a_1, ..., a_{2 levels - 1})|^s over digits capped at digit_cap.

    Odd positions run over [1, cap], even positions over [m_floor, cap].
    J-lengths are exact rationals; only the final powers and their sum
    are floating point.  Enumeration fans out per first digit: worker
    threads do the exact-rational part only, and all mpf arithmetic
    happens on the calling thread in first-digit order, so the output
    is bit-identical for every thread count.

    The caps (levels <= 3, digit_cap <= 50) bound the request shape,
    not the runtime; the largest admitted grid is ~3*10^8 words and
    takes hours, so keep digit_cap modest at levels = 3.
    """
    _check_floor(m_floor)
    if not isinstance(levels, int) or levels < 1:
        raise DomainError("levels must be an integer >= 1")
    if levels > _LEVEL_CAP:
        raise ResourceCapError("level cap is %d, got %d" % (_LEVEL_CAP, levels))
    if not isinstance(digit_cap, int) or digit_cap < m_floor:
        raise DomainError("digit cap must be an integer >= the floor %d" % m_floor)
    if digit_cap > _DIGIT_CAP:
        raise ResourceCapError("digit cap is %d, got %d" % (_DIGIT_CAP, digit_cap))
    if not isinstance(threads, int) or threads < 1:
        raise DomainError("threads must be an integer >= 1")
    with mp.workdps(max(50, ctx.working_digits)):
        sm = as_real(s, "exponent")
        if not sm > 0:
            raise DomainError("exponent s must be positive")
        firsts = range(1, digit_cap + 1)
        if threads == 1:
            buckets = (_level_word_lengths(a, m_floor, levels, digit_cap) for a in firsts)
            total = mpf(0)
            for bucket in buckets:
                for frac in bucket:
                    total += (mpf(frac.numerator) / frac.denominator) ** sm
            return +total
        with ThreadPoolExecutor(max_workers=threads) as pool:
            buckets = pool.map(
                lambda a: _level_word_lengths(a, m_floor, levels, digit_cap), firsts
            )
            total = mpf(0)
            for bucket in buckets:
                for frac in bucket:
                    total += (mpf(frac.numerator) / frac.denominator) ** sm
            return +total


class ReferenceBounds(NamedTuple):
    m_floor: int
    jarnik_lo: object
    jarnik_hi: object
    kurzweil_lo: object
    kurzweil_hi: object
    hensley: object
    good_f_lo: object
    good_f_hi: object
    jk_asymptotic: object
    applicable: dict


def reference_bounds(m_floor, ctx=DEFAULT_CONTEXT):
    """The classical dimension windows, evaluated wherever they are defined.

    Applicability flags carry each formula's stated M-range (Jarnik
    M >= 8, Kurzweil M >= 1000, Good M >= 20); out-of-range values are
    still computed.  good_f_hi needs log log(M-1), so it is None at
    M = 2.
    """
    _check_floor(m_floor, 2)
    with mp.workdps(max(50, ctx.working_digits)):
        m = mpf(m_floor)
        log2 = mp.log(2)
        jarnik_lo = 1 - 4 / (m * log2)
        jarnik_hi = 1 - 1 / (8 * m * mp.log(m))
        kurzweil_lo = 1 - mpf("0.99") / m
        kurzweil_hi = 1 - mpf("0.25") / m
        hensley = 1 - (6 / mp.pi ** 2) / m - (72 / mp.pi ** 4) * mp.log(m) / m ** 2
        good_f_lo = mpf(1) / 2 + 1 / (2 * mp.log(m + 2))
        good_f_hi = None
        if m_floor >= 3:
            good_f_hi = +(mpf(1) / 2 + mp.log(mp.log(m - 1)) / (2 * mp.log(m - 1)))
        jk = mpf(1) / 2 + mp.log(mp.log(m)) / (2 * mp.log(m))
        return ReferenceBounds(
            m_floor,
            +jarnik_lo, +jarnik_hi,
            +kurzweil_lo, +kurzweil_hi,
            +hensley,
            +good_f_lo, good_f_hi,
            +jk,
            {
                "jarnik": m_floor >= 8,
                "kurzweil": m_floor >= 1000,
                "good": m_floor >= 20,
            },
        )
