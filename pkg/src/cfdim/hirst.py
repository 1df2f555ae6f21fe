"""Dimension values for digit-restricted sets and the covering condition behind them.

For an infinite digit set D the dimension along a sparse constrained
sequence is tau(D)/2, with tau the convergence exponent of D.  The
upper-bound half rests on a covering condition: with z = tau(1+eps) and
e = 1/(upper density - eps) - 1,

    (sum_{a in D} a^-z)^e * (sum_{a in D, a >= M} a^-z) <= 1

must hold at the chosen floor M.  The sums are evaluated analytically
(zeta and geometric closed forms; direct sums for finite lists), never
by adding terms up to M, because the interesting M sit near 10^12.
"""

from fractions import Fraction
from typing import NamedTuple

from mpmath import mp, mpf

from .cfcore import as_word
from .construction import exact_positive_fraction
from .errors import DivergenceError, DomainError
from .sequences import tau
from .special import DEFAULT_CONTEXT, as_real, zeta, zeta_tail

__all__ = [
    "HirstDimension",
    "M0Condition",
    "FloorEstimate",
    "DichotomyResult",
    "digit_power_sum",
    "digit_tail_power_sum",
    "hirst_dimension",
    "covering_condition",
    "estimate_condition_floor",
    "covering_product_bound",
    "dimension_dichotomy",
]

_FLOOR_CAP = 10 ** 18


def _reject_window(digits):
    if digits.kind == "explicit" and digits.assume_infinite:
        raise DomainError(
            "a truncated window of an infinite digit set has no certified sums; "
            "drop assume_infinite or use a rule set"
        )


def digit_power_sum(digits, z, ctx=DEFAULT_CONTEXT):
    """sum over a in D of a^-z, by closed form; raises when it diverges."""
    _reject_window(digits)
    with mp.workdps(max(50, ctx.working_digits)):
        zm = as_real(z, "exponent")
        if digits.kind in ("all", "geq"):
            if not zm > 1:
                raise DivergenceError("sum of a^-z over an integer ray needs z > 1")
            start = 1 if digits.kind == "all" else digits.params[0]
            return zeta_tail(start, zm, ctx) if start > 1 else zeta(zm, ctx)
        if digits.kind == "square":
            if not 2 * zm > 1:
                raise DivergenceError("sum over squares needs z > 1/2")
            return zeta(2 * zm, ctx)
        if digits.kind == "pow":
            if not zm > 0:
                raise DivergenceError("geometric digit sum needs z > 0")
            t = mp.power(digits.params[0], -zm)
            return +(t / (1 - t))
        return +mp.fsum(mp.power(a, -zm) for a in digits.values)


def digit_tail_power_sum(digits, floor_m, z, ctx=DEFAULT_CONTEXT):
    """sum over a in D with a >= floor_m of a^-z, by closed form."""
    _reject_window(digits)
    if not isinstance(floor_m, int) or floor_m < 1:
        raise DomainError("floor must be an integer >= 1")
    with mp.workdps(max(50, ctx.working_digits)):
        zm = as_real(z, "exponent")
        if digits.kind in ("all", "geq"):
            if not zm > 1:
                raise DivergenceError("tail of a^-z over an integer ray needs z > 1")
            start = floor_m if digits.kind == "all" else max(floor_m, digits.params[0])
            return zeta_tail(start, zm, ctx)
        if digits.kind == "square":
            if not 2 * zm > 1:
                raise DivergenceError("tail over squares needs z > 1/2")
            from math import isqrt

            j0 = 1 if floor_m <= 1 else isqrt(floor_m - 1) + 1
            return zeta_tail(j0, 2 * zm, ctx)
        if digits.kind == "pow":
            if not zm > 0:
                raise DivergenceError("geometric digit tail needs z > 0")
            b = digits.params[0]
            j0, v = 1, b
            while v < floor_m:
                j0 += 1
                v *= b
            t = mp.power(b, -zm)
            return +(mp.power(b, -j0 * zm) / (1 - t))
        return +mp.fsum(mp.power(a, -zm) for a in digits.values if a >= floor_m)


class HirstDimension(NamedTuple):
    value: object  # Fraction when analytic, float when estimated
    method: str
    warning: str = ""


def hirst_dimension(digits, ctx=DEFAULT_CONTEXT):
    """tau(D)/2, the dimension of the set with digits from D at sparse positions."""
    t = tau(digits, ctx)
    return HirstDimension(t.value / 2, t.method, t.warning)


def _analytic_pieces(digits, seq, eps):
    """Shared preconditions: returns (eps, z, exponent e) as exact Fractions."""
    eps = exact_positive_fraction(eps, "eps")
    dbar = seq.exact_upper_density
    if dbar is None:
        raise DomainError(
            "the sequence %s has no analytic upper density; the condition's "
            "exponent cannot be certified" % seq.spec_string()
        )
    if dbar == 0:
        raise DomainError(
            "the condition needs a sequence of positive upper density; "
            "%s has density 0" % seq.spec_string()
        )
    if not eps < dbar:
        raise DomainError(
            "eps must lie strictly below the upper density %s, got %s" % (dbar, eps)
        )
    t = tau(digits)
    if t.method != "analytic":
        raise DomainError(
            "estimated convergence exponents cannot certify the condition; "
            "use a rule digit set (all, geq:M, square, pow:b) or a finite list"
        )
    if t.value == 0 and not digits.is_finite:
        raise DivergenceError(
            "tau = 0 on an infinite digit set makes the full sum diverge"
        )
    z = t.value * (1 + eps)
    e = 1 / (dbar - eps) - 1
    return eps, z, e


class M0Condition(NamedTuple):
    lhs: object  # mpf
    ok: bool


def covering_condition(digits, seq, eps, m_floor, ctx=DEFAULT_CONTEXT):
    """Evaluate (full sum)^e * (tail sum at m_floor) and compare with 1."""
    if not isinstance(m_floor, int) or m_floor < 1:
        raise DomainError("the digit floor must be an integer >= 1")
    eps, z, e = _analytic_pieces(digits, seq, eps)
    with mp.workdps(max(50, ctx.working_digits)):
        full = digit_power_sum(digits, z, ctx)
        tail = digit_tail_power_sum(digits, m_floor, z, ctx)
        lhs = +(mp.power(full, mpf(e.numerator) / e.denominator) * tail)
        return M0Condition(lhs, bool(lhs <= 1))


class FloorEstimate(NamedTuple):
    value: object  # int, or None when the estimate leaves the integer range
    lhs: object
    ok: bool
    exceeded: bool


def estimate_condition_floor(digits, seq, eps, ctx=DEFAULT_CONTEXT):
    """Invert the tail's integral form to estimate the least workable floor.

    The closed-form inversion is bumped by a hair (the integral form
    slightly undershoots the true tail), verified through
    covering_condition, and doubled until the condition holds.  Floors
    beyond 10^18 are reported as exceeded rather than returned.
    """
    eps, z, e = _analytic_pieces(digits, seq, eps)
    with mp.workdps(max(50, ctx.working_digits)):
        full = digit_power_sum(digits, z, ctx)
        thr = mp.power(full, -mpf(e.numerator) / e.denominator)
        zf = mpf(z.numerator) / z.denominator
        if digits.kind in ("all", "geq"):
            est = mp.power((zf - 1) * thr, -1 / (zf - 1))
            if digits.kind == "geq":
                est = max(est, mpf(digits.params[0]))
        elif digits.kind == "square":
            r = mp.power((2 * zf - 1) * thr, -1 / (2 * zf - 1))
            est = r * r
        elif digits.kind == "pow":
            b = digits.params[0]
            t = mp.power(b, -zf)
            j0 = mp.ceil(mp.log(1 / (thr * (1 - t))) / (zf * mp.log(b)))
            est = mp.power(b, max(j0, 1))
        else:
            acc = mpf(0)
            est = mpf(digits.values[-1] + 1)
            for a in reversed(digits.values):
                nxt = acc + mp.power(a, -zf)
                if nxt > thr:
                    break
                acc = nxt
                est = mpf(a)
        if est > _FLOOR_CAP:
            return FloorEstimate(None, None, False, True)
        m = max(1, int(mp.ceil(est * (1 + mpf("1e-9")))))
        while True:
            res = covering_condition(digits, seq, eps, m, ctx)
            if res.ok:
                return FloorEstimate(m, res.lhs, True, False)
            if m > _FLOOR_CAP // 2:
                return FloorEstimate(None, res.lhs, False, True)
            m *= 2


def covering_product_bound(digits, seq, m_floor, s, level_base, level, prefix,
                           ctx=DEFAULT_CONTEXT):
    """Product bound on the covering sum between two constrained levels.

    With k_N and k_n the positions of constrained digits number
    level_base and level, the words in between have (k_n - k_N) - (n - N)
    free positions (each contributing the full digit sum at exponent 2s)
    and n - N constrained ones (each contributing the tail sum at the
    floor).  The prefix must reach exactly to position k_N with digits
    from D; its own weight multiplies the product.
    """
    _reject_window(digits)
    if not isinstance(m_floor, int) or m_floor < 1:
        raise DomainError("the digit floor must be an integer >= 1")
    if not isinstance(level_base, int) or level_base < 0:
        raise DomainError("the base level must be an integer >= 0")
    if not isinstance(level, int) or level <= level_base:
        raise DomainError("the target level must exceed the base level")
    word = as_word(prefix)
    k_base = seq.nth(level_base) if level_base >= 1 else 0
    k_top = seq.nth(level)
    if len(word) != k_base:
        raise DomainError(
            "prefix must have length %d (position of constrained digit %d), got %d"
            % (k_base, level_base, len(word))
        )
    for a in word:
        if a not in digits:
            raise DomainError("prefix digit %d is outside the digit set" % a)
    t = tau(digits)
    if t.method != "analytic":
        raise DomainError(
            "estimated convergence exponents cannot certify the product bound"
        )
    with mp.workdps(max(50, ctx.working_digits)):
        sm = as_real(s, "exponent")
        half_tau = mpf(t.value.numerator) / (2 * t.value.denominator)
        if not sm > half_tau:
            raise DivergenceError(
                "the level sums diverge for s <= tau/2 = %s" % mp.nstr(half_tau, 8)
            )
        z = 2 * sm
        full = digit_power_sum(digits, z, ctx)
        tail = digit_tail_power_sum(digits, m_floor, z, ctx)
        free_exp = (k_top - k_base) - (level - level_base)
        head = mpf(1)
        for a in word:
            head *= mp.power(a, -z)
        return +(head * mp.power(full, free_exp) * mp.power(tail, level - level_base))


class DichotomyResult(NamedTuple):
    dim: Fraction
    branch: str


def dimension_dichotomy(seq):
    """1/2 when the constrained positions have positive upper density, 1 at density 0."""
    dbar = seq.exact_upper_density
    if dbar is None:
        raise DomainError(
            "no analytic density certificate for %s; the dichotomy needs one"
            % seq.spec_string()
        )
    if dbar > 0:
        return DichotomyResult(Fraction(1, 2), "positive-upper-density")
    return DichotomyResult(Fraction(1), "zero-upper-density")
