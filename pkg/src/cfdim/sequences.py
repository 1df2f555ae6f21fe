"""Index sequences and digit sets.

An IndexSequence is a strictly increasing sequence of positive integers
k_1 < k_2 < ..., given by a rule or an explicit list, together with its
counting function k(n) = #(members <= n).  A DigitSet is a set of
allowed partial quotients with a membership predicate and, for rule
based sets, an exact convergence exponent.

Both are parsed from a small shared spec language:

    even | arith:a0,d | square | pow:b | geq:M | all | file:<path>

where a file holds one integer per line, ascending, at most 10^6
entries.  "geq:M" and "all" are arithmetic rules for index sequences
and primitive rules for digit sets; "even" and "arith" make sense only
as index sequences (no closed-form convergence exponent), so the digit
set parser rejects them.
"""

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

from .errors import DomainError

__all__ = [
    "IndexSequence",
    "DigitSet",
    "DensityReport",
    "TauResult",
    "parse_index_sequence",
    "parse_digit_set",
    "count_k",
    "density",
    "tau",
]

_EXPLICIT_LIMIT = 10 ** 6


def _validated_values(values):
    vals = tuple(values)
    if not vals:
        raise DomainError("explicit list must be nonempty")
    if len(vals) > _EXPLICIT_LIMIT:
        raise DomainError("explicit list capped at %d entries" % _EXPLICIT_LIMIT)
    prev = 0
    for v in vals:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise DomainError("explicit entries must be positive integers, got %r" % (v,))
        if v <= prev:
            raise DomainError("explicit list must be strictly increasing (%d after %d)" % (v, prev))
        prev = v
    return vals


def _load_values(path):
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as e:
        raise DomainError("cannot read %s: %s" % (path, e))
    return _validated_values(int(ln) for ln in lines if ln)


@dataclass(frozen=True)
class IndexSequence:
    """Strictly increasing positive integer sequence with counting function."""

    kind: str
    params: tuple = ()
    values: tuple = ()

    def __post_init__(self):
        if self.kind == "arith":
            a0, d = self.params
            if a0 < 1 or d < 1:
                raise DomainError("arith needs a0 >= 1 and d >= 1")
        elif self.kind == "pow":
            (b,) = self.params
            if b < 2:
                raise DomainError("pow base must be >= 2")
        elif self.kind == "explicit":
            object.__setattr__(self, "values", _validated_values(self.values))
        elif self.kind not in ("even", "square"):
            raise DomainError("unknown index sequence kind %r" % self.kind)

    def nth(self, j):
        """k_j for j >= 1."""
        if j < 1:
            raise DomainError("sequence index starts at 1, got %r" % (j,))
        if self.kind == "even":
            return 2 * j
        if self.kind == "arith":
            a0, d = self.params
            return a0 + (j - 1) * d
        if self.kind == "square":
            return j * j
        if self.kind == "pow":
            return self.params[0] ** j
        if j > len(self.values):
            raise DomainError("explicit sequence has only %d entries" % len(self.values))
        return self.values[j - 1]

    def count(self, n):
        """k(n): how many members are <= n."""
        if n < 0:
            raise DomainError("count needs n >= 0")
        if n == 0:
            return 0
        if self.kind == "even":
            return n // 2
        if self.kind == "arith":
            a0, d = self.params
            return 0 if n < a0 else (n - a0) // d + 1
        if self.kind == "square":
            return isqrt(n)
        if self.kind == "pow":
            b = self.params[0]
            c, v = 0, b
            while v <= n:
                c += 1
                v *= b
            return c
        if n > self.values[-1]:
            raise DomainError(
                "explicit sequence is only known up to %d; count at %d is undetermined"
                % (self.values[-1], n)
            )
        return bisect_right(self.values, n)

    def upto(self, n):
        """Members <= n, ascending (used by digit-deletion)."""
        if self.kind == "explicit":
            return list(self.values[: bisect_right(self.values, n)])
        out = []
        j = 1
        while True:
            v = self.nth(j)
            if v > n:
                return out
            out.append(v)
            j += 1

    def __contains__(self, i):
        if not isinstance(i, int) or i < 1:
            return False
        if self.kind == "even":
            return i % 2 == 0
        if self.kind == "arith":
            a0, d = self.params
            return i >= a0 and (i - a0) % d == 0
        if self.kind == "square":
            return isqrt(i) ** 2 == i
        if self.kind == "pow":
            b = self.params[0]
            v = b
            while v < i:
                v *= b
            return v == i
        idx = bisect_left(self.values, i)
        return idx < len(self.values) and self.values[idx] == i

    def first_at_least(self, v):
        """Least j with k_j >= v."""
        if v <= self.nth(1):
            return 1
        if self.kind == "even":
            return (v + 1) // 2
        if self.kind == "arith":
            a0, d = self.params
            return (v - a0 + d - 1) // d + 1
        if self.kind == "square":
            r = isqrt(v - 1)
            return r + 1
        if self.kind == "pow":
            j = 1
            while self.nth(j) < v:
                j += 1
            return j
        idx = bisect_left(self.values, v)
        if idx >= len(self.values):
            raise DomainError("explicit sequence never reaches %d within its window" % v)
        return idx + 1

    @property
    def exact_density(self):
        """Exact limit of k(n)/n, or None when only a finite window is known."""
        if self.kind == "even":
            return Fraction(1, 2)
        if self.kind == "arith":
            return Fraction(1, self.params[1])
        if self.kind in ("square", "pow"):
            return Fraction(0)
        return None

    # upper density coincides with the limit for every built-in rule
    exact_upper_density = exact_density

    def spec_string(self):
        if self.kind == "even":
            return "even"
        if self.kind == "arith":
            return "arith:%d,%d" % self.params
        if self.kind == "square":
            return "square"
        if self.kind == "pow":
            return "pow:%d" % self.params
        return "explicit:%d-values" % len(self.values)


def parse_index_sequence(text):
    text = text.strip()
    if text == "even":
        return IndexSequence("even")
    if text == "square":
        return IndexSequence("square")
    if text == "all":
        return IndexSequence("arith", (1, 1))
    head, sep, rest = text.partition(":")
    if head == "arith" and sep:
        parts = rest.split(",")
        if len(parts) != 2:
            raise DomainError("arith spec needs two parameters, e.g. arith:3,5")
        try:
            a0, d = int(parts[0]), int(parts[1])
        except ValueError:
            raise DomainError("malformed arith spec %r" % text)
        return IndexSequence("arith", (a0, d))
    if head == "pow" and sep:
        try:
            return IndexSequence("pow", (int(rest),))
        except ValueError:
            raise DomainError("malformed pow spec %r" % text)
    if head == "geq" and sep:
        try:
            m = int(rest)
        except ValueError:
            raise DomainError("malformed geq spec %r" % text)
        if m < 1:
            raise DomainError("geq floor must be >= 1")
        return IndexSequence("arith", (m, 1))
    if head == "file" and sep:
        return IndexSequence("explicit", (), _load_values(rest))
    raise DomainError("unrecognized sequence spec %r" % text)


def count_k(seq, n):
    """Counting function k(n) of an index sequence."""
    return seq.count(n)


class DensityReport(NamedTuple):
    horizon: int
    lower_est: Fraction
    upper_est: Fraction
    exact: object  # Fraction or None
    zero_certified: bool


def density(seq, horizon):
    """Min and max of k(n)/n over the window [horizon/2, horizon].

    The window deliberately excludes small n: limsup and liminf are
    tail quantities and early terms pollute the estimates.
    """
    if not isinstance(horizon, int) or horizon < 100:
        raise DomainError("horizon must be an integer >= 100")
    if seq.kind == "explicit" and horizon > seq.values[-1]:
        raise DomainError(
            "horizon %d exceeds the explicit window (max entry %d)"
            % (horizon, seq.values[-1])
        )
    lo = horizon // 2
    ratios = (Fraction(seq.count(n), n) for n in range(lo, horizon + 1))
    first = next(ratios)
    lower = upper = first
    for r in ratios:
        if r < lower:
            lower = r
        elif r > upper:
            upper = r
    exact = seq.exact_density
    return DensityReport(horizon, lower, upper, exact, exact == 0)


@dataclass(frozen=True)
class DigitSet:
    """Set of allowed partial quotients.

    Rule kinds are infinite by construction.  Explicit lists are finite
    windows; ``assume_infinite`` marks a window as a truncation of an
    infinite set, which turns the convergence exponent into a labeled
    estimate and disables the closed-form sums elsewhere.
    """

    kind: str
    params: tuple = ()
    values: tuple = ()
    assume_infinite: bool = False

    def __post_init__(self):
        if self.kind == "geq":
            if self.params[0] < 1:
                raise DomainError("geq floor must be >= 1")
        elif self.kind == "pow":
            if self.params[0] < 2:
                raise DomainError("pow base must be >= 2")
        elif self.kind == "explicit":
            object.__setattr__(self, "values", _validated_values(self.values))
        elif self.kind not in ("all", "square"):
            raise DomainError("unknown digit set kind %r" % self.kind)

    def contains(self, a):
        if not isinstance(a, int) or a < 1:
            return False
        if self.kind == "all":
            return True
        if self.kind == "geq":
            return a >= self.params[0]
        if self.kind == "square":
            return isqrt(a) ** 2 == a
        if self.kind == "pow":
            b = self.params[0]
            v = b
            while v < a:
                v *= b
            return v == a
        idx = bisect_left(self.values, a)
        return idx < len(self.values) and self.values[idx] == a

    __contains__ = contains

    @property
    def is_finite(self):
        return self.kind == "explicit" and not self.assume_infinite

    def members_upto(self, x):
        """Members <= x in increasing order."""
        if self.kind == "all":
            return list(range(1, x + 1))
        if self.kind == "geq":
            return list(range(self.params[0], x + 1))
        if self.kind == "square":
            return [k * k for k in range(1, isqrt(x) + 1)]
        if self.kind == "pow":
            out, v = [], self.params[0]
            while v <= x:
                out.append(v)
                v *= self.params[0]
            return out
        return list(self.values[: bisect_right(self.values, x)])

    def spec_string(self):
        if self.kind == "all":
            return "all"
        if self.kind == "geq":
            return "geq:%d" % self.params
        if self.kind == "square":
            return "square"
        if self.kind == "pow":
            return "pow:%d" % self.params
        return "explicit:%d-values" % len(self.values)


def parse_digit_set(text, assume_infinite=False):
    text = text.strip()
    if text == "all":
        return DigitSet("all")
    if text == "square":
        return DigitSet("square")
    head, sep, rest = text.partition(":")
    if head == "geq" and sep:
        try:
            return DigitSet("geq", (int(rest),))
        except ValueError:
            raise DomainError("malformed geq spec %r" % text)
    if head == "pow" and sep:
        try:
            return DigitSet("pow", (int(rest),))
        except ValueError:
            raise DomainError("malformed pow spec %r" % text)
    if head == "file" and sep:
        return DigitSet("explicit", (), _load_values(rest), assume_infinite)
    if text in ("even",) or head == "arith":
        raise DomainError(
            "%r has no closed-form convergence exponent; digit sets accept "
            "all, geq:M, square, pow:b, file:<path>" % text
        )
    raise DomainError("unrecognized digit set spec %r" % text)


class TauResult(NamedTuple):
    value: object  # Fraction (analytic) or float (estimated)
    method: str  # "analytic" | "estimated"
    warning: str = ""


def tau(digits, ctx=None):
    """Exponent of convergence of a digit set.

    Closed forms for the rule kinds; explicit finite sets degenerate to
    0 with a warning.  Explicit infinite-intent windows get a log-log
    slope fit of rank against value, labeled "estimated"; it is a
    heuristic and never certifies convergence.
    """
    if digits.kind == "all" or digits.kind == "geq":
        return TauResult(Fraction(1), "analytic")
    if digits.kind == "square":
        return TauResult(Fraction(1, 2), "analytic")
    if digits.kind == "pow":
        return TauResult(Fraction(0), "analytic")
    if digits.is_finite:
        return TauResult(
            Fraction(0),
            "analytic",
            "finite digit set: the convergence exponent degenerates to 0",
        )
    return TauResult(_estimate_tau(digits.values), "estimated",
                     "window estimate; not a convergence certificate")


def _estimate_tau(values):
    # The counting function of a window growing like i^(1/t) satisfies
    # #{v <= T} ~ T^t, so the slope of log(rank) against log(value) is
    # the convergence exponent itself.  A least-squares fit over the
    # window recovers t exactly for pure power growth and degrades
    # gracefully otherwise.
    pts = [(math.log(v), math.log(i))
           for i, v in enumerate(values, start=1) if v >= 2]
    if len(pts) < 2:
        return 0.0
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    var = sum((x - mx) ** 2 for x, _ in pts)
    if var == 0.0:
        return 0.0
    cov = sum((x - mx) * (y - my) for x, y in pts)
    return max(cov / var, 0.0)
