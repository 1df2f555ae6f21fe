"""Exact continued fraction arithmetic for finite digit words.

Words are tuples of positive integer partial quotients a_1..a_n and
stand for [0; a_1, ..., a_n].  Everything here runs on integers and
``fractions.Fraction`` so downstream inequality checks never see
rounding error.  Convergents follow the standard recurrence

    p_k = a_k p_{k-1} + p_{k-2},   q_k = a_k q_{k-1} + q_{k-2}

seeded with p_-1 = 1, p_0 = 0, q_-1 = 0, q_0 = 1.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import BoundaryAmbiguityError, DomainError

__all__ = [
    "PartialQuotients",
    "Convergent",
    "Cylinder",
    "QuotientRatioCheck",
    "as_word",
    "expand_rational",
    "expand_decimal",
    "evaluate",
    "convergents",
    "continuant",
    "cylinder",
    "normalize",
    "delete_indices",
    "quotient_ratio_check",
]


def _digit_tuple(digits):
    out = []
    for a in digits:
        if not isinstance(a, int) or isinstance(a, bool) or a < 1:
            raise DomainError("partial quotients must be integers >= 1, got %r" % (a,))
        out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class PartialQuotients:
    """A finite word of partial quotients, all at least 1.

    Thin immutable wrapper over a tuple; most functions in this module
    accept either this type or any iterable of ints.
    """

    digits: tuple

    def __init__(self, digits=()):
        object.__setattr__(self, "digits", _digit_tuple(digits))

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __bool__(self):
        return bool(self.digits)

    def extended(self, *extra):
        return PartialQuotients(self.digits + _digit_tuple(extra))

    @classmethod
    def from_text(cls, text):
        """Parse a comma separated digit list, e.g. ``"2,1,4"``."""
        text = text.strip()
        if not text:
            return cls(())
        parts = [p.strip() for p in text.split(",")]
        if any(not re.fullmatch(r"\d+", p) for p in parts):
            raise DomainError("word must be comma separated positive integers: %r" % text)
        return cls(int(p) for p in parts)

    def to_text(self):
        return ",".join(str(a) for a in self.digits)

    def __repr__(self):
        return "PartialQuotients([%s])" % self.to_text()


def as_word(w):
    """Coerce a PartialQuotients or iterable of ints to a validated tuple."""
    if isinstance(w, PartialQuotients):
        return w.digits
    return _digit_tuple(w)


class Convergent(NamedTuple):
    p: int
    q: int


class QuotientRatioCheck(NamedTuple):
    lower: Fraction
    ratio: Fraction
    upper: Fraction
    ok: bool


def _convergent_rows(digits):
    # yields (p_k, q_k, p_{k-1}, q_{k-1}) for k = 1..n
    p_prev, q_prev = 1, 0
    p, q = 0, 1
    for a in digits:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q, p_prev, q_prev


def _final_row(digits):
    row = (0, 1, 1, 0)
    for row in _convergent_rows(digits):
        pass
    return row


def convergents(word):
    """All convergents (p_k, q_k) for k = 1..n, as exact integers."""
    return [Convergent(p, q) for p, q, _, _ in _convergent_rows(as_word(word))]


def continuant(word):
    """The denominator q_n of the word's final convergent (q of () is 1)."""
    return _final_row(as_word(word))[1]


def evaluate(word):
    """Exact value of [0; a_1, ..., a_n] as a Fraction; the word must be nonempty."""
    digits = as_word(word)
    if not digits:
        raise DomainError("evaluate needs a nonempty word")
    p, q, _, _ = _final_row(digits)
    return Fraction(p, q)


def expand_rational(x):
    """Digits of a rational x in (0,1), last digit >= 2 by convention.

    Accepts a Fraction, an (int, int) pair, or a string like "7/10".
    Floats are rejected, their binary rounding would silently change
    the expansion.
    """
    if isinstance(x, float):
        raise DomainError("refusing float input, pass an exact rational ('p/q' or Fraction)")
    if isinstance(x, tuple):
        x = Fraction(x[0], x[1])
    else:
        x = Fraction(x)
    if not 0 < x < 1:
        raise DomainError("expand_rational needs 0 < x < 1, got %s" % x)
    digits = []
    p, q = x.numerator, x.denominator
    while p:
        a, r = divmod(q, p)
        digits.append(a)
        p, q = r, p
    # Euclid on a reduced fraction cannot end in 1 (a trailing 1 would
    # mean the previous remainder equalled the divisor), but normalize
    # defensively so the uniqueness convention is a guarantee.
    return normalize(digits)


def normalize(word):
    """Rewrite a trailing digit 1 via [..., a, 1] = [..., a+1]."""
    digits = as_word(word)
    if len(digits) >= 2 and digits[-1] == 1:
        return PartialQuotients(digits[:-2] + (digits[-2] + 1,))
    return PartialQuotients(digits)


_DECIMAL_RE = re.compile(r"(?:0)?\.(\d+)")


def expand_decimal(text, max_digits=None):
    """Digits certain for every number within half an ulp of a decimal literal.

    The input "0.318" stands for the interval [0.3175, 0.3185); the
    returned word is the common prefix of the expansions of everything
    in that interval.  With ``max_digits`` set, failing to certify that
    many digits raises BoundaryAmbiguityError (carrying the digits that
    are certain); otherwise the certain prefix is returned, possibly
    empty.
    """
    m = _DECIMAL_RE.fullmatch(text.strip())
    if not m:
        raise DomainError("expected a decimal literal like '0.318', got %r" % text)
    frac = m.group(1)
    v = Fraction(int(frac), 10 ** len(frac))
    half = Fraction(1, 2 * 10 ** len(frac))
    lo, hi = v - half, v + half
    if lo <= 0 or hi >= 1:
        raise DomainError("value together with its half-ulp uncertainty must stay inside (0,1)")

    digits = []
    while True:
        # digit of x is floor(1/x); on [lo, hi] the candidates are
        # bracketed by the endpoint reciprocals
        inv_hi = 1 / hi
        inv_lo = 1 / lo
        a_min = inv_hi.numerator // inv_hi.denominator
        a_max = inv_lo.numerator // inv_lo.denominator
        ambiguous = a_min != a_max or inv_hi == a_min
        # inv_hi == a_min: the right endpoint terminates right here, so
        # the interval straddles a cylinder boundary
        if ambiguous:
            word = PartialQuotients(digits)
            if max_digits is not None and len(digits) < max_digits:
                raise BoundaryAmbiguityError(
                    "only %d digit(s) are certain at this precision, %d requested"
                    % (len(digits), max_digits),
                    digits=word,
                )
            return word
        digits.append(a_min)
        if max_digits is not None and len(digits) >= max_digits:
            return PartialQuotients(digits)
        lo, hi = inv_lo - a_min, inv_hi - a_min
        lo, hi = min(lo, hi), max(lo, hi)


@dataclass(frozen=True)
class Cylinder:
    """The interval of numbers in (0,1) whose expansion starts with ``word``.

    Half open; which end is closed alternates with the parity of the
    word length.  ``left``/``right`` are exact Fractions.
    """

    word: PartialQuotients
    left: Fraction
    right: Fraction
    left_closed: bool
    right_closed: bool

    @property
    def length(self):
        return self.right - self.left

    def contains(self, x):
        x = Fraction(x)
        if self.left < x < self.right:
            return True
        if x == self.left:
            return self.left_closed
        if x == self.right:
            return self.right_closed
        return False


def cylinder(word):
    """Cylinder interval of a nonempty word.

    Endpoints are the word's value and the mediant with the previous
    convergent; even length closes the left end, odd length the right.
    The exact length is 1/(q_n (q_n + q_{n-1})).
    """
    digits = as_word(word)
    if not digits:
        raise DomainError("cylinder needs at least one digit")
    p, q, p_prev, q_prev = _final_row(digits)
    v = Fraction(p, q)
    mediant = Fraction(p + p_prev, q + q_prev)
    if len(digits) % 2 == 0:
        return Cylinder(PartialQuotients(digits), v, mediant, True, False)
    return Cylinder(PartialQuotients(digits), mediant, v, False, True)


def delete_indices(word, positions):
    """Remove the digits at the given 1-based positions.

    ``positions`` may be any iterable of ints, or an object exposing
    ``upto(n)`` returning its members at most n (index sequences do).
    """
    digits = as_word(word)
    n = len(digits)
    if hasattr(positions, "upto"):
        raw = positions.upto(n)
    else:
        raw = positions
    drop = set()
    for i in raw:
        if not isinstance(i, int) or isinstance(i, bool):
            raise DomainError("positions must be integers, got %r" % (i,))
        if 1 <= i <= n:
            drop.add(i)
    # positions beyond the word are ignored, not an error
    return PartialQuotients(a for k, a in enumerate(digits, start=1) if k not in drop)


def quotient_ratio_check(word, k):
    """Compare q_n(word) / q_{n-1}(word minus digit k) against (a_k+1)/2 and a_k+1.

    Deleting one digit changes the continuant by a factor tied to that
    digit; this returns the exact ratio and both bounds.
    """
    digits = as_word(word)
    n = len(digits)
    if not 1 <= k <= n:
        raise DomainError("k must be in 1..%d, got %r" % (n, k))
    a_k = digits[k - 1]
    q_full = continuant(digits)
    q_del = continuant(digits[: k - 1] + digits[k:])
    ratio = Fraction(q_full, q_del)
    lower = Fraction(a_k + 1, 2)
    upper = Fraction(a_k + 1)
    return QuotientRatioCheck(lower, ratio, upper, lower <= ratio <= upper)
