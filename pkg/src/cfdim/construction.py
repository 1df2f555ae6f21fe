"""Schedules, point construction and the inequality checks behind the lower bound.

A step schedule assigns to every constrained position (the j-th member
k_j of an index sequence) a digit value that grows in slow steps: digit
j is the step index of j among the breakpoints n_1 < n_2 < ...  The
breakpoints are chosen so the logarithmic weight of the constrained
digits stays below c1 times the word length; c1 is either given
directly or derived from an exponent eps as eps*log(2)/2.

Everything decision-bearing is exact.  Ratio thresholds with derived c1
reduce to integer power comparisons ((j+1)^(2*ed*k) vs 2^(en*n) for
eps = en/ed), and the size/separation/Holder inequalities are checked
on cross-multiplied integer powers of exact cylinder lengths.  Floats
appear only as display values and as a prefilter that hands near-ties
to the exact path.  With an explicit rational c1 the comparison against
k*log(j+1) cannot tie (the log of an integer >= 2 is transcendental),
so escalating precision always separates the sides.
"""

import math
import random
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from mpmath import mp, mpf

from .cfcore import PartialQuotients, as_word, cylinder, delete_indices, evaluate
from .errors import DomainError, InsufficientHorizonError

__all__ = [
    "StepSchedule",
    "ScheduleOnset",
    "SizeBoundReport",
    "SeparationReport",
    "HolderPairReport",
    "choose_schedule",
    "step_value",
    "schedule_onset",
    "build_point",
    "verify_size_bound",
    "verify_separation",
    "holder_check",
    "nominal_onset",
    "sample_holder_pairs",
]

_LOG2 = math.log(2)


def exact_positive_fraction(value, what):
    """Coerce to a positive Fraction, refusing floats (their rounding is silent)."""
    if isinstance(value, bool):
        raise DomainError("%s must be a number, got a bool" % what)
    if isinstance(value, float):
        raise DomainError(
            "%s must be exact (int, Fraction or string like '1/10'), not a float" % what
        )
    try:
        out = Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise DomainError("%s is not a rational: %r" % (what, value))
    if out <= 0:
        raise DomainError("%s must be positive, got %s" % (what, out))
    return out


def _count_window(seq, n):
    # like seq.count but treats an explicit list as the entire sequence,
    # so positions past its last member are simply unconstrained
    if seq.kind == "explicit":
        from bisect import bisect_right

        return bisect_right(seq.values, n)
    return seq.count(n)


@dataclass(frozen=True)
class StepSchedule:
    """Step function data: digit j equals the index of the first breakpoint >= j.

    Exactly one of ``eps`` (derived mode, c1 = eps*log2/2) and ``c1``
    (explicit rational) is set; the other is None.  ``thresholds`` are
    the certified ratio thresholds N_j, ``breakpoints`` the strictly
    increasing indices n_j, and ``horizon`` the range on which the
    construction was checked.
    """

    eps: object
    c1: object
    thresholds: tuple
    breakpoints: tuple
    horizon: int

    def __post_init__(self):
        if (self.eps is None) == (self.c1 is None):
            raise DomainError("exactly one of eps and c1 must be set")
        if self.eps is not None and not (isinstance(self.eps, Fraction) and self.eps > 0):
            raise DomainError("eps must be a positive Fraction")
        if self.c1 is not None and not (isinstance(self.c1, Fraction) and self.c1 > 0):
            raise DomainError("c1 must be a positive Fraction")
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        object.__setattr__(self, "breakpoints", tuple(self.breakpoints))
        if len(self.thresholds) != len(self.breakpoints):
            raise DomainError("thresholds and breakpoints must have equal length")
        if not self.breakpoints:
            raise DomainError("a schedule needs at least one breakpoint")
        prev = 0
        for b in self.breakpoints:
            if not isinstance(b, int) or b <= prev:
                raise DomainError("breakpoints must be strictly increasing positive integers")
            prev = b
        for t in self.thresholds:
            if not isinstance(t, int) or t < 0:
                raise DomainError("thresholds must be nonnegative integers")
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise DomainError("horizon must be a positive integer")

    @property
    def c1_value(self):
        """c1 as a 50-digit float (derived mode computes eps*log2/2)."""
        with mp.workdps(50):
            if self.c1 is not None:
                return mpf(self.c1.numerator) / self.c1.denominator
            return +(mpf(self.eps.numerator) / self.eps.denominator * mp.log(2) / 2)

    def to_json(self):
        with mp.workdps(50):
            c1_text = mp.nstr(self.c1_value, 25)
        return {
            "c1": str(self.c1) if self.c1 is not None else c1_text,
            "eps": str(self.eps) if self.eps is not None else None,
            "horizon": self.horizon,
            "N": list(self.thresholds),
            "n": list(self.breakpoints),
        }

    @classmethod
    def from_json(cls, data):
        try:
            raw_c1 = data["c1"]
            raw_eps = data["eps"]
            horizon = data["horizon"]
            thresholds = tuple(int(x) for x in data["N"])
            breakpoints = tuple(int(x) for x in data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError("malformed schedule JSON: %s" % exc)
        if raw_eps is None:
            return cls(None, exact_positive_fraction(raw_c1, "c1"),
                       thresholds, breakpoints, horizon)
        eps = exact_positive_fraction(raw_eps, "eps")
        sched = cls(eps, None, thresholds, breakpoints, horizon)
        if raw_c1 is not None:
            # the stored c1 is display only; catch edits that contradict eps
            declared = float(Fraction(str(raw_c1)))
            derived = float(eps) * _LOG2 / 2
            if abs(declared - derived) > 1e-9 * derived:
                raise DomainError(
                    "schedule JSON has eps = %s but c1 = %s; derived c1 would be %.12g"
                    % (raw_eps, raw_c1, derived)
                )
        return sched


def _require_zero_density(seq):
    d = seq.exact_density
    if d is None:
        raise DomainError(
            "an explicit finite list cannot certify zero density; "
            "use a rule-based sequence (square, pow:b)"
        )
    if d != 0:
        raise DomainError(
            "the sequence %s has density %s, but a schedule needs density 0"
            % (seq.spec_string(), d)
        )


def _ratio_cert_bound(seq, t):
    """Smallest C such that k(n)/n <= t is guaranteed for every n > C."""
    if t <= 0:
        raise DomainError("threshold ratio must be positive")
    if seq.kind == "square":
        # k(n) <= sqrt(n), so 1/sqrt(n) <= t suffices
        return int(1 / (t * t) * 1.001) + 10
    if seq.kind == "pow":
        b = seq.params[0]
        # k(n) <= log_b(n); log_b(n)/n decreases once n >= 3
        c = 8
        while math.log(c) / math.log(b) / c > t * 0.999:
            c *= 2
        return c
    raise DomainError("no analytic tail certificate for kind %r" % seq.kind)


def _ratio_violates_derived(en, ed, k, n, j):
    # k*log(j+1) > (en/ed)*(log2/2)*n, exactly: (j+1)^(2*ed*k) > 2^(en*n)
    if k == 0:
        return False
    lhs = 2 * ed * k * math.log(j + 1)
    rhs = en * n * _LOG2
    if abs(lhs - rhs) > 1e-9 * (abs(lhs) + abs(rhs)):
        return lhs > rhs
    power = (j + 1) ** (2 * ed * k)
    m = en * n
    bits = power.bit_length()
    if bits != m + 1:
        return bits > m + 1
    return power != (1 << m)


def _ratio_violates_explicit(c1, k, n, j):
    # k*log(j+1) > c1*n; a tie would make log(j+1) rational, impossible
    if k == 0:
        return False
    for dps in (60, 200):
        with mp.workdps(dps):
            lhs = k * mp.log(j + 1)
            rhs = mpf(c1.numerator) / c1.denominator * n
            diff = lhs - rhs
            if abs(diff) > mpf(10) ** (-(dps - 15)) * (abs(lhs) + abs(rhs) + 1):
                return diff > 0
    raise DomainError(
        "could not separate k*log(j+1) from c1*n at 200 digits (k=%d, n=%d, j=%d)"
        % (k, n, j)
    )


def choose_schedule(seq, j_max, horizon, c1=None, eps=None):
    """Thresholds and breakpoints for a zero-density sequence.

    For each step j, the threshold N_j is the largest n in [1, C_j]
    with k(n)/n > c1/log(j+1), where C_j is an analytic bound beyond
    which no violation can occur (0 when there is no violation at all);
    the scan is exact.  C_j must fit under the horizon, otherwise the
    horizon cannot certify the threshold and the call fails rather than
    guessing.  Breakpoint n_j is the least index above n_{j-1} whose
    sequence member reaches N_j.

    Exactly one of c1 and eps is given; eps means c1 = eps*log2/2.
    """
    _require_zero_density(seq)
    if not isinstance(j_max, int) or j_max < 1:
        raise DomainError("j_max must be an integer >= 1")
    if not isinstance(horizon, int) or horizon < 1:
        raise DomainError("horizon must be a positive integer")
    if (c1 is None) == (eps is None):
        raise DomainError("give exactly one of c1 and eps")
    if eps is not None:
        eps = exact_positive_fraction(eps, "eps")
        en, ed = eps.numerator, eps.denominator
        c1_float = en / ed * _LOG2 / 2
        violates = lambda k, n, j: _ratio_violates_derived(en, ed, k, n, j)
    else:
        c1 = exact_positive_fraction(c1, "c1")
        c1_float = c1.numerator / c1.denominator
        violates = lambda k, n, j: _ratio_violates_explicit(c1, k, n, j)

    thresholds = []
    breakpoints = []
    prev = 0
    for j in range(1, j_max + 1):
        t = c1_float / math.log(j + 1)
        cert = _ratio_cert_bound(seq, t)
        if cert > horizon:
            raise InsufficientHorizonError(
                "step %d needs a scan up to %d to certify its threshold, "
                "beyond the horizon %d" % (j, cert, horizon)
            )
        worst = 0
        for n in range(1, cert + 1):
            if violates(seq.count(n), n, j):
                worst = n
        thresholds.append(worst)
        n_j = max(prev + 1, seq.first_at_least(worst))
        breakpoints.append(n_j)
        prev = n_j
    return StepSchedule(eps, c1, tuple(thresholds), tuple(breakpoints), horizon)


def step_value(schedule, n):
    """The digit assigned to constrained index n: its step among the breakpoints."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("step index must be an integer >= 1")
    bps = schedule.breakpoints
    if n > bps[-1]:
        raise DomainError(
            "index %d is past the last breakpoint %d; extend the schedule" % (n, bps[-1])
        )
    return bisect_left(bps, n) + 1


class ScheduleOnset(NamedTuple):
    onset: int
    checked_to: int


def schedule_onset(seq, schedule):
    """Least n such that sum_{j<=k(m)} log(step(j)+1) <= c1*m for all m in [n, D].

    D is the horizon, shortened if the schedule's steps run out first.
    A violation at D itself means no onset can be certified and raises.
    In derived mode the comparison is the exact integer test
    prod (step(j)+1)^(2*ed) <= 2^(en*m).
    """
    derived = schedule.eps is not None
    last_idx = schedule.breakpoints[-1]
    try:
        coverage = seq.nth(last_idx + 1) - 1
    except DomainError:
        coverage = schedule.horizon
    limit = min(schedule.horizon, coverage)
    if limit < 1:
        raise DomainError("the schedule covers no positions at all")

    if derived:
        en, ed = schedule.eps.numerator, schedule.eps.denominator
        product = 1  # prod (step(j)+1)^(2*ed) over j <= k(m)
    else:
        c1 = schedule.c1
        logs = []  # exact step values seen so far, for recomputation
    k = 0
    worst = 0
    log_sum = mpf(0)
    with mp.workdps(60):
        for m in range(1, limit + 1):
            if _count_window(seq, m) > k:
                k += 1
                s = step_value(schedule, k)
                if derived:
                    product *= (s + 1) ** (2 * ed)
                else:
                    logs.append(s)
                    log_sum += mp.log(s + 1)
            if derived:
                e = en * m
                bits = product.bit_length()
                if bits > e + 1 or (bits == e + 1 and product != (1 << e)):
                    worst = m
            else:
                rhs = mpf(c1.numerator) / c1.denominator * m
                diff = log_sum - rhs
                if abs(diff) <= mpf("1e-40") * (abs(rhs) + 1):
                    with mp.workdps(200):
                        fine = mp.fsum(mp.log(s + 1) for s in logs)
                        diff = fine - mpf(c1.numerator) / c1.denominator * m
                if diff > 0:
                    worst = m
    if worst >= limit:
        raise InsufficientHorizonError(
            "the weight inequality still fails at %d, the edge of the checked "
            "range; no onset can be certified" % limit
        )
    return ScheduleOnset(worst + 1, limit)


def build_point(seq, m_cap, schedule, depth, filler=1):
    """Word of the given depth: step digits at constrained positions, filler elsewhere."""
    if not isinstance(m_cap, int) or m_cap < 1:
        raise DomainError("digit cap must be an integer >= 1")
    if not isinstance(depth, int) or depth < 1:
        raise DomainError("depth must be an integer >= 1")
    if not isinstance(filler, int) or not 1 <= filler <= m_cap:
        raise DomainError("filler must be an integer in [1, %d]" % m_cap)
    k = _count_window(seq, depth)
    if k > schedule.breakpoints[-1]:
        raise DomainError(
            "depth %d has %d constrained positions but the schedule stops at %d"
            % (depth, k, schedule.breakpoints[-1])
        )
    digits = [filler] * depth
    for j in range(1, k + 1):
        digits[seq.nth(j) - 1] = step_value(schedule, j)
    return PartialQuotients(digits)


class SizeBoundReport(NamedTuple):
    eps: Fraction
    word: PartialQuotients
    onset: int
    onset_certified: object  # int, or None when not certifiable in range
    lhs: Fraction
    rhs: object  # mpf display value
    ok: bool


def _nominal_violates(en, ed, m, k):
    # the onset condition is en*(m - 2k - 4) >= 2*ed
    return en * (m - 2 * k - 4) < 2 * ed


def verify_size_bound(eps, seq, schedule, word):
    """Check |I(w)| >= |I(w with constrained digits deleted)|^(1+eps), exactly.

    The report also carries two onset lengths.  ``onset`` is the least
    n with en*(m - 2k(m) - 4) >= 2*ed for every m in [n, horizon]; the
    inequality is guaranteed from there for the all-filler-1 word shape
    the bound was designed around, but not for every admissible word.
    ``onset_certified`` is the least n from which the stronger chain
    2^((m-k-2)*en) >= (2*prod(step(j)+1)^2)^ed holds; past it the bound
    is provable for every admissible word.  None means the checked
    range could not certify it.
    """
    eps = exact_positive_fraction(eps, "eps")
    en, ed = eps.numerator, eps.denominator
    digits = as_word(word)
    n = len(digits)
    if n == 0:
        raise DomainError("word must be nonempty")
    k_n = _count_window(seq, n)
    if k_n > schedule.breakpoints[-1]:
        raise DomainError(
            "word has %d constrained positions but the schedule stops at %d"
            % (k_n, schedule.breakpoints[-1])
        )
    for j in range(1, k_n + 1):
        pos = seq.nth(j)
        want = step_value(schedule, j)
        if digits[pos - 1] != want:
            raise DomainError(
                "word is not admissible: position %d carries %d, the schedule says %d"
                % (pos, digits[pos - 1], want)
            )
    if n - k_n < 1:
        raise DomainError("every digit is constrained; nothing remains after deletion")

    # nominal onset: scan the horizon for the last violator
    worst = 0
    for m in range(1, schedule.horizon + 1):
        if _nominal_violates(en, ed, m, _count_window(seq, m)):
            worst = m
    if worst >= schedule.horizon:
        raise InsufficientHorizonError(
            "the onset condition still fails at the horizon %d" % schedule.horizon
        )
    onset = worst + 1

    onset_certified = _certified_onset(seq, schedule, en, ed)

    lhs = cylinder(digits).length
    deleted = delete_indices(digits, seq)
    r = cylinder(deleted).length
    ok = (lhs.numerator ** ed) * (r.denominator ** (en + ed)) >= (
        lhs.denominator ** ed
    ) * (r.numerator ** (en + ed))
    with mp.workdps(50):
        rhs = +(
            (mpf(r.numerator) / mpf(r.denominator)) ** (mpf(en + ed) / ed)
        )
    return SizeBoundReport(eps, digits, onset, onset_certified, lhs, rhs, ok)


def _certified_onset(seq, schedule, en, ed):
    """Least m past which 2^((m-k-2)*en) >= (2*prod(step+1)^2)^ed keeps holding."""
    last_idx = schedule.breakpoints[-1]
    try:
        coverage = seq.nth(last_idx + 1) - 1
    except DomainError:
        coverage = schedule.horizon
    limit = min(schedule.horizon, coverage)
    k = 0
    prod_sq = 1  # prod (step(j)+1)^2 over j <= k
    rhs = 2 ** ed  # (2*prod_sq)^ed, updated when k grows
    worst = 0
    for m in range(1, limit + 1):
        if _count_window(seq, m) > k:
            k += 1
            s = step_value(schedule, k)
            prod_sq *= (s + 1) ** 2
            rhs = (2 * prod_sq) ** ed
        e = (m - k - 2) * en
        if e < 0:
            worst = m
            continue
        bits = rhs.bit_length()
        # 2^e >= rhs  iff  e+1 > bits, or e+1 == bits and rhs is that power of two
        if not (e + 1 > bits or (e + 1 == bits and rhs == (1 << e))):
            worst = m
    if worst >= limit:
        return None
    return worst + 1


class SeparationReport(NamedTuple):
    gap: Fraction
    bound: Fraction
    ok: bool


def verify_separation(prefix, m_cap, x_tail, y_tail):
    """Exact check of gap >= |I(prefix)| / (9 M^3) for two continuations.

    Both tails must be nonempty, use digits in [1, M], and differ in
    their first digit.  Continuations that realize the same rational
    (a boundary alias like [w,a,1] vs [w,a+1]) describe one point, not
    two, and are rejected.
    """
    if not isinstance(m_cap, int) or m_cap < 2:
        raise DomainError("digit cap must be an integer >= 2")
    pre = as_word(prefix)
    xt = as_word(x_tail)
    yt = as_word(y_tail)
    if not xt or not yt:
        raise DomainError("both continuations must be nonempty")
    if xt[0] == yt[0]:
        raise DomainError("continuations must differ in their first digit")
    for name, digits in (("prefix", pre), ("first tail", xt), ("second tail", yt)):
        for a in digits:
            if a > m_cap:
                raise DomainError("%s digit %d exceeds the cap %d" % (name, a, m_cap))
    x = evaluate(pre + xt)
    y = evaluate(pre + yt)
    if x == y:
        raise DomainError(
            "the continuations describe the same point (boundary alias); "
            "separation is about distinct points"
        )
    base = cylinder(pre).length if pre else Fraction(1)
    bound = base / (9 * m_cap ** 3)
    gap = abs(x - y)
    return SeparationReport(gap, bound, gap >= bound)


def nominal_onset(seq, eps):
    """Horizon-free onset: least n with en*(m - 2k(m) - 4) >= 2*ed for all m >= n.

    Works for sequences whose counting function is provably sublinear
    enough (square, powers, arithmetic with gap >= 3, finite explicit
    lists).  Gap-2 or denser arithmetic progressions never satisfy the
    condition and are rejected.
    """
    eps = exact_positive_fraction(eps, "eps")
    en, ed = eps.numerator, eps.denominator
    need = 4 + 2 * ed / en  # float is fine, the scan below is exact
    if seq.kind == "square":
        cert = int((1 + math.sqrt(1 + 2 * need)) ** 2) + 4
    elif seq.kind == "pow":
        b = seq.params[0]
        cert = 8
        while cert - 2 * math.log(cert) / math.log(b) < need + 1:
            cert *= 2
    elif seq.kind in ("even", "arith"):
        d = 2 if seq.kind == "even" else seq.params[1]
        if d < 3:
            raise DomainError(
                "the onset condition n - 2k(n) - 4 stays negative when every "
                "%d-th position is constrained; need gaps of at least 3" % d
            )
        cert = int((need + 2) * d / (d - 2)) + d + 4
    else:
        cert = 2 * len(seq.values) + int(need) + 6
    worst = 0
    for m in range(1, cert + 1):
        if _nominal_violates(en, ed, m, _count_window(seq, m)):
            worst = m
    if worst >= cert:
        raise DomainError("internal certificate bound too tight; please report")
    return worst + 1


class HolderPairReport(NamedTuple):
    x: PartialQuotients
    y: PartialQuotients
    prefix_len: int
    gap: object  # Fraction, or None when skipped before evaluation
    image_gap: object
    ok: object  # True/False, or None when skipped
    reason: str


def _skip(x, y, n, reason):
    return HolderPairReport(x, y, n, None, None, None, reason)


def holder_check(seq, m_cap, eps, sample_pairs):
    """Per-pair check of image_gap <= (9 M^3)^(1/(1+eps)) * gap^(1/(1+eps)).

    The image of a word is the value of the word with its constrained
    positions deleted.  The inequality is checked with both sides
    raised to the power 1+eps, i.e. image_gap^(en+ed) <= ((9M^3)*gap)^ed
    on exact rationals.  Pairs that do not satisfy the configuration
    (shared prefix of length at least the onset, then differing digits
    at a free position) are skipped with a reason, not failed.
    """
    if not isinstance(m_cap, int) or m_cap < 2:
        raise DomainError("digit cap must be an integer >= 2")
    eps = exact_positive_fraction(eps, "eps")
    en, ed = eps.numerator, eps.denominator
    onset = nominal_onset(seq, eps)
    scale = Fraction(9 * m_cap ** 3)
    reports = []
    for pair in sample_pairs:
        x = PartialQuotients(as_word(pair[0]))
        y = PartialQuotients(as_word(pair[1]))
        if x == y:
            reports.append(
                HolderPairReport(x, y, len(x), Fraction(0), Fraction(0), True,
                                 "identical points")
            )
            continue
        bad = ""
        for w in (x, y):
            for i, a in enumerate(w, start=1):
                if a > m_cap and i not in seq:
                    bad = "free digit %d at position %d exceeds the cap %d" % (a, i, m_cap)
                    break
            if bad:
                break
        if bad:
            reports.append(_skip(x, y, 0, bad))
            continue
        n = 0
        for ax, ay in zip(x, y):
            if ax != ay:
                break
            n += 1
        if n == min(len(x), len(y)):
            reports.append(_skip(x, y, n, "no continuation digit"))
            continue
        if (n + 1) in seq:
            reports.append(_skip(x, y, n, "constrained continuation position"))
            continue
        if n < onset:
            reports.append(_skip(x, y, n, "below onset (need %d)" % onset))
            continue
        gap = abs(evaluate(x) - evaluate(y))
        if gap == 0:
            reports.append(_skip(x, y, n, "continuations describe the same point"))
            continue
        dx = delete_indices(x, seq)
        dy = delete_indices(y, seq)
        if not dx or not dy:
            reports.append(_skip(x, y, n, "every digit is constrained"))
            continue
        image_gap = abs(evaluate(dx) - evaluate(dy))
        ok = image_gap ** (en + ed) <= (scale * gap) ** ed
        reports.append(HolderPairReport(x, y, n, gap, image_gap, ok, ""))
    return reports


def sample_holder_pairs(seq, m_cap, schedule, count, seed, min_prefix, spread=60, tail_max=30):
    """Deterministic random pairs in the holder_check configuration.

    Each pair shares a prefix of length at least min_prefix (step digits
    at constrained positions, uniform free digits in [1, M]), then
    differs at the first free position and continues independently.
    Final digits are kept >= 2 at free positions so no pair can collide
    on a boundary alias.
    """
    if not isinstance(m_cap, int) or m_cap < 2:
        raise DomainError("digit cap must be an integer >= 2 to allow differing digits")
    if not isinstance(count, int) or count < 1:
        raise DomainError("count must be an integer >= 1")
    if not isinstance(min_prefix, int) or min_prefix < 1:
        raise DomainError("min_prefix must be an integer >= 1")
    rng = random.Random(seed)

    def fill(pos):
        if pos in seq:
            return step_value(schedule, _count_window(seq, pos))
        return rng.randint(1, m_cap)

    pairs = []
    for _ in range(count):
        n = rng.randrange(min_prefix, min_prefix + spread)
        while (n + 1) in seq:
            n += 1
        prefix = [fill(i) for i in range(1, n + 1)]
        d1, d2 = rng.sample(range(1, m_cap + 1), 2)

        def extend(first):
            word = prefix + [first]
            for i in range(n + 2, n + 2 + rng.randrange(0, tail_max)):
                word.append(fill(i))
            # trim back to a free final position, then keep its digit >= 2
            # so distinct pairs can never collide on a boundary alias
            while len(word) > n + 1 and len(word) in seq:
                word.pop()
            if len(word) > n + 1 and word[-1] == 1:
                word[-1] = rng.randint(2, m_cap)
            return PartialQuotients(word)

        pairs.append((extend(d1), extend(d2)))
    return pairs
