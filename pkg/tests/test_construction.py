"""Step schedules, point building, size/separation/Hölder verification."""

from fractions import Fraction
from itertools import product

import pytest
from mpmath import mp, mpf

from cfdim import (
    DomainError,
    InsufficientHorizonError,
    PartialQuotients,
    StepSchedule,
    build_point,
    choose_schedule,
    evaluate,
    holder_check,
    nominal_onset,
    parse_index_sequence,
    sample_holder_pairs,
    schedule_onset,
    step_value,
    verify_separation,
    verify_size_bound,
)

SQ = parse_index_sequence("square")


def square_schedule(j_max=30, horizon=10000):
    return choose_schedule(SQ, j_max, horizon, eps="1/10")


def test_schedule_flagship_values():
    s = choose_schedule(SQ, 1, 10000, eps="1/10")
    assert s.thresholds == (379,)
    assert s.breakpoints == (20,)


def test_schedule_breakpoints_increase_and_follow_thresholds():
    s = square_schedule()
    assert len(s.breakpoints) == 30
    assert all(a < b for a, b in zip(s.breakpoints, s.breakpoints[1:]))
    for n_j, big_n in zip(s.breakpoints, s.thresholds):
        assert SQ.nth(n_j) >= big_n
        # least such index above the previous breakpoint
        assert n_j == 1 or SQ.nth(n_j - 1) < big_n or n_j - 1 in s.breakpoints


def test_schedule_thresholds_are_largest_violators():
    # brute recheck of N_1 for eps = 1/10: k(n)*log(2) > c1*n must fail
    # for every n > 379 up to the certification bound, and hold at 379
    s = choose_schedule(SQ, 1, 10000, eps="1/10")
    en, ed = 1, 10
    def violates(n):
        k = SQ.count(n)
        return 2 ** (2 * ed * k) > 2 ** (en * n)  # (j+1) = 2
    assert violates(379)
    assert not any(violates(n) for n in range(380, 2000))


def test_schedule_exact_tie_is_not_a_violation():
    # at n = 380 and 400 the two sides are equal integers; strict
    # comparison keeps them out of the violator set
    en, ed, j = 1, 10, 1
    for n, k in ((380, 19), (400, 20)):
        assert (j + 1) ** (2 * ed * k) == 2 ** (en * n)


def test_schedule_rejects_positive_density_and_short_horizons():
    with pytest.raises(DomainError):
        choose_schedule(parse_index_sequence("even"), 1, 10000, eps="1/10")
    with pytest.raises(DomainError):
        choose_schedule(SQ, 1, 10000)  # neither c1 nor eps
    with pytest.raises(DomainError):
        choose_schedule(SQ, 1, 10000, c1="1/20", eps="1/10")
    with pytest.raises(InsufficientHorizonError):
        choose_schedule(SQ, 31, 10000, eps="1/10")
    with pytest.raises(InsufficientHorizonError):
        choose_schedule(SQ, 1, 100, eps="1/10")


def test_schedule_explicit_c1_path():
    s = choose_schedule(SQ, 2, 100000, c1="1")
    assert s.c1 == Fraction(1)
    assert s.eps is None
    # c1 = 1 is generous: k(n) <= sqrt(n) <= n/log(2) for all n >= 1
    assert s.thresholds[0] <= 3
    p = choose_schedule(parse_index_sequence("pow:2"), 1, 10000, c1="1")
    assert p.breakpoints[0] >= 1


def test_schedule_json_round_trip_both_modes():
    s = square_schedule(j_max=3)
    data = s.to_json()
    assert sorted(data) == ["N", "c1", "eps", "horizon", "n"]
    again = StepSchedule.from_json(data)
    assert again == s
    e = choose_schedule(SQ, 2, 100000, c1="1/20")
    back = StepSchedule.from_json(e.to_json())
    assert back == e and back.eps is None


def test_schedule_json_tamper_detection():
    data = square_schedule(j_max=1).to_json()
    data["c1"] = "1/2"  # contradicts eps
    with pytest.raises(DomainError):
        StepSchedule.from_json(data)
    with pytest.raises(DomainError):
        StepSchedule.from_json({"c1": "1/2"})


def test_schedule_validation():
    with pytest.raises(DomainError):
        StepSchedule(Fraction(1, 10), Fraction(1, 20), (1,), (1,), 10)
    with pytest.raises(DomainError):
        StepSchedule(Fraction(1, 10), None, (1, 2), (5,), 10)
    with pytest.raises(DomainError):
        StepSchedule(Fraction(1, 10), None, (1, 2), (5, 5), 10)
    with pytest.raises(DomainError):
        StepSchedule(None, Fraction(1, 2), (), (), 10)


def test_step_value_staircase():
    s = square_schedule()
    assert step_value(s, 1) == 1
    assert step_value(s, 20) == 1
    assert step_value(s, 21) == 2
    assert step_value(s, s.breakpoints[-1]) == 30
    with pytest.raises(DomainError):
        step_value(s, s.breakpoints[-1] + 1)
    with pytest.raises(DomainError):
        step_value(s, 0)


def test_schedule_onset_certifies_weight_inequality():
    s = square_schedule()
    ons = schedule_onset(SQ, s)
    assert ons.onset == 380
    assert ons.checked_to == 10000
    # independent recheck at a few spots with 60-digit logs
    with mp.workdps(60):
        c1 = mpf(1) / 10 * mp.log(2) / 2
        def weight(n):
            return mp.fsum(mp.log(step_value(s, j) + 1) for j in range(1, SQ.count(n) + 1))
        assert weight(379) > c1 * 379
        for n in (380, 381, 400, 2000, 9999, 10000):
            assert weight(n) <= c1 * n


def test_schedule_onset_explicit_c1_agrees_with_brute_force():
    seq = parse_index_sequence("pow:2")
    s = choose_schedule(seq, 3, 5000, c1="1/4")
    ons = schedule_onset(seq, s)
    with mp.workdps(60):
        c1 = mpf(1) / 4
        def ok(n):
            return mp.fsum(
                mp.log(step_value(s, j) + 1) for j in range(1, seq.count(n) + 1)
            ) <= c1 * n
        limit = min(5000, seq.nth(s.breakpoints[-1] + 1) - 1)
        brute = max((n for n in range(1, limit + 1) if not ok(n)), default=0) + 1
    assert ons.onset == brute


def test_build_point_places_step_digits():
    manual = StepSchedule(None, Fraction(1, 2), (1, 1), (2, 10), 100)
    w = build_point(parse_index_sequence("even"), 3, manual, 6, filler=2)
    assert list(w) == [2, 1, 2, 1, 2, 2]
    w = build_point(SQ, 3, square_schedule(), 10, filler=2)
    assert list(w) == [1, 2, 2, 1, 2, 2, 2, 2, 1, 2]  # steps at 1, 4, 9


def test_build_point_deeper_depth_extends_prefix():
    s = square_schedule()
    short = build_point(SQ, 4, s, 30)
    long = build_point(SQ, 4, s, 80)
    assert long.digits[:30] == short.digits


def test_build_point_validation():
    s = square_schedule(j_max=1)
    with pytest.raises(DomainError):
        build_point(SQ, 3, s, 441)  # k(441) = 21 exceeds the only breakpoint
    with pytest.raises(DomainError):
        build_point(SQ, 3, square_schedule(), 10, filler=0)
    with pytest.raises(DomainError):
        build_point(SQ, 1, square_schedule(), 10, filler=2)
    # the cap binds fillers only; constrained positions may exceed it
    w = build_point(SQ, 1, square_schedule(), 10)
    assert all(d == 1 for i, d in enumerate(w.digits, start=1) if i not in (1, 4, 9))


def test_size_bound_onsets_and_flagship_words():
    s = square_schedule()
    all_ones_34 = PartialQuotients((1,) * 34)
    rep = verify_size_bound("1/10", SQ, s, all_ones_34)
    assert rep.onset == 34
    assert rep.onset_certified == 531
    assert not rep.ok  # the nominal onset is not sufficient for every word
    assert rep.lhs ** 11 < Fraction(1, 10 ** 140)
    rep = verify_size_bound("1/10", SQ, s, PartialQuotients((1,) * 111))
    assert rep.ok
    # all-ones is inadmissible at depth 531 (position 441 needs step 2),
    # so go through the constructor for a certified-onset word
    rep = verify_size_bound("1/10", SQ, s, build_point(SQ, 2, s, 531))
    assert rep.ok


@pytest.mark.xfail(
    strict=True,
    reason="the documented claim that ok holds whenever the word length "
    "reaches the nominal onset fails on the all-ones word at 34",
)
def test_size_bound_nominal_onset_sufficient_literal():
    s = square_schedule()
    rep = verify_size_bound("1/10", SQ, s, PartialQuotients((1,) * 34))
    assert rep.ok


def test_size_bound_every_word_passes_from_certified_onset():
    import random

    s = square_schedule()
    rng = random.Random(5)
    for _ in range(8):
        length = rng.randint(531, 620)
        digits = []
        for i in range(1, length + 1):
            if i in SQ:
                digits.append(step_value(s, SQ.count(i)))
            else:
                digits.append(rng.randint(1, 2))  # adversarial: small digits
        rep = verify_size_bound("1/10", SQ, s, PartialQuotients(digits))
        assert rep.ok


def test_size_bound_rejects_inadmissible_words():
    s = square_schedule()
    bad = [1] * 40
    bad[3] = 3  # position 4 must carry step value 1
    with pytest.raises(DomainError):
        verify_size_bound("1/10", SQ, s, PartialQuotients(bad))
    with pytest.raises(DomainError):
        verify_size_bound(0.1, SQ, s, PartialQuotients((1,) * 40))


def test_separation_gap_dominates_cylinder_scaled_bound():
    rep = verify_separation((2, 1), 3, (1, 2), (2, 1))
    assert rep.gap == Fraction(3, 143)
    assert rep.bound == Fraction(1, 9 * 27) * cylinder_len((2, 1))
    assert rep.ok


def cylinder_len(w):
    from cfdim import cylinder

    return cylinder(w).length


def test_separation_exhaustive_small():
    for m_cap in (2, 3):
        for plen in (0, 1, 2):
            for prefix in product(range(1, m_cap + 1), repeat=plen):
                for t1 in product(range(1, m_cap + 1), repeat=2):
                    for t2 in product(range(1, m_cap + 1), repeat=2):
                        if t1[0] == t2[0]:
                            continue
                        x = tuple(prefix) + t1
                        y = tuple(prefix) + t2
                        if evaluate(x) == evaluate(y):
                            continue
                        rep = verify_separation(prefix, m_cap, t1, t2)
                        assert rep.ok, (prefix, t1, t2)


def test_separation_validation():
    with pytest.raises(DomainError):
        verify_separation((), 3, (2, 1), (3,))  # same value, boundary alias
    with pytest.raises(DomainError):
        verify_separation((), 3, (2, 1), (2, 2))  # equal first digits
    with pytest.raises(DomainError):
        verify_separation((), 3, (4, 1), (2, 2))  # digit above the cap
    with pytest.raises(DomainError):
        verify_separation((), 1, (1,), (1,))


def test_nominal_onset_values():
    assert nominal_onset(SQ, "1/10") == 34
    assert nominal_onset(SQ, "1/10") < nominal_onset(SQ, "1/100")
    assert nominal_onset(parse_index_sequence("pow:2"), "1/10") >= 1
    with pytest.raises(DomainError):
        nominal_onset(parse_index_sequence("even"), "1/10")


def test_holder_check_passes_sampled_pairs():
    s = square_schedule()
    pairs = sample_holder_pairs(SQ, 5, s, 40, 9, 34)
    reports = holder_check(SQ, 5, "1/10", pairs)
    assert len(reports) == 40
    assert all(r.ok for r in reports)
    assert all(r.reason == "" or r.reason == "identical points" for r in reports)


def test_holder_check_skip_reasons():
    s = square_schedule()
    w = build_point(SQ, 5, s, 40)
    reports = holder_check(
        SQ,
        5,
        "1/10",
        [
            (w, w),
            ((1, 2), (1, 3)),  # below the onset
            (w.digits[:35] + (2,), w.digits[:35] + (3,)),  # position 36 constrained
            ((1,) * 38 + (9,), (1,) * 38 + (2,)),  # free digit above the cap
        ],
    )
    assert reports[0].ok is True and reports[0].reason == "identical points"
    assert reports[1].ok is None and "below onset" in reports[1].reason
    assert reports[2].ok is None and "constrained" in reports[2].reason
    assert reports[3].ok is None and "exceeds the cap" in reports[3].reason


def test_holder_check_rejects_boundary_alias_pairs():
    base = (1,) * 38
    reports = holder_check(SQ, 5, "1/10", [(base + (2, 1), base + (3,))])
    assert reports[0].ok is None
    assert "same point" in reports[0].reason


def test_sample_holder_pairs_deterministic():
    s = square_schedule()
    a = sample_holder_pairs(SQ, 5, s, 6, 3, 34)
    b = sample_holder_pairs(SQ, 5, s, 6, 3, 34)
    assert a == b
    c = sample_holder_pairs(SQ, 5, s, 6, 4, 34)
    assert a != c
    for x, y in a:
        shared = 0
        for dx, dy in zip(x.digits, y.digits):
            if dx != dy:
                break
            shared += 1
        assert shared >= 34
        assert (shared + 1) not in SQ
