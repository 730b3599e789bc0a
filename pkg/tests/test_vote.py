import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from itmpc.adversary import CorruptSet, OverrideFlipProbability, RefuseBroadcast
from itmpc.errors import ConfigurationError
from itmpc.runtime import AbortReason, Runtime
from itmpc.vote import (_exp_minus_two, decode_count, decode_threshold, p_v, run_vote, tally,
                        within_threshold)
from itmpc.bits import Bits


def recurrence(n, v):
    p = Fraction(0)
    for _ in range(v):
        p = p * (1 - Fraction(1, n)) + (1 - p) * Fraction(1, n)
    return p


# Hand-computed: 1/2 (1 - (3/5)^v) for n = 5.
@pytest.mark.parametrize("v, expected", [
    (0, Fraction(0)), (1, Fraction(1, 5)), (2, Fraction(8, 25)), (3, Fraction(49, 125)),
    (4, Fraction(272, 625)), (5, Fraction(1441, 3125)),
])
def test_p_v_oracle_n5(v, expected):
    assert p_v(5, v) == expected


def test_p_v_float_example():
    assert float(p_v(5, 2)) == pytest.approx(0.32)


@pytest.mark.parametrize("n", [3, 4, 7, 50, 200])
def test_closed_form_equals_recurrence(n):
    assert all(p_v(n, v) == recurrence(n, v) for v in range(n + 1))


def test_e_minus_two_interval():
    lo, hi = _exp_minus_two(40)
    assert lo < hi and hi - lo < Fraction(1, 10 ** 30)
    assert abs(float(lo) - math.exp(-2)) < 1e-16


def test_threshold_float():
    assert decode_threshold(5) == pytest.approx(0.0135335283237, rel=1e-10)


@pytest.mark.parametrize("sigma, n, expected", [
    (Fraction(33, 100), 5, 2),
    (Fraction(1, 10), 5, None),
    (Fraction(0), 5, 0),
    (Fraction(1, 5), 5, 1),
])
def test_decode_examples(sigma, n, expected):
    assert decode_count(sigma, n) == expected


@pytest.mark.parametrize("n", range(3, 101))
def test_exact_p_v_decodes_to_v(n):
    assert all(decode_count(p_v(n, v), n) == v for v in range(n + 1))


def test_threshold_is_strict():
    assert within_threshold(Fraction(0), 5)
    assert within_threshold(Fraction(1, 100), 5)
    assert not within_threshold(Fraction(14, 1000), 5)


def test_gap_holds_below_the_last_pair():
    # p_{v+1} - p_v = ((n-2)/n)^v / n exceeds 1/(e^2 n) exactly when ((n-2)/n)^v > e^-2.
    for n in range(3, 60):
        for v in range(n - 1):
            assert not within_threshold((p_v(n, v + 1) - p_v(n, v)) / 2, n)


def test_gap_fails_for_the_last_pair():
    # ((n-2)/n)^(n-1) < e^-2, so the top two windows overlap.
    for n in (3, 5, 10, 100):
        gap = p_v(n, n) - p_v(n, n - 1)
        assert gap < Fraction(math.exp(-2)) / n


def test_overlap_decodes_to_nearest():
    n = 5
    mid_top = (p_v(n, 4) + p_v(n, 5)) / 2
    assert decode_count(mid_top - Fraction(1, 10 ** 6), n) == 4
    assert decode_count(mid_top + Fraction(1, 10 ** 6), n) == 5


def test_honest_vote():
    out = run_vote({1: 1, 2: 2, 3: 2, 4: 3, 5: 1}, 3, 20000, Runtime(5, seed=1))
    assert out.completed
    assert out.value.counts == {1: 2, 2: 2, 3: 1}


@pytest.mark.parametrize("s", [1, 10, 500])
def test_unanimous_vote_other_candidates_exactly_zero(s):
    out = run_vote({i: 1 for i in range(1, 6)}, 3, s, Runtime(5, seed=s))
    t = out.value if out.completed else out.detail
    assert t.sigma[2] == 0 and t.sigma[3] == 0


def test_double_vote_is_caught():
    q = Fraction(2, 5)  # flip rate that makes a single participant look like two voters
    aborted = 0
    for seed in range(20):
        ctx = Runtime(5, seed=seed, corrupt=CorruptSet.of([2], {"vote.k*.flip": OverrideFlipProbability(q)}))
        out = run_vote({1: 1, 2: 2, 3: 2, 4: 3, 5: 1}, 3, 20000, ctx)
        aborted += out.abort in (AbortReason.SUM_NOT_N, AbortReason.TALLY_INCONSISTENT)
    assert aborted >= 19


def test_missing_reveal_aborts():
    ctx = Runtime(4, corrupt=CorruptSet.of([4], {"vote.reveal": RefuseBroadcast()}))
    out = run_vote({1: 1, 2: 1, 3: 2, 4: 2}, 2, 50, ctx)
    assert out.abort is AbortReason.SIM_BROADCAST_FAILURE
    assert out.detail == [4]


def test_tally_sum_not_n():
    # Both candidates decode to 0 (all-zero rounds) but n = 3 voters exist.
    out = tally([Bits.zeros(10), Bits.zeros(10)], 3)
    assert out.abort is AbortReason.SUM_NOT_N
    assert out.detail.counts == {1: 0, 2: 0}


@pytest.mark.parametrize("inputs, m, s", [
    ({1: 0, 2: 1, 3: 1}, 2, 10),
    ({1: 3, 2: 1, 3: 1}, 2, 10),
    ({1: 1, 2: 1, 3: 1}, 1, 10),
    ({1: 1, 2: 1, 3: 1}, 2, 0),
    ({1: 1, 2: 1}, 2, 10),
])
def test_invalid_inputs(inputs, m, s):
    with pytest.raises(ConfigurationError):
        run_vote(inputs, m, s, Runtime(3))


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 6), st.integers(0, 2**32), st.data())
def test_honest_vote_property(n, seed, data):
    m = data.draw(st.integers(2, 4))
    xs = {i: data.draw(st.integers(1, m)) for i in range(1, n + 1)}
    out = run_vote(xs, m, 20000, Runtime(n, seed=seed))
    assert out.completed
    assert out.value.counts == {k: list(xs.values()).count(k) for k in range(1, m + 1)}
