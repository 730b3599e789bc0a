from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from itmpc.adversary import (AnnounceConstant, CorruptSet, ForceOutcome, OverrideFlipProbability,
                             RefuseBroadcast)
from itmpc.runtime import Runtime
from itmpc.tapes import RandomTape, exact_distribution
from itmpc.veto import randomize_flip, run_veto, veto_bits_per_peer, veto_orderings


def test_orderings_n3():
    assert {o[-1] for o in veto_orderings(3)} == {1, 2, 3}


def test_ordering_n5_second():
    assert veto_orderings(5)[1] == (3, 4, 5, 1, 2)


@pytest.mark.parametrize("n", range(3, 12))
def test_every_participant_ends_one_ordering(n):
    orders = veto_orderings(n)
    assert len(orders) == n
    assert {o[-1] for o in orders} == set(range(1, n + 1))
    assert all(sorted(o) == list(range(1, n + 1)) for o in orders)


def test_randomize_zero_never_flips():
    t = RandomTape.seeded(1)
    assert all(randomize_flip(0, t) == 0 for _ in range(1000))


def test_randomize_one_is_fair():
    t = RandomTape.seeded(2)
    n = 100_000
    ones = bin(randomize_flip(1, t, n)).count("1")
    assert abs(ones - n / 2) < 3 * (n / 4) ** 0.5


def test_override_flip_rate():
    q = Fraction(1, 5)
    ctx = Runtime(3, corrupt=CorruptSet.of([1], {"*": OverrideFlipProbability(q)}))
    n = 100_000
    ones = ctx.flips(1, "veto.flip", n, Fraction(1, 2)).count()
    assert abs(ones - n * 0.2) < 3 * (n * 0.16) ** 0.5


@pytest.mark.parametrize("seed", range(20))
def test_all_zero_is_zero(seed):
    out = run_veto({i: 0 for i in range(1, 5)}, 5, Runtime(4, seed=seed))
    assert out.value.result == 0
    assert set(out.value.saw_other_one.values()) == {0}


def test_single_one_detected():
    for seed in range(200):
        assert run_veto({1: 1, 2: 0, 3: 0, 4: 0}, 20, Runtime(4, seed=seed)).value.result == 1


def test_two_ones_both_witness():
    for seed in range(200):
        v = run_veto({1: 1, 2: 1, 3: 0}, 20, Runtime(3, seed=seed)).value
        assert v.saw_other_one[1] == 1 and v.saw_other_one[2] == 1
        assert v.saw_other_one[3] == 1


def test_lone_one_sees_nobody_else():
    for seed in range(50):
        v = run_veto({1: 1, 2: 0, 3: 0}, 20, Runtime(3, seed=seed)).value
        assert v.saw_other_one[1] == 0


def test_exact_miss_probability_s1():
    # With s = 1 each of the n orderings misses a lone 1 with probability 1/2.
    def run(tapes):
        return run_veto({1: 1, 2: 0, 3: 0}, 1, Runtime(3, tapes=tapes)).value.result
    assert exact_distribution(run, 3, exhaustive=[1])[0] == Fraction(1, 8)


def test_refusal_sets_result_and_completes():
    ctx = Runtime(4, corrupt=CorruptSet.of([2], {"veto.o3.announce": RefuseBroadcast()}))
    out = run_veto({i: 0 for i in range(1, 5)}, 4, ctx)
    assert out.completed and out.value.result == 1
    assert set(out.value.saw_other_one.values()) == {1}


def test_last_speaker_cannot_hide_a_one():
    # Forcing 0 only works in the ordering where the corrupt participant speaks last.
    ctx_rule = CorruptSet.of([4], {"veto.*.announce": ForceOutcome(0)})
    for seed in range(100):
        out = run_veto({1: 1, 2: 0, 3: 0, 4: 0}, 20, Runtime(4, seed=seed, corrupt=ctx_rule))
        assert out.value.result == 1


def test_bits_per_peer():
    ctx = Runtime(5, seed=3)
    run_veto({i: int(i == 2) for i in range(1, 6)}, 7, ctx)
    assert all(ctx.transcript.max_bits_to_any_peer(i) == veto_bits_per_peer(5, 7)
               for i in range(1, 6))


@pytest.mark.parametrize("bad", [{1: 0, 2: 0}, {1: 0, 2: 2, 3: 0}])
def test_invalid_inputs(bad):
    with pytest.raises(ValueError):
        run_veto(bad, 3, Runtime(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 6), st.integers(0, 2**32), st.data())
def test_veto_is_or(n, seed, data):
    xs = {i: data.draw(st.integers(0, 1)) for i in range(1, n + 1)}
    out = run_veto(xs, 30, Runtime(n, seed=seed))
    assert out.value.result == max(xs.values())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([AnnounceConstant(0), AnnounceConstant(1),
                                               RefuseBroadcast(), ForceOutcome(0)]))
def test_corrupt_announcer_never_stalls(seed, rule):
    ctx = Runtime(4, seed=seed, corrupt=CorruptSet.of([3], {"*": rule}))
    assert run_veto({1: 0, 2: 1, 3: 0, 4: 0}, 8, ctx).completed
