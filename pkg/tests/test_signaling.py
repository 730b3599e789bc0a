import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from itmpc.adversary import CorruptSet, OverrideFlipProbability, RefuseBroadcast
from itmpc.runtime import AbortReason, Runtime
from itmpc.signaling import run_collision_detection, run_notification
from itmpc.tapes import exact_distribution


@pytest.mark.parametrize("xs, expected", [
    ((0, 0, 0, 0), 0), ((1, 0, 0, 0), 1), ((1, 1, 0, 0), 2), ((2, 0, 0, 0), 2),
    ((0, 0, 0, 1), 1), ((1, 1, 1, 1), 2), ((0, 2, 0, 1), 2),
])
def test_collision_examples(xs, expected):
    for seed in range(10):
        out = run_collision_detection(dict(enumerate(xs, 1)), 40, Runtime(4, seed=seed))
        assert out.value == expected


def test_collision_never_aborts_under_refusal():
    ctx = Runtime(4, corrupt=CorruptSet.of([2], {"*": RefuseBroadcast()}))
    out = run_collision_detection({1: 1, 2: 0, 3: 0, 4: 0}, 10, ctx)
    assert out.completed and out.value == 2


def test_corrupt_can_push_to_collision():
    rule = {"collision.B.flip": OverrideFlipProbability(Fraction(1, 2))}
    ctx = Runtime(4, corrupt=CorruptSet.of([3], rule))
    assert run_collision_detection({1: 1, 2: 0, 3: 0, 4: 0}, 20, ctx).value == 2


def test_all_flags_zero():
    out = run_notification({}, 10, Runtime(4))
    assert out.value == {1: 0, 2: 0, 3: 0, 4: 0}


def test_single_flag():
    for seed in range(100):
        out = run_notification({(1, 3): 1}, 30, Runtime(4, seed=seed))
        assert out.value == {1: 0, 2: 0, 3: 1, 4: 0}


def test_two_notifiers_hidden_from_target():
    # Target 3's view is identically distributed whoever of 1 and 2 notified it.
    def view(flags):
        def run(tapes):
            ctx = Runtime(3, tapes=tapes)
            run_notification(flags, 1, ctx)
            return ctx.transcript.view({3})
        return exact_distribution(run, 3, exhaustive=[1, 2], seed=9)
    assert view({(1, 3): 1}) == view({(2, 3): 1})


def test_notification_privacy_exhaustive_n3_s1():
    # A corrupt non-target learns nothing about who notified the others.
    def view(flags):
        def run(tapes):
            ctx = Runtime(3, tapes=tapes)
            run_notification(flags, 1, ctx)
            return ctx.transcript.view({1})
        return exact_distribution(run, 3, exhaustive=[2, 3], seed=4)
    base = view({})
    assert view({(2, 3): 1}) == base
    assert view({(3, 2): 1}) == base
    assert view({(2, 3): 1, (3, 2): 1}) == base


def test_refusal_aborts():
    ctx = Runtime(4, corrupt=CorruptSet.of([2], {"notify.t4.announce": RefuseBroadcast()}))
    out = run_notification({(1, 4): 1}, 5, ctx)
    assert out.abort is AbortReason.REFUSED_BROADCAST


def test_self_notification_rejected():
    with pytest.raises(ValueError):
        run_notification({(2, 2): 1}, 5, Runtime(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)),
                                        max_size=8))
def test_notification_is_column_or(seed, pairs):
    flags = {(j, i): 1 for j, i in pairs if j != i}
    out = run_notification(flags, 30, Runtime(4, seed=seed))
    assert out.value == {i: int(any(t == i for (_, t) in flags)) for i in range(1, 5)}
