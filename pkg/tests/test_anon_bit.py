import pytest

from itmpc.adversary import CorruptSet, OverrideFlipProbability, TamperBits
from itmpc.anon_bit import AbtReceipt, abt_subelection, normalize_cells, run_abt
from itmpc.errors import ConfigurationError
from itmpc.runtime import AbortReason, Runtime
from itmpc.tapes import exact_distribution

S = 20000


def test_all_abstain():
    out = run_abt({}, S, Runtime(4))
    assert out.value == {j: AbtReceipt(0, 0) for j in range(1, 5)}


def test_single_bit_reaches_target():
    out = run_abt({(2, 4): 1}, S, Runtime(5, seed=2))
    assert out.value[4] == AbtReceipt(0, 1)
    assert all(out.value[j] == AbtReceipt(0, 0) for j in (1, 2, 3, 5))


def test_mixed_cells():
    cells = {(1, 2): 1, (1, 3): 0, (3, 1): 1, (4, 2): 0}
    out = run_abt(cells, S, Runtime(4, seed=5))
    assert out.value == {1: AbtReceipt(0, 1), 2: AbtReceipt(1, 1), 3: AbtReceipt(1, 0),
                         4: AbtReceipt(0, 0)}


def test_broadcast_reveal_variant():
    out = run_abt({(2, 4): 0}, S, Runtime(4, seed=1), broadcast_reveal=True)
    assert out.value[4] == AbtReceipt(1, 0)


def test_corrupted_subelection_aborts_everything():
    rule = {"abt.t3.reveal": TamperBits(None)}
    out = run_abt({(1, 2): 1}, 2000, Runtime(4, corrupt=CorruptSet.of([2], rule)))
    assert out.abort is AbortReason.VETO_TRIGGERED
    assert not out.detail[3].completed


def test_reveal_goes_to_target_only():
    ctx = Runtime(4)
    abt_subelection(ctx, 2, {1: 3, 2: 3, 3: 3, 4: 3}, 10)
    reveals = [e for e in ctx.transcript.events if e.step.endswith(".reveal")]
    assert {e.receiver for e in reveals} == {2}


def test_sender_identity_hidden_from_target():
    # Target 3 cannot tell whether 1 or 2 sent it the bit (exhaustive, s = 1).
    def view(choices):
        def run(tapes):
            ctx = Runtime(3, tapes=tapes)
            abt_subelection(ctx, 3, choices, 1)
            return ctx.transcript.view({3})
        return exact_distribution(run, 3, exhaustive=[1, 2], seed=2)
    assert view({1: 2, 2: 3, 3: 3}) == view({1: 3, 2: 2, 3: 3})


@pytest.mark.parametrize("cells", [{(1, 1): 0}, {(1, 5): 1}, {(1, 2): 2}])
def test_invalid_cells(cells):
    with pytest.raises(ConfigurationError):
        normalize_cells(cells, 4)
