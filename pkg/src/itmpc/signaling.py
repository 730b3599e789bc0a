"""Collision detection and notification, the coordination steps of message transmission."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .bits import Bits
from .parity import Sequential, Withheld, parity_round
from .runtime import AbortReason, Outcome, Runtime
from .veto import HALF, run_veto


def run_collision_detection(inputs: Mapping[int, int], s: int, ctx: Runtime,
                            step: str = "collision") -> Outcome[int]:
    """Output ``min(sum(inputs), 2)`` using two vetoes.

    Veto A ORs ``min(x_i, 1)``.  If it comes out 1, a second veto ORs
    ``b_i``: set by participants that had input 1 in veto A and saw somebody
    else's flip there, or whose input is 2.  A corrupt participant can still
    pick input 0 when everyone else is silent and 1 otherwise; that deviation
    is inherent to the construction and left as is.
    """
    if set(inputs) != set(ctx.participants) or any(x not in (0, 1, 2) for x in inputs.values()):
        raise ValueError("collision detection needs one input in {0,1,2} per participant")
    a_inputs = {i: min(x, 1) for i, x in inputs.items()}
    veto_a = run_veto(a_inputs, s, ctx, f"{step}.A").value
    if veto_a.result == 0:
        return Outcome(0)
    b_inputs = {i: int((a_inputs[i] == 1 and veto_a.saw_other_one[i] == 1) or inputs[i] == 2)
                for i in ctx.participants}
    veto_b = run_veto(b_inputs, s, ctx, f"{step}.B").value
    return Outcome(2 if veto_b.result else 1)


def run_notification(flags: Mapping[tuple[int, int], int], s: int, ctx: Runtime,
                     step: str = "notify") -> Outcome[dict[int, int]]:
    """Tell each participant privately whether anybody notified it.

    ``flags[(j, i)] = 1`` means ``j`` notifies ``i``; missing pairs are 0.
    For each target ``i`` in ascending order the others run ``s`` parity
    rounds with ``i`` silent, flipping with probability 1/2 if they notify
    ``i``.  Only ``i`` can reconstruct the outcome.  Any refusal to broadcast
    aborts the whole protocol.
    """
    if s < 1:
        raise ValueError("s must be at least 1")
    for (j, i), x in flags.items():
        if j == i:
            raise ValueError(f"participant {j} cannot notify itself")
        if x not in (0, 1) or j not in ctx.participants or i not in ctx.participants:
            raise ValueError(f"bad notification flag {(j, i)}={x}")
    out: dict[int, int] = {}
    for target in ctx.participants:
        flips = {j: ctx.flips(j, f"{step}.t{target}.flip", s,
                              HALF if flags.get((j, target), 0) else Fraction(0))
                 if j != target else Bits.zeros(s)
                 for j in ctx.participants}
        order = tuple(j for j in ctx.participants if j != target)
        rnd = parity_round(ctx, flips, Withheld(frozenset({target}), Sequential(order)),
                           f"{step}.t{target}")
        if rnd.refused:
            return Outcome.aborted(AbortReason.REFUSED_BROADCAST, sorted(rnd.refused))
        out[target] = int(bool(rnd.outputs[target]))
    return Outcome(out)

