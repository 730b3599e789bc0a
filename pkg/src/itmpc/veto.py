"""Veto: logical OR of the inputs that no participant can make abort.

For each of ``n`` orderings (each with a different last speaker) the group
runs ``s`` parity rounds over randomized inputs: a participant with input 1
flips its parity input with probability 1/2.  Any odd outcome, or any refusal
to broadcast, sets the result to 1.

The ``s`` repetitions of one ordering run as one batched parity round.  Corrupt
announcers see earlier speakers' bits for the whole batch; repetitions use
independent randomness so this reveals nothing about a repetition's outcome
that its own prior announcements do not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .bits import xor_all
from .parity import Sequential, parity_round
from .runtime import Outcome, Runtime

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class VetoResult:
    result: int
    # Per participant: some round showed a flip that was not its own.
    saw_other_one: dict[int, int]


def veto_orderings(n: int) -> list[tuple[int, ...]]:
    """Rotations of ``1..n``; ordering ``k`` (1-based) ends with participant ``k``."""
    if n < 3:
        raise ValueError("veto needs n >= 3")
    return [tuple(list(range(k + 1, n + 1)) + list(range(1, k + 1))) for k in range(1, n + 1)]


def randomize_flip(x: int, tape, length: int = 1) -> int:
    """0 when ``x`` is 0, otherwise a fair coin per element."""
    return tape.bernoulli(length, HALF) if x else 0


def run_veto(inputs: Mapping[int, int], s: int, ctx: Runtime,
             step: str = "veto") -> Outcome[VetoResult]:
    if s < 1:
        raise ValueError("s must be at least 1")
    if set(inputs) != set(ctx.participants) or any(x not in (0, 1) for x in inputs.values()):
        raise ValueError("veto needs one input bit per participant")
    result = 0
    saw = {i: 0 for i in ctx.participants}
    for k, order in enumerate(veto_orderings(ctx.n), 1):
        flips = {i: ctx.flips(i, f"{step}.flip", s, HALF if inputs[i] else Fraction(0))
                 for i in ctx.participants}
        rnd = parity_round(ctx, flips, Sequential(order), f"{step}.o{k}")
        if rnd.refused:
            # Remaining orderings still run so the transcript shape does not leak.
            result = 1
            saw = {i: 1 for i in saw}
            continue
        outcome = xor_all(rnd.announced.values(), s)
        if outcome:
            result = 1
        for i in ctx.participants:
            if outcome ^ flips[i]:
                saw[i] = 1
    return Outcome(VetoResult(result, saw))


def veto_bits_per_peer(n: int, s: int) -> int:
    """Bits each participant delivers to each peer in an honest veto."""
    return 2 * n * s

