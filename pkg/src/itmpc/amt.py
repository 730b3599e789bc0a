"""Anonymous message transmission.

Fixed-role transmission: the sender AMD-encodes its message and the group runs
one parity round per codeword bit.  The sender inputs the codeword, the
receiver inputs a uniform pad and everybody else inputs 0, so every
announcement is uniformly distributed to anyone but the receiver.  The
receiver strips the pad, decodes, and vetoes if decoding failed.

Full transmission first runs collision detection to establish that there is
exactly one sender, then lets that sender notify its receiver, then runs the
fixed-role protocol between them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Collection, Mapping

from .amd import AmdParams, amd_decode, amd_encode
from .bits import Bits, xor_all
from .errors import ConfigurationError
from .parity import Sequential, parity_round
from .runtime import AbortReason, Outcome, Runtime
from .signaling import run_collision_detection, run_notification
from .veto import run_veto, veto_orderings


@dataclass(frozen=True)
class Send:
    receiver: int
    message: Bits


NO_SEND = None


class Status(enum.Enum):
    NO_TRANSMISSION = "NoTransmission"
    COLLISION = "Collision"
    DELIVERED = "Delivered"


@dataclass(frozen=True)
class AmtResult:
    status: Status
    # Per participant output: the message for the receiver, None for everybody else.
    outputs: dict[int, Bits | None] = field(default_factory=dict)

    @property
    def receiver(self) -> int | None:
        for i, w in self.outputs.items():
            if w is not None:
                return i
        return None


def run_fixed_role_amt_roles(senders: Mapping[int, Bits], receivers: Collection[int],
                             m: int, s: int, ctx: Runtime, *, strict_pad: bool = False,
                             step: str = "framt") -> Outcome[dict[int, Bits | None]]:
    """Fixed-role transmission where any number of participants believe they
    are the sender or the receiver.

    Honest runs have one of each.  The result maps every participant to its
    output; only receivers can have a non-None output.  ``strict_pad`` pads
    only the first ``m`` rounds, leaving the tag rounds unmasked.
    """
    params = AmdParams.for_message(m, s)
    L = params.length
    inputs: dict[int, Bits] = {i: Bits.zeros(L) for i in ctx.participants}
    pads: dict[int, Bits] = {}
    for i, w in senders.items():
        inputs[i] = inputs[i] ^ amd_encode(w, params, ctx.tape(i))
    for r in receivers:
        raw = Bits(ctx.tape(r).bits(L), L)
        pads[r] = Bits.concat([raw[:m], Bits.zeros(L - m)]) if strict_pad else raw
        inputs[r] = inputs[r] ^ pads[r]

    # Contiguous blocks of rounds, block k announced in rotation k.
    orders = veto_orderings(ctx.n)
    bounds = [L * k // ctx.n for k in range(ctx.n + 1)]
    d_parts: list[Bits] = []
    refused = False
    for k, order in enumerate(orders):
        lo, hi = bounds[k], bounds[k + 1]
        if hi == lo:
            continue
        block = {i: inputs[i][lo:hi] for i in ctx.participants}
        rnd = parity_round(ctx, block, Sequential(order), f"{step}.b{k + 1}")
        if rnd.refused:
            refused = True
            d_parts.append(Bits.zeros(hi - lo))
        else:
            d_parts.append(xor_all(rnd.announced.values(), hi - lo))
    d = Bits.concat(d_parts)

    decoded: dict[int, Bits | None] = {}
    for r in receivers:
        decoded[r] = None if refused else amd_decode(d ^ pads[r], params)
    veto_in = {i: int(i in decoded and decoded[i] is None) for i in ctx.participants}
    final = run_veto(veto_in, s, ctx, f"{step}.veto").value
    if final.result:
        return Outcome.aborted(AbortReason.VETO_TRIGGERED)
    return Outcome({i: decoded.get(i) for i in ctx.participants})


def run_fixed_role_amt(sender: int, receiver: int, w: Bits, s: int, ctx: Runtime, *,
                       strict_pad: bool = False, step: str = "framt") -> Outcome[Bits]:
    """Send ``w`` from ``sender`` to ``receiver``; the value is what the receiver outputs."""
    if sender == receiver:
        raise ConfigurationError("sender and receiver must differ")
    for p in (sender, receiver):
        if p not in ctx.participants:
            raise ConfigurationError(f"participant {p} out of range")
    out = run_fixed_role_amt_roles({sender: w}, [receiver], len(w), s, ctx,
                                   strict_pad=strict_pad, step=step)
    if not out.completed:
        return out
    return Outcome(out.value[receiver])


def check_amt_inputs(inputs: Mapping[int, Send | None], n: int) -> int:
    """Validate inputs and return the common message length (0 if nobody sends)."""
    if set(inputs) != set(range(1, n + 1)):
        raise ConfigurationError("need one input per participant")
    lengths = set()
    for i, x in inputs.items():
        if x is NO_SEND:
            continue
        if not 1 <= x.receiver <= n:
            raise ConfigurationError(f"participant {i} sends to unknown receiver {x.receiver}")
        if x.receiver == i:
            raise ConfigurationError(f"participant {i} cannot send to itself")
        lengths.add(len(x.message))
    if len(lengths) > 1:
        raise ConfigurationError(f"message lengths differ: {sorted(lengths)}")
    if 0 in lengths:
        raise ConfigurationError("messages must be non-empty")
    return lengths.pop() if lengths else 0


def run_amt(inputs: Mapping[int, Send | None], s: int, ctx: Runtime, *, m: int | None = None,
            step: str = "amt") -> Outcome[AmtResult]:
    """Anonymous transmission from at most one sender.

    ``m`` is the public message length; it defaults to the senders' common
    length and must be given when nobody sends but the run may reach stage 3
    because of corrupt behaviour.
    """
    m_inputs = check_amt_inputs(inputs, ctx.n)
    m = m if m is not None else (m_inputs or 1)
    if m_inputs and m != m_inputs:
        raise ConfigurationError(f"message length {m_inputs} differs from m={m}")

    cd = run_collision_detection({i: int(x is not NO_SEND) for i, x in inputs.items()}, s, ctx,
                                 f"{step}.collision").value
    if cd == 0:
        return Outcome(AmtResult(Status.NO_TRANSMISSION))
    if cd == 2:
        return Outcome(AmtResult(Status.COLLISION))

    senders = {i: x for i, x in inputs.items() if x is not NO_SEND}
    flags = {(i, x.receiver): 1 for i, x in senders.items()}
    note = run_notification(flags, s, ctx, f"{step}.notify")
    if not note.completed:
        return note
    receivers = [i for i, y in note.value.items() if y]
    out = run_fixed_role_amt_roles({i: x.message for i, x in senders.items()}, receivers,
                                   m, s, ctx, step=f"{step}.framt")
    if not out.completed:
        return out
    return Outcome(AmtResult(Status.DELIVERED, out.value))
