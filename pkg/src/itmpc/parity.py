"""Dining-cryptographers parity with configurable announcement.

Every participant splits its input into ``n`` shares whose XOR is the input,
sends share ``j`` to participant ``j`` over a private channel, XORs what it
received into ``z_i`` and then announces ``z_i``.  The XOR of all ``z_i`` is
the XOR of all inputs.  Downstream protocols reuse the round with different
announcement channels, so the channel is a parameter.

Inputs may be :class:`Bits` of any common length ``L``: this runs ``L``
independent parity instances side by side, one per element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from .bits import Bits, xor_all
from .runtime import AbortReason, Outcome, Runtime


@dataclass(frozen=True)
class Simultaneous:
    pass


@dataclass(frozen=True)
class Sequential:
    order: tuple[int, ...]


@dataclass(frozen=True)
class PrivateTo:
    receiver: int


@dataclass(frozen=True)
class Withheld:
    """``silent`` participants keep ``z_i`` to themselves; the rest announce via ``then``.

    ``then=None`` means nobody announces anything (store-only rounds).
    """
    silent: frozenset[int]
    then: Union[Simultaneous, Sequential, None] = None


AnnouncementMode = Union[Simultaneous, Sequential, PrivateTo, Withheld]


@dataclass
class ParityRound:
    length: int
    z: dict[int, Bits]
    announced: dict[int, Bits] = field(default_factory=dict)
    refused: set[int] = field(default_factory=set)
    outputs: dict[int, Bits] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return bool(self.refused)


def make_shares(x: Bits | int, n: int, tape, length: int | None = None) -> list[Bits]:
    """Uniform ``n`` shares with XOR equal to ``x``.

    ``n - 1`` shares are drawn uniformly and the share for participant ``n``
    fixes the parity.  Returned list index ``j - 1`` is the share for ``j``.
    """
    if n < 3:
        raise ValueError("parity needs n >= 3")
    if not isinstance(x, Bits):
        x = Bits(x, 1 if length is None else length)
    L = len(x)
    raw = tape.bits(L * (n - 1))
    mask = (1 << L) - 1
    shares = [Bits((raw >> (L * k)) & mask, L) for k in range(n - 1)]
    shares.append(xor_all(shares, L) ^ x)
    return shares


def local_sum(received) -> int:
    """XOR of a participant's received bits (own kept share included)."""
    acc = 0
    for b in received:
        acc ^= b
    return acc


def parity_round(ctx: Runtime, inputs: Mapping[int, Bits], mode: AnnouncementMode,
                 step: str = "parity") -> ParityRound:
    n = ctx.n
    L = len(inputs[1])
    ctx.new_round()
    received: dict[int, list[Bits]] = {i: [] for i in ctx.participants}
    for i in ctx.participants:
        shares = make_shares(inputs[i], n, ctx.tape(i))
        for j in ctx.participants:
            if j == i:
                received[i].append(shares[j - 1])
            else:
                received[j].append(ctx.send_private(i, j, shares[j - 1], f"{step}.share"))
    z = {i: xor_all(received[i], L) for i in ctx.participants}
    rnd = ParityRound(L, z)

    ctx.new_round()
    silent: frozenset[int] = frozenset()
    channel = mode
    if isinstance(mode, Withheld):
        silent = mode.silent
        channel = mode.then
    announce = f"{step}.announce"

    if isinstance(channel, Simultaneous):
        got = ctx.simultaneous_broadcast(
            {i: z[i] for i in ctx.participants if i not in silent}, announce)
        for i, v in got.items():
            if v is None:
                rnd.refused.add(i)
            else:
                rnd.announced[i] = v
    elif isinstance(channel, Sequential):
        for i in channel.order:
            if i in silent:
                continue
            v = ctx.broadcast(i, z[i], announce, prior=rnd.announced)
            if v is None:
                rnd.refused.add(i)
            else:
                rnd.announced[i] = v
    elif isinstance(channel, PrivateTo):
        r = channel.receiver
        for i in ctx.participants:
            if i != r:
                rnd.announced[i] = ctx.send_private(i, r, z[i], announce)
    elif channel is not None:
        raise TypeError(f"unknown announcement mode {mode!r}")

    if rnd.refused:
        return rnd
    if isinstance(channel, PrivateTo):
        r = channel.receiver
        rnd.outputs[r] = xor_all(rnd.announced.values(), L) ^ z[r]
    elif channel is not None:
        public = xor_all(rnd.announced.values(), L)
        if not silent:
            rnd.outputs = {i: public for i in ctx.participants}
        elif len(silent) == 1:
            (k,) = silent
            rnd.outputs[k] = public ^ z[k]
    return rnd


def run_parity(inputs: Mapping[int, int], mode: AnnouncementMode, ctx: Runtime,
               step: str = "parity") -> Outcome[dict[int, int]]:
    """One parity instance; maps each participant able to compute it to the XOR."""
    if set(inputs) != set(ctx.participants):
        raise ValueError("need exactly one input per participant")
    if any(x not in (0, 1) for x in inputs.values()):
        raise ValueError("parity inputs must be bits")
    rnd = parity_round(ctx, {i: Bits(x, 1) for i, x in inputs.items()}, mode, step)
    if rnd.refused:
        channel = mode.then if isinstance(mode, Withheld) else mode
        reason = (AbortReason.SIM_BROADCAST_FAILURE if isinstance(channel, Simultaneous)
                  else AbortReason.REFUSED_BROADCAST)
        return Outcome.aborted(reason, sorted(rnd.refused))
    return Outcome({i: y[0] for i, y in rnd.outputs.items()})
