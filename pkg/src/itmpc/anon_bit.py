"""Anonymous bit transmission.

Every participant may send one bit to each other participant.  For each
target ``j`` the group holds a three-candidate vote (bit 0, bit 1, abstain)
whose phase-B reveal goes to ``j`` alone, so only ``j`` learns how many 0s and
1s it was sent.  Each target reports success or failure into a final veto;
any failure aborts the whole protocol.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .bits import Bits, xor_all
from .errors import ConfigurationError
from .runtime import AbortReason, Outcome, Runtime
from .veto import run_veto
from .vote import Tally, phase_a, split_reveal, tally

ABSTAIN = None
# Vote candidate for each cell value.
CANDIDATE = {0: 1, 1: 2, ABSTAIN: 3}


@dataclass(frozen=True)
class AbtReceipt:
    zero_count: int
    one_count: int


def normalize_cells(cells: Mapping[tuple[int, int], int | None], n: int
                    ) -> dict[tuple[int, int], int | None]:
    """Complete matrix over all ordered pairs; missing cells and self-cells abstain."""
    out = {}
    for (i, j), x in cells.items():
        if not (1 <= i <= n and 1 <= j <= n):
            raise ConfigurationError(f"cell {(i, j)} out of range")
        if x not in (0, 1, ABSTAIN):
            raise ConfigurationError(f"cell {(i, j)} must be 0, 1 or abstain, got {x!r}")
        if i == j and x is not ABSTAIN:
            raise ConfigurationError(f"participant {i} cannot send a bit to itself")
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            out[(i, j)] = cells.get((i, j), ABSTAIN)
    return out


def abt_subelection(ctx: Runtime, target: int, choices: Mapping[int, int], s: int, *,
                    broadcast_reveal: bool = False, step: str = "abt") -> Outcome[Tally]:
    """One target's vote.  The tally is computed by ``target`` alone.

    With ``broadcast_reveal`` the others broadcast their local sums while the
    target stays silent, which keeps the tally private without private
    channels.
    """
    prefix = f"{step}.t{target}"
    z = phase_a(ctx, choices, 3, s, prefix)
    ctx.new_round()
    reveal_step = f"{prefix}.reveal"
    got: dict[int, Bits] = {target: Bits.concat(z[target])}
    if broadcast_reveal:
        order = tuple(i for i in ctx.participants if i != target)
        for i in order:
            v = ctx.broadcast(i, Bits.concat(z[i]), reveal_step, prior=got)
            if v is None:
                return Outcome.aborted(AbortReason.REFUSED_BROADCAST, [i])
            got[i] = v
    else:
        for i in ctx.participants:
            if i != target:
                got[i] = ctx.send_private(i, target, Bits.concat(z[i]), reveal_step)
    pieces = {i: split_reveal(v, 3, s) for i, v in got.items()}
    parities = [xor_all((pieces[i][k] for i in ctx.participants), s) for k in range(3)]
    return tally(parities, ctx.n)


def run_abt(cells: Mapping[tuple[int, int], int | None], s: int, ctx: Runtime, *,
            broadcast_reveal: bool = False, step: str = "abt"
            ) -> Outcome[dict[int, AbtReceipt]]:
    """``cells[(i, j)]`` is the bit ``i`` sends to ``j`` (0, 1 or None to abstain)."""
    if s < 1:
        raise ConfigurationError("s must be at least 1")
    cells = normalize_cells(cells, ctx.n)
    subs: dict[int, Outcome[Tally]] = {}
    success: dict[int, int] = {}
    for j in ctx.participants:
        choices = {i: CANDIDATE[cells[(i, j)]] for i in ctx.participants}
        subs[j] = abt_subelection(ctx, j, choices, s, broadcast_reveal=broadcast_reveal, step=step)
        success[j] = 0 if subs[j].completed else 1
    final = run_veto(success, s, ctx, f"{step}.veto").value
    if final.result:
        return Outcome.aborted(AbortReason.VETO_TRIGGERED, subs)
    # A failed sub-election can only survive the veto if its target lied in it.
    receipts = {j: AbtReceipt(sub.value.counts[1], sub.value.counts[2])
                for j, sub in subs.items() if sub.completed}
    return Outcome(receipts)

