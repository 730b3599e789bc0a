"""Secret-ballot vote among ``m`` candidates.

Phase A runs, for every candidate ``k``, ``s`` parity rounds in which voters
for ``k`` flip their input with probability ``1/n``; results stay local.
Phase B reveals all ``m * s`` local sums at once over simultaneous broadcast.
Phase C estimates, per candidate, the frequency ``sigma`` of odd rounds and
decodes the number of flippers ``v`` from it: with ``v`` independent
``1/n``-flippers a round is odd with probability

    p_v = (1 - ((n - 2) / n) ** v) / 2.

A corrupt voter can flip more often (vote more than once) but cannot make the
parity less random, so checking that the counts sum to ``n`` catches it.

All comparisons are exact: ``p_v`` and ``sigma`` are fractions and the decode
threshold ``1 / (2 e^2 n)`` is compared through a certified rational
enclosure of ``e^-2``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .bits import Bits, xor_all
from .errors import ConfigurationError
from .parity import Withheld, parity_round
from .runtime import AbortReason, Outcome, Runtime


@dataclass(frozen=True)
class Tally:
    counts: dict[int, int]
    # Odd-round frequency per candidate, numerator over s.
    sigma: dict[int, Fraction]


@lru_cache(maxsize=None)
def _p_table(n: int) -> tuple[Fraction, ...]:
    ratio = Fraction(n - 2, n)
    out = []
    power = Fraction(1)
    for _ in range(n + 1):
        out.append((1 - power) / 2)
        power *= ratio
    return tuple(out)


def p_v(n: int, v: int) -> Fraction:
    """Probability that a parity round is odd with ``v`` flippers at rate ``1/n``."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 0 <= v <= n:
        raise ValueError(f"v must lie in 0..{n}")
    return _p_table(n)[v]


@lru_cache(maxsize=None)
def _exp_minus_two(terms: int) -> tuple[Fraction, Fraction]:
    """Rational interval containing ``e**-2`` from the alternating Taylor series."""
    total = Fraction(0)
    term = Fraction(1)
    for k in range(terms + 1):
        total += term
        term = term * -2 / (k + 1)
    # |remainder| <= first omitted term once terms decrease (k >= 2).
    err = abs(term)
    return total - err, total + err


def within_threshold(distance: Fraction, n: int) -> bool:
    """Exact test of ``distance < 1 / (2 e^2 n)`` for non-negative rational ``distance``."""
    scaled = 2 * n * distance  # compare against e^-2
    terms = 40
    while True:
        lo, hi = _exp_minus_two(terms)
        if scaled < lo:
            return True
        if scaled >= hi:
            return False
        terms *= 2


def decode_threshold(n: int) -> float:
    """``1 / (2 e^2 n)`` as a float, for reporting only."""
    return math.exp(-2) / (2 * n)


def decode_count(sigma: Fraction, n: int) -> int | None:
    """The ``v`` whose ``p_v`` lies within ``1/(2 e^2 n)`` of ``sigma``, else None.

    The windows of ``p_{n-1}`` and ``p_n`` overlap slightly; a ``sigma`` in
    both decodes to the nearer point (the smaller ``v`` on an exact tie).
    """
    sigma = Fraction(sigma)
    if not 0 <= sigma <= 1:
        raise ValueError("sigma must lie in [0, 1]")
    table = _p_table(n)
    # The table is increasing, so only the points either side of sigma can be nearest.
    k = bisect.bisect_left(table, sigma)
    best = None
    best_dist = None
    for v in (k - 1, k):
        if not 0 <= v <= n:
            continue
        dist = abs(sigma - table[v])
        if within_threshold(dist, n) and (best_dist is None or dist < best_dist):
            best, best_dist = v, dist
    return best


def phase_a(ctx: Runtime, choices: Mapping[int, int], m: int, s: int,
            step: str) -> dict[int, list[Bits]]:
    """Store-only parity rounds; returns ``z[i][k - 1]`` as ``s``-bit vectors."""
    rate = Fraction(1, ctx.n)
    everyone = frozenset(ctx.participants)
    z: dict[int, list[Bits]] = {i: [] for i in ctx.participants}
    for k in range(1, m + 1):
        flips = {i: ctx.flips(i, f"{step}.k{k}.flip", s, rate if choices[i] == k else Fraction(0))
                 for i in ctx.participants}
        rnd = parity_round(ctx, flips, Withheld(everyone), f"{step}.k{k}")
        for i in ctx.participants:
            z[i].append(rnd.z[i])
    return z


def tally(parities: list[Bits], n: int) -> Outcome[Tally]:
    """Phase C on the per-candidate round parities."""
    counts: dict[int, int] = {}
    sigmas: dict[int, Fraction] = {}
    for k, bits in enumerate(parities, 1):
        sigmas[k] = Fraction(bits.count(), len(bits))
        v = decode_count(sigmas[k], n)
        if v is not None:
            counts[k] = v
    result = Tally(counts, sigmas)
    if len(counts) < len(parities):
        # Counts then only hold the candidates that did decode.
        return Outcome.aborted(AbortReason.TALLY_INCONSISTENT, result)
    if sum(counts.values()) != n:
        return Outcome.aborted(AbortReason.SUM_NOT_N, result)
    return Outcome(result)


def split_reveal(payload: Bits, m: int, s: int) -> list[Bits]:
    return [payload[(k - 1) * s:k * s] for k in range(1, m + 1)]


def check_vote_inputs(inputs: Mapping[int, int], n: int, m: int, s: int) -> None:
    if m < 2:
        raise ConfigurationError("vote needs at least 2 candidates")
    if s < 1:
        raise ConfigurationError("s must be at least 1")
    if set(inputs) != set(range(1, n + 1)):
        raise ConfigurationError("vote needs one choice per participant")
    for i, x in inputs.items():
        if not 1 <= x <= m:
            raise ConfigurationError(f"participant {i} votes {x}, outside 1..{m}")


def run_vote(inputs: Mapping[int, int], m: int, s: int, ctx: Runtime,
             step: str = "vote") -> Outcome[Tally]:
    check_vote_inputs(inputs, ctx.n, m, s)
    z = phase_a(ctx, inputs, m, s, step)
    ctx.new_round()
    revealed = ctx.simultaneous_broadcast(
        {i: Bits.concat(z[i]) for i in ctx.participants}, f"{step}.reveal")
    missing = sorted(i for i, v in revealed.items() if v is None)
    if missing:
        return Outcome.aborted(AbortReason.SIM_BROADCAST_FAILURE, missing)
    pieces = {i: split_reveal(v, m, s) for i, v in revealed.items()}
    parities = [xor_all((pieces[i][k] for i in ctx.participants), s) for k in range(m)]
    return tally(parities, ctx.n)
