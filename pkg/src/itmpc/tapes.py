"""Randomness sources for protocol participants.

A :class:`RandomTape` is either seeded (a numpy PCG64 stream derived from a
64-bit run seed and the participant index) or exhaustive.  Exhaustive tapes
draw from a shared :class:`Odometer` that walks every joint assignment of
the draws depth-first; :func:`enumerate_tapes` drives it and reports the
exact probability of each assignment, which lets privacy tests compare view
distributions without sampling error.

Every draw is a uniform choice from ``range(radix)``.  Rational Bernoulli
draws use ``below(den) < num`` so probabilities such as 1/3 are exact in both
modes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .errors import ConfigurationError

EXHAUSTIVE_LIMIT = 1 << 24


class Odometer:
    """Depth-first mixed-radix counter over a run's sequence of draws.

    The run is deterministic given its draws, so replaying a prefix of digits
    reproduces the same sequence of radices; advancing bumps the deepest digit
    that still has room and discards everything after it.
    """

    def __init__(self, limit: int = EXHAUSTIVE_LIMIT):
        self.limit = limit
        self.digits: list[int] = []
        self.radices: list[int] = []
        self.cursor = 0
        self.space = 1
        self.index = 0

    def draw(self, radix: int) -> int:
        if radix == 1:
            return 0
        if self.cursor < len(self.digits):
            if self.radices[self.cursor] != radix:
                raise RuntimeError("draw schedule diverged between replays")
            digit = self.digits[self.cursor]
        else:
            self.space *= radix
            if self.space > self.limit:
                raise ConfigurationError(
                    f"exhaustive randomness space exceeds {self.limit} assignments")
            self.digits.append(0)
            self.radices.append(radix)
            digit = 0
        self.cursor += 1
        return digit

    def probability(self) -> Fraction:
        denom = 1
        for r in self.radices[:self.cursor]:
            denom *= r
        return Fraction(1, denom)

    def advance(self) -> bool:
        """Move to the next assignment; False once every assignment was visited."""
        del self.digits[self.cursor:], self.radices[self.cursor:]
        while self.digits:
            if self.digits[-1] + 1 < self.radices[-1]:
                self.digits[-1] += 1
                break
            self.digits.pop()
            self.radices.pop()
        else:
            return False
        self.space = 1
        for r in self.radices:
            self.space *= r
        self.cursor = 0
        self.index += 1
        return True


class RandomTape:
    """Per-participant randomness, seeded or exhaustive."""

    def __init__(self, seed: int | None = None, *, participant: int = 0,
                 odometer: Odometer | None = None):
        if (seed is None) == (odometer is None):
            raise ValueError("give exactly one of seed or odometer")
        self.seed = seed
        self.participant = participant
        self.odometer = odometer
        self.position = 0
        if odometer is None:
            ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, participant])
            self._rng = np.random.Generator(np.random.PCG64(ss))

    @classmethod
    def seeded(cls, seed: int, participant: int = 0) -> RandomTape:
        return cls(seed, participant=participant)

    @property
    def exhaustive(self) -> bool:
        return self.odometer is not None

    def below(self, radix: int) -> int:
        """Uniform integer in ``range(radix)``."""
        if radix < 1:
            raise ValueError("radix must be positive")
        self.position += 1
        if self.odometer is not None:
            return self.odometer.draw(radix)
        if radix == 1:
            return 0
        return int(self._rng.integers(radix))

    def bits(self, length: int) -> int:
        """``length`` uniform bits packed into an int."""
        if length == 0:
            return 0
        if self.odometer is not None:
            self.position += 1
            return self.odometer.draw(1 << length)
        self.position += 1
        raw = self._rng.bytes((length + 7) // 8)
        return int.from_bytes(raw, "little") & ((1 << length) - 1)

    def bernoulli(self, length: int, p: Fraction) -> int:
        """``length`` independent bits, each 1 with probability ``p``."""
        p = Fraction(p)
        if not 0 <= p <= 1:
            raise ValueError(f"probability out of range: {p}")
        if length == 0 or p == 0:
            return 0
        if p == 1:
            return (1 << length) - 1
        num, den = p.numerator, p.denominator
        if self.odometer is not None:
            out = 0
            for k in range(length):
                if self.below(den) < num:
                    out |= 1 << k
            return out
        self.position += 1
        draws = self._rng.integers(0, den, size=length) < num
        packed = np.packbits(draws, bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")


def seeded_tapes(n: int, seed: int) -> dict[int, RandomTape]:
    return {i: RandomTape.seeded(seed, i) for i in range(1, n + 1)}


class Assignment:
    """One joint assignment of exhaustive draws, handed out by :func:`enumerate_tapes`."""

    __slots__ = ("tapes", "_odo")

    def __init__(self, tapes: dict[int, RandomTape], odo: Odometer):
        self.tapes = tapes
        self._odo = odo

    @property
    def index(self) -> int:
        return self._odo.index

    def probability(self) -> Fraction:
        """Exact probability of this assignment; valid once the run has finished."""
        return self._odo.probability()


def enumerate_tapes(n: int, exhaustive: Iterable[int] | None = None, *,
                    seed: int = 0, limit: int = EXHAUSTIVE_LIMIT) -> Iterator[Assignment]:
    """Walk every joint assignment of the exhaustive participants' draws.

    Participants outside ``exhaustive`` (default: everyone is exhaustive) get
    fresh seeded tapes with the same seed on every run, so the enumeration is
    conditioned on their randomness.  Run the protocol to completion with
    ``assignment.tapes`` before advancing the iterator.
    """
    members = set(range(1, n + 1) if exhaustive is None else exhaustive)
    odo = Odometer(limit)
    while True:
        tapes = {
            i: RandomTape(odometer=odo, participant=i) if i in members
            else RandomTape.seeded(seed, i)
            for i in range(1, n + 1)
        }
        yield Assignment(tapes, odo)
        if not odo.advance():
            return


def exact_distribution(run, n: int, exhaustive: Iterable[int] | None = None, *,
                       seed: int = 0, limit: int = EXHAUSTIVE_LIMIT) -> dict:
    """Exact distribution of ``run(tapes)`` over every enumerated assignment.

    ``run`` must return something hashable, typically a transcript projection.
    """
    dist: dict = {}
    for a in enumerate_tapes(n, exhaustive, seed=seed, limit=limit):
        key = run(a.tapes)
        dist[key] = dist.get(key, 0) + a.probability()
    return dist
