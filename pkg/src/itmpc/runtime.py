"""Simulation engine: participants, channels, transcript and abort outcomes.

Three channels are modelled.  Private sends are reliable and authentic; the
payload is visible only to the two endpoints.  A regular broadcast delivers one
payload to everybody, or a refusal event when a corrupt sender declines.  A
simultaneous broadcast collects every honest contribution first and then asks
corrupt participants for theirs with an empty view, so a corrupt contribution
can never be a function of an honest one from the same round.

A run is single threaded and fully determined by its tapes.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Generic, Iterable, Mapping, NamedTuple, TypeVar

from .adversary import NOBODY, AnnounceView, CorruptSet, Rule
from .bits import Bits
from .errors import ConfigurationError
from .tapes import RandomTape, seeded_tapes

T = TypeVar("T")

ALL = 0  # receiver id used for broadcast events


class AbortReason(enum.Enum):
    SIM_BROADCAST_FAILURE = "SimBroadcastFailure"
    REFUSED_BROADCAST = "RefusedBroadcast"
    TALLY_INCONSISTENT = "TallyInconsistent"
    SUM_NOT_N = "SumNotN"
    VETO_TRIGGERED = "VetoTriggered"


@dataclass(frozen=True)
class Outcome(Generic[T]):
    """Result of a protocol run: a value, or the reason it aborted.

    ``detail`` carries diagnostic data on abort (for example the per-target
    sub-election outcomes of anonymous bit transmission).
    """
    value: T | None = None
    abort: AbortReason | None = None
    detail: Any = None

    @property
    def completed(self) -> bool:
        return self.abort is None

    @classmethod
    def aborted(cls, reason: AbortReason, detail: Any = None) -> Outcome:
        return cls(None, reason, detail)

    def __repr__(self) -> str:
        if self.completed:
            return f"Completed({self.value!r})"
        return f"Aborted({self.abort.value})"


class Kind(enum.Enum):
    PRIVATE = "private"
    BROADCAST = "broadcast"
    SIM_BROADCAST = "simbroadcast"
    REFUSAL = "refusal"


class Event(NamedTuple):
    round: int
    kind: Kind
    step: str
    sender: int
    receiver: int  # ALL for broadcasts and refusals
    payload: Bits | None

    def render(self) -> str:
        payload = "-" if self.payload is None else str(self.payload)
        to = "*" if self.receiver == ALL else str(self.receiver)
        return f"{self.round} {self.kind.value} {self.step} {self.sender}>{to} {payload}"


class Transcript:
    """Append-only log of every channel use in a run."""

    def __init__(self, n: int):
        self.n = n
        self.events: list[Event] = []
        self.total_bits_sent: dict[int, int] = {i: 0 for i in range(1, n + 1)}
        self._pair_bits: dict[tuple[int, int], int] = {}
        self._broadcast_bits: dict[int, int] = {i: 0 for i in range(1, n + 1)}

    def append(self, event: Event) -> None:
        self.events.append(event)
        if event.payload is not None:
            size = len(event.payload)
            self.total_bits_sent[event.sender] += size
            if event.kind is Kind.PRIVATE:
                key = (event.sender, event.receiver)
                self._pair_bits[key] = self._pair_bits.get(key, 0) + size
            else:
                self._broadcast_bits[event.sender] += size

    def bits_to(self, sender: int, receiver: int) -> int:
        """Bits ``sender`` delivered to ``receiver``: private sends plus broadcasts."""
        return self._pair_bits.get((sender, receiver), 0) + self._broadcast_bits[sender]

    def max_bits_to_any_peer(self, sender: int) -> int:
        return max(self.bits_to(sender, j) for j in range(1, self.n + 1) if j != sender)

    def visible_to(self, members: Iterable[int]) -> list[Event]:
        """Events observable by a coalition: broadcasts plus private sends touching it."""
        members = set(members)
        return [e for e in self.events
                if e.kind is not Kind.PRIVATE
                or e.sender in members or e.receiver in members]

    def view(self, members: Iterable[int]) -> tuple:
        """Hashable projection of :meth:`visible_to`, for distribution checks."""
        return tuple((e.kind.value, e.step, e.sender, e.receiver,
                      None if e.payload is None else (e.payload.value, e.payload.length))
                     for e in self.visible_to(members))

    def render(self) -> str:
        return "\n".join(e.render() for e in self.events)

    def digest(self) -> str:
        h = hashlib.sha256()
        for e in self.events:
            h.update(e.render().encode())
            h.update(b"\n")
        return h.hexdigest()

    def __len__(self) -> int:
        return len(self.events)


class Runtime:
    """Per-run context threaded through every protocol."""

    def __init__(self, n: int, *, corrupt: CorruptSet = NOBODY,
                 tapes: Mapping[int, RandomTape] | None = None, seed: int = 0):
        if n < 3:
            raise ConfigurationError(f"need at least 3 participants, got {n}")
        bad = [i for i in corrupt.members if not 1 <= i <= n]
        if bad:
            raise ConfigurationError(f"corrupt participants out of range: {bad}")
        self.n = n
        self.participants = range(1, n + 1)
        self.corrupt = corrupt
        self.tapes = dict(tapes) if tapes is not None else seeded_tapes(n, seed)
        missing = [i for i in self.participants if i not in self.tapes]
        if missing:
            raise ConfigurationError(f"no tape for participants {missing}")
        self.transcript = Transcript(n)
        self.round = 0

    def tape(self, i: int) -> RandomTape:
        return self.tapes[i]

    def is_corrupt(self, i: int) -> bool:
        return i in self.corrupt

    def rule(self, i: int, step: str) -> Rule | None:
        if i not in self.corrupt:
            return None
        return self.corrupt.rule(i, step)

    def new_round(self) -> int:
        self.round += 1
        return self.round

    def flips(self, i: int, step: str, length: int, p: Fraction) -> Bits:
        """``length`` randomizing bits for participant ``i``, honest probability ``p``."""
        rule = self.rule(i, step)
        if rule is not None:
            p = rule.flip_probability(Fraction(p))
        return Bits(self.tapes[i].bernoulli(length, p), length)

    def send_private(self, sender: int, receiver: int, payload: Bits, step: str) -> Bits:
        """Deliver ``payload`` to ``receiver``; returns what the receiver got."""
        if sender == receiver:
            raise ValueError("private send to self")
        rule = self.rule(sender, step)
        if rule is not None:
            payload = rule.send(payload, self.tapes[sender])
        self.transcript.append(Event(self.round, Kind.PRIVATE, step, sender, receiver, payload))
        return payload

    def broadcast(self, sender: int, payload: Bits, step: str,
                  prior: Mapping[int, Bits] | None = None) -> Bits | None:
        """Regular broadcast; returns the delivered bits or None on refusal.

        ``prior`` is what the sender has already seen announced in this round.
        """
        rule = self.rule(sender, step)
        if rule is not None:
            view = AnnounceView(step, sender, dict(prior or {}))
            payload = rule.announce(payload, view, self.tapes[sender])
            if payload is not None and not isinstance(payload, Bits):
                raise TypeError("rule returned a non-Bits announcement")
        if payload is None:
            self.transcript.append(Event(self.round, Kind.REFUSAL, step, sender, ALL, None))
            return None
        self.transcript.append(Event(self.round, Kind.BROADCAST, step, sender, ALL, payload))
        return payload

    def simultaneous_broadcast(self, contributions: Mapping[int, Bits], step: str
                               ) -> dict[int, Bits | None]:
        """Collect-then-reveal round.  Missing contributions come back as None."""
        collected: dict[int, Bits | None] = {}
        # Corrupt rules run with an empty view: nothing of this round is known yet.
        for i in sorted(contributions):
            rule = self.rule(i, step)
            value = contributions[i]
            if rule is not None:
                value = rule.announce(value, AnnounceView(step, i, {}), self.tapes[i])
            collected[i] = value
        for i in sorted(collected):
            value = collected[i]
            if value is None:
                self.transcript.append(Event(self.round, Kind.REFUSAL, step, i, ALL, None))
            else:
                self.transcript.append(Event(self.round, Kind.SIM_BROADCAST, step, i, ALL, value))
        return collected
