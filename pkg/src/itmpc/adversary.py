"""Static adversaries: corrupt membership plus per-step deviation rules.

Protocol code names every point where a participant acts with a dotted step
identifier such as ``veto.o2.announce`` or ``vote.k1.flip``.  An
:class:`AdversaryStrategy` maps ``fnmatch`` patterns over those identifiers to
:class:`Rule` objects; the first matching pattern wins and unmatched steps are
played honestly.  Rules only ever reach corrupt participants; the runtime never
consults them for honest ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from fractions import Fraction
from typing import Iterable, Mapping

from .bits import Bits


@dataclass(frozen=True)
class AnnounceView:
    """What a corrupt announcer may see when choosing its announcement.

    ``prior`` holds announcements already made in the same round.  It is always
    empty for a simultaneous broadcast.
    """
    step: str
    participant: int
    prior: Mapping[int, Bits]


class Rule:
    """A deviation rule.  The base class plays honestly at every hook."""

    name = "honest"

    def flip_probability(self, honest: Fraction) -> Fraction:
        return honest

    def announce(self, honest: Bits, view: AnnounceView, tape) -> Bits | None:
        """Return the bits to announce, or None to refuse."""
        return honest

    def send(self, honest: Bits, tape) -> Bits:
        return honest

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class Honest(Rule):
    pass


class RefuseBroadcast(Rule):
    name = "refuse"

    def announce(self, honest, view, tape):
        return None


@dataclass(repr=True)
class AnnounceConstant(Rule):
    bit: int = 0
    name = "constant"

    def announce(self, honest, view, tape):
        return Bits.ones(len(honest)) if self.bit else Bits.zeros(len(honest))


class AnnounceRandom(Rule):
    name = "random"

    def announce(self, honest, view, tape):
        return Bits(tape.bits(len(honest)), len(honest))


@dataclass(repr=True)
class OverrideFlipProbability(Rule):
    q: Fraction = Fraction(1, 2)
    name = "override_flip"

    def __post_init__(self):
        self.q = Fraction(self.q)
        if not 0 <= self.q <= 1:
            raise ValueError(f"flip probability out of range: {self.q}")

    def flip_probability(self, honest):
        return self.q


@dataclass(repr=True)
class TamperBits(Rule):
    """XOR a fixed mask into announcements and private sends.

    Bit ``k`` of ``mask`` flips payload element ``k``; ``mask=None`` flips
    every element.
    """
    mask: int | None = None
    name = "tamper"

    def _apply(self, honest: Bits) -> Bits:
        full = (1 << len(honest)) - 1
        m = full if self.mask is None else self.mask & full
        return Bits(honest.value ^ m, len(honest))

    def announce(self, honest, view, tape):
        return self._apply(honest)

    def send(self, honest, tape):
        return self._apply(honest)


@dataclass(repr=True)
class ForceOutcome(Rule):
    """Announce whatever makes the XOR of all announcements so far equal ``bit``.

    This only fixes a parity outcome when the corrupt participant speaks last,
    which is exactly the advantage simultaneous broadcast and rotating
    orderings are there to remove.
    """
    bit: int = 0
    name = "force"

    def announce(self, honest, view, tape):
        acc = Bits.ones(len(honest)) if self.bit else Bits.zeros(len(honest))
        for b in view.prior.values():
            acc = acc ^ b
        return acc


class AdversaryStrategy:
    """Ordered map from step patterns to rules."""

    def __init__(self, program: Mapping[str, Rule] | Iterable[tuple[str, Rule]] = ()):
        items = program.items() if isinstance(program, Mapping) else program
        self.program: tuple[tuple[str, Rule], ...] = tuple(items)

    def rule_for(self, step: str) -> Rule | None:
        for pattern, rule in self.program:
            if fnmatchcase(step, pattern):
                return rule
        return None

    def __repr__(self) -> str:
        return f"AdversaryStrategy({dict(self.program)!r})"


HONEST = AdversaryStrategy()


@dataclass(frozen=True)
class CorruptSet:
    """Fixed set of corrupt participants with one strategy each."""
    strategies: Mapping[int, AdversaryStrategy] = field(default_factory=dict)

    @classmethod
    def of(cls, members: Iterable[int], strategy: AdversaryStrategy | Mapping | None = None
           ) -> CorruptSet:
        if strategy is None:
            strategy = HONEST
        elif not isinstance(strategy, AdversaryStrategy):
            strategy = AdversaryStrategy(strategy)
        return cls({i: strategy for i in members})

    @property
    def members(self) -> frozenset[int]:
        return frozenset(self.strategies)

    def __contains__(self, i: int) -> bool:
        return i in self.strategies

    def rule(self, i: int, step: str) -> Rule | None:
        strategy = self.strategies.get(i)
        return None if strategy is None else strategy.rule_for(step)


NOBODY = CorruptSet()


# Rules shipped with the library, used by the reliability sweeps.
def library_rules() -> dict[str, Rule]:
    return {
        "honest": Honest(),
        "refuse": RefuseBroadcast(),
        "constant0": AnnounceConstant(0),
        "constant1": AnnounceConstant(1),
        "random": AnnounceRandom(),
        "override_flip0": OverrideFlipProbability(Fraction(0)),
        "override_flip1": OverrideFlipProbability(Fraction(1)),
        "override_flip_half": OverrideFlipProbability(Fraction(1, 2)),
        "tamper": TamperBits(None),
        "force0": ForceOutcome(0),
        "force1": ForceOutcome(1),
    }
