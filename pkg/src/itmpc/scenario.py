"""Scenario documents: parsing, validation and single-run dispatch.

A scenario is a whitespace-separated list of ``key=value`` tokens; ``#``
starts a comment that runs to the end of the line.  Keys:

``protocol``  parity | veto | vote | abt | collision | notify | framt | amt
``n``         number of participants (defaults to the number of inputs)
``s``         security parameter
``m``         candidates (vote) or message bits (framt/amt, else from the hex)
``inputs``    comma-separated, one entry per participant, ``_`` for none
``corrupt``   ``<ids>:<strategy>[(arg)][@<step-pattern>]``, repeatable
``seed``      64-bit run seed (default 0); trial ``t`` uses ``seed + t``
``trials``    number of independent runs (default 1)
``mode``      parity announcement: simultaneous (default) | sequential
``reveal``    abt phase-B reveal: private (default) | broadcast
``pad``       framt/amt receiver pad: full (default) | strict

Input entries per protocol: bits for parity/veto, ``1..m`` for vote,
``0|1|2`` for collision, ``+``-joined target ids for notify, ``+``-joined
``target:bit`` pairs for abt, and ``receiver:hex`` for framt/amt.

Strategies: ``honest``, ``refuse``, ``constant(b)``, ``random``,
``override_flip(q)`` with ``q`` a fraction or decimal, ``tamper`` or
``tamper(hexmask)``, ``force(b)``.  The default step pattern is ``*``
(``*.announce`` for tamper).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .adversary import (AdversaryStrategy, AnnounceConstant, AnnounceRandom, CorruptSet,
                        ForceOutcome, Honest, OverrideFlipProbability, RefuseBroadcast, Rule,
                        TamperBits)
from .amt import Send, run_amt, run_fixed_role_amt
from .anon_bit import run_abt
from .bits import Bits
from .errors import ConfigurationError
from .parity import Sequential, Simultaneous, run_parity
from .runtime import Outcome, Runtime, Transcript
from .signaling import run_collision_detection, run_notification
from .tapes import RandomTape
from .veto import run_veto
from .vote import run_vote

PROTOCOLS = ("parity", "veto", "vote", "abt", "collision", "notify", "framt", "amt")
KEYS = ("protocol", "n", "s", "m", "inputs", "corrupt", "seed", "trials", "mode", "reveal", "pad")
OPTIONS = {"mode": ("simultaneous", "sequential"), "reveal": ("private", "broadcast"),
           "pad": ("full", "strict")}
NEEDS_S = {"veto", "vote", "abt", "collision", "notify", "framt", "amt"}


class ScenarioError(ConfigurationError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Scenario:
    protocol: str
    n: int
    inputs: Any
    s: int | None = None
    m: int | None = None
    corrupt: CorruptSet = field(default_factory=CorruptSet)
    corrupt_text: tuple[str, ...] = ()
    seed: int = 0
    trials: int = 1
    options: dict[str, str] = field(default_factory=dict)

    def option(self, key: str) -> str:
        return self.options.get(key, OPTIONS[key][0])

    def canonical(self) -> str:
        """Stable one-line rendering of the validated scenario."""
        parts = [f"protocol={self.protocol}", f"n={self.n}"]
        if self.s is not None:
            parts.append(f"s={self.s}")
        if self.m is not None:
            parts.append(f"m={self.m}")
        parts.append(f"inputs={render_inputs(self.protocol, self.inputs, self.n)}")
        parts.extend(f"corrupt={c}" for c in self.corrupt_text)
        parts.append(f"seed={self.seed}")
        parts.append(f"trials={self.trials}")
        parts.extend(f"{k}={self.options[k]}" for k in sorted(self.options))
        return " ".join(parts)


def _tokens(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        out.extend((lineno, tok) for tok in line.split())
    return out


def _int(value: str, key: str, line: int, lo: int | None = None) -> int:
    try:
        v = int(value, 0)
    except ValueError:
        raise ScenarioError(f"{key} must be an integer, got {value!r}", line) from None
    if lo is not None and v < lo:
        raise ScenarioError(f"{key} must be at least {lo}, got {v}", line)
    return v


_STRATEGY = re.compile(r"^([a-z_]+)(?:\(([^()]*)\))?(?:@(\S+))?$")


def parse_rule(text: str, line: int | None = None) -> tuple[str, Rule]:
    """Parse ``name[(arg)][@pattern]`` into a step pattern and a rule."""
    mo = _STRATEGY.match(text)
    if not mo:
        raise ScenarioError(f"malformed strategy {text!r}", line)
    name, arg, pattern = mo.groups()

    def bit_arg() -> int:
        if arg not in ("0", "1"):
            raise ScenarioError(f"{name} needs a bit argument, got {arg!r}", line)
        return int(arg)

    if name in ("honest", "refuse", "random") and arg is not None:
        raise ScenarioError(f"{name} takes no argument", line)
    if name == "honest":
        rule: Rule = Honest()
    elif name == "refuse":
        rule = RefuseBroadcast()
    elif name == "random":
        rule = AnnounceRandom()
    elif name == "constant":
        rule = AnnounceConstant(bit_arg())
    elif name == "force":
        rule = ForceOutcome(bit_arg())
    elif name == "override_flip":
        try:
            q = Fraction(arg or "")
        except (ValueError, ZeroDivisionError):
            raise ScenarioError(f"override_flip needs a probability, got {arg!r}", line) from None
        if not 0 <= q <= 1:
            raise ScenarioError(f"flip probability {q} outside [0, 1]", line)
        rule = OverrideFlipProbability(q)
    elif name == "tamper":
        if arg is None:
            rule = TamperBits(None)
        else:
            try:
                rule = TamperBits(Bits.from_hex(arg).value)
            except ValueError:
                raise ScenarioError(f"tamper mask must be hex, got {arg!r}", line) from None
    else:
        raise ScenarioError(f"unknown strategy {name!r}", line)
    if pattern is None:
        pattern = "*.announce" if name == "tamper" else "*"
    return pattern, rule


def _parse_corrupt(value: str, line: int) -> tuple[list[int], str, Rule]:
    ids_text, sep, strategy = value.partition(":")
    if not sep or not ids_text or not strategy:
        raise ScenarioError(f"corrupt must look like <ids>:<strategy>, got {value!r}", line)
    try:
        ids = [int(x) for x in re.split(r"[,+]", ids_text)]
    except ValueError:
        raise ScenarioError(f"bad corrupt id list {ids_text!r}", line) from None
    pattern, rule = parse_rule(strategy, line)
    return ids, pattern, rule


def _parse_inputs(protocol: str, entries: list[str], n: int, m: int | None, line: int):
    def each(fn):
        out = {}
        for i, e in enumerate(entries, 1):
            try:
                out[i] = fn(i, e)
            except ScenarioError:
                raise
            except (ValueError, KeyError):
                raise ScenarioError(f"bad input {e!r} for participant {i}", line) from None
        return out

    def bit(i, e):
        if e not in ("0", "1"):
            raise ScenarioError(f"input of participant {i} must be 0 or 1, got {e!r}", line)
        return int(e)

    def target(i, e):
        t = int(e)
        if not 1 <= t <= n:
            raise ScenarioError(f"participant {i} targets {t}, outside 1..{n}", line)
        if t == i:
            raise ScenarioError(f"participant {i} cannot target itself", line)
        return t

    if protocol in ("parity", "veto"):
        return each(bit)
    if protocol == "collision":
        def tri(i, e):
            if e not in ("0", "1", "2"):
                raise ScenarioError(f"input of participant {i} must be 0, 1 or 2", line)
            return int(e)
        return each(tri)
    if protocol == "vote":
        def choice(i, e):
            v = int(e)
            if not 1 <= v <= m:
                raise ScenarioError(f"input {v} of participant {i} exceeds m={m}"
                                    if v > m else f"input {v} of participant {i} below 1", line)
            return v
        return each(choice)
    if protocol == "notify":
        flags = {}
        for i, e in each(lambda i, e: [] if e == "_" else [target(i, t) for t in e.split("+")]).items():
            for t in e:
                flags[(i, t)] = 1
        return flags
    if protocol == "abt":
        cells = {}

        def pairs(i, e):
            if e == "_":
                return []
            out = []
            for part in e.split("+"):
                t, b = part.split(":")
                out.append((target(i, t), bit(i, b)))
            return out
        for i, ps in each(pairs).items():
            for t, b in ps:
                if (i, t) in cells:
                    raise ScenarioError(f"participant {i} sends to {t} twice", line)
                cells[(i, t)] = b
        return cells
    if protocol in ("framt", "amt"):
        def send(i, e):
            if e == "_":
                return None
            r, msg = e.split(":")
            return Send(target(i, r), Bits.from_hex(msg))
        return each(send)
    raise ScenarioError(f"unknown protocol {protocol!r}", line)


def parse_scenario(text: str) -> Scenario:
    """Validate a scenario document; errors carry the offending line number."""
    seen: dict[str, tuple[int, str]] = {}
    corrupt: list[tuple[int, str]] = []
    for line, tok in _tokens(text):
        key, sep, value = tok.partition("=")
        if not sep:
            raise ScenarioError(f"expected key=value, got {tok!r}", line)
        if key not in KEYS:
            raise ScenarioError(f"unknown key {key!r}", line)
        if key == "corrupt":
            corrupt.append((line, value))
            continue
        if key in seen:
            raise ScenarioError(f"duplicate key {key!r}", line)
        seen[key] = (line, value)

    if "protocol" not in seen:
        raise ScenarioError("missing protocol")
    pline, protocol = seen["protocol"]
    if protocol not in PROTOCOLS:
        raise ScenarioError(f"unknown protocol {protocol!r}", pline)
    if "inputs" not in seen:
        raise ScenarioError("missing inputs")
    iline, itext = seen["inputs"]
    entries = itext.split(",")

    n = _int(seen["n"][1], "n", seen["n"][0], 3) if "n" in seen else len(entries)
    if n < 3:
        raise ScenarioError(f"need at least 3 participants, got {n}", iline)
    if len(entries) != n:
        raise ScenarioError(f"expected {n} inputs, got {len(entries)}", iline)

    s = None
    if "s" in seen:
        s = _int(seen["s"][1], "s", seen["s"][0], 1)
    elif protocol in NEEDS_S:
        raise ScenarioError(f"protocol {protocol} needs s")
    m = _int(seen["m"][1], "m", seen["m"][0], 1) if "m" in seen else None
    if protocol == "vote":
        if m is None:
            raise ScenarioError("vote needs m")
        if m < 2:
            raise ScenarioError("vote needs m >= 2", seen["m"][0])

    inputs = _parse_inputs(protocol, entries, n, m, iline)
    if protocol in ("framt", "amt"):
        lengths = {len(x.message) for x in inputs.values() if x is not None}
        if len(lengths) > 1:
            raise ScenarioError("all messages must have the same length", iline)
        if lengths:
            (length,) = lengths
            if m is not None and m != length:
                raise ScenarioError(f"messages have {length} bits but m={m}", iline)
            m = length
        if protocol == "framt" and len([x for x in inputs.values() if x is not None]) != 1:
            raise ScenarioError("framt needs exactly one sender", iline)
        if m is None:
            raise ScenarioError("m is required when nobody sends", iline)

    options = {}
    for key, allowed in OPTIONS.items():
        if key in seen:
            line, value = seen[key]
            if value not in allowed:
                raise ScenarioError(f"{key} must be one of {', '.join(allowed)}", line)
            options[key] = value

    programs: dict[int, list] = {}
    for line, value in corrupt:
        ids, pattern, rule = _parse_corrupt(value, line)
        for i in ids:
            if not 1 <= i <= n:
                raise ScenarioError(f"corrupt participant {i} outside 1..{n}", line)
            programs.setdefault(i, []).append((pattern, rule))
    corrupt_set = CorruptSet({i: AdversaryStrategy(p) for i, p in sorted(programs.items())})

    seed = _int(seen["seed"][1], "seed", seen["seed"][0]) if "seed" in seen else 0
    trials = _int(seen["trials"][1], "trials", seen["trials"][0], 1) if "trials" in seen else 1
    return Scenario(protocol, n, inputs, s, m, corrupt_set, tuple(v for _, v in corrupt),
                    seed, trials, options)


def render_inputs(protocol: str, inputs, n: int) -> str:
    ids = range(1, n + 1)
    if protocol in ("parity", "veto", "vote", "collision"):
        return ",".join(str(inputs[i]) for i in ids)
    if protocol == "notify":
        return ",".join("+".join(str(t) for (j, t) in sorted(inputs) if j == i) or "_" for i in ids)
    if protocol == "abt":
        return ",".join("+".join(f"{t}:{b}" for (j, t), b in sorted(inputs.items()) if j == i)
                        or "_" for i in ids)
    return ",".join("_" if inputs[i] is None else f"{inputs[i].receiver}:{inputs[i].message.hex()}"
                    if len(inputs[i].message) % 4 == 0 else f"{inputs[i].receiver}:{inputs[i].message}"
                    for i in ids)


def run_protocol(scenario: Scenario, tapes: Mapping[int, RandomTape] | None = None, *,
                 seed: int | None = None) -> tuple[Outcome, Transcript]:
    """One run of ``scenario``; deterministic given the tapes (or the seed)."""
    ctx = Runtime(scenario.n, corrupt=scenario.corrupt, tapes=tapes,
                  seed=scenario.seed if seed is None else seed)
    p, s, x = scenario.protocol, scenario.s, scenario.inputs
    if p == "parity":
        mode = Sequential(tuple(ctx.participants)) if scenario.option("mode") == "sequential" \
            else Simultaneous()
        out = run_parity(x, mode, ctx)
    elif p == "veto":
        out = run_veto(x, s, ctx)
    elif p == "vote":
        out = run_vote(x, scenario.m, s, ctx)
    elif p == "abt":
        out = run_abt(x, s, ctx, broadcast_reveal=scenario.option("reveal") == "broadcast")
    elif p == "collision":
        out = run_collision_detection(x, s, ctx)
    elif p == "notify":
        out = run_notification(x, s, ctx)
    elif p == "framt":
        (sender, send), = [(i, v) for i, v in x.items() if v is not None]
        out = run_fixed_role_amt(sender, send.receiver, send.message, s, ctx,
                                 strict_pad=scenario.option("pad") == "strict")
    elif p == "amt":
        out = run_amt(x, s, ctx, m=scenario.m)
    else:
        raise ConfigurationError(f"unknown protocol {p!r}")
    return out, ctx.transcript
