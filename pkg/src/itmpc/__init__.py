"""Information-theoretically secure multiparty protocols over broadcast and
private channels: parity, veto, vote, anonymous bit and message transmission,
run in a deterministic simulated network with pluggable adversaries."""

from .adversary import (AdversaryStrategy, AnnounceConstant, AnnounceRandom, CorruptSet,
                        ForceOutcome, Honest, OverrideFlipProbability, RefuseBroadcast,
                        TamperBits, library_rules)
from .amd import AmdParams, amd_decode, amd_encode
from .amt import AmtResult, Send, Status, run_amt, run_fixed_role_amt
from .anon_bit import AbtReceipt, run_abt
from .bits import Bits
from .errors import ConfigurationError
from .parity import PrivateTo, Sequential, Simultaneous, Withheld, run_parity
from .runtime import AbortReason, Outcome, Runtime, Transcript
from .signaling import run_collision_detection, run_notification
from .tapes import RandomTape, enumerate_tapes, exact_distribution, seeded_tapes
from .veto import VetoResult, run_veto
from .vote import Tally, decode_count, p_v, run_vote

__version__ = "0.1.0"
