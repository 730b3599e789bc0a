"""Systematic algebraic manipulation detection (AMD) code over GF(2^u).

A message ``w`` of ``m`` bits is cut into ``u``-bit chunks ``w_1..w_d`` and
encoded as ``w || x || f(x, w)`` with a uniform nonce ``x`` and

    f(x, w) = x^(d+2) + sum_{i=1..d} w_i x^i.

For any fixed nonzero XOR offset on the codeword, decoding accepts with
probability at most ``(d + 1) / 2^u`` over the nonce, provided ``d + 2`` is
odd.  In characteristic 2 an even exponent would let the offset cancel the
top term, so an even chunk count gets one implicit all-zero chunk.

Codeword layout: ``m`` payload bits, then the nonce and the tag as ``u``-bit
field elements written most significant bit first.  A chunk is read the same
way, with the last chunk zero-padded at its low end.  Padding is never
transmitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bits import Bits
from .errors import ConfigurationError
from .gf2 import GF2k


@dataclass(frozen=True)
class AmdParams:
    m: int
    s: int
    u: int
    d: int  # chunk count used in the tag, always odd

    @classmethod
    def for_message(cls, m: int, s: int, u: int | None = None) -> AmdParams:
        """Smallest admissible field for ``m``-bit messages at security ``s``.

        ``u`` starts at ``ceil(log2 m) + s`` and grows until ``d + 2 < 2^u``
        and ``(d + 1) / 2^u <= 2^-s``.  An explicit ``u`` is validated instead.
        """
        if m < 1 or s < 1:
            raise ConfigurationError("AMD needs m >= 1 and s >= 1")
        start = math.ceil(math.log2(m)) + s
        candidates = [u] if u is not None else range(max(start, 2), start + 64)
        for cand in candidates:
            if cand < start:
                raise ConfigurationError(f"u={cand} below ceil(log2 m) + s = {start}")
            d = chunk_count(m, cand)
            if d + 2 < (1 << cand) and (d + 1) << s <= (1 << cand):
                return cls(m, s, cand, d)
            if u is not None:
                raise ConfigurationError(f"u={u} too small for m={m}, s={s}")
        raise ConfigurationError(f"no field size found for m={m}, s={s}")

    @property
    def length(self) -> int:
        return self.m + 2 * self.u

    @property
    def error_bound(self) -> float:
        return (self.d + 1) / (1 << self.u)

    @property
    def field(self) -> GF2k:
        return _field(self.u)


_FIELDS: dict[int, GF2k] = {}


def _field(u: int) -> GF2k:
    if u not in _FIELDS:
        _FIELDS[u] = GF2k(u)
    return _FIELDS[u]


def chunk_count(m: int, u: int) -> int:
    d = -(-m // u)
    return d if d % 2 else d + 1


def element_to_bits(e: int, u: int) -> Bits:
    return Bits.from_str(format(e, f"0{u}b"))


def bits_to_element(b: Bits) -> int:
    return int(str(b), 2) if len(b) else 0


def message_chunks(w: Bits, params: AmdParams) -> list[int]:
    u = params.u
    out = []
    for k in range(params.d):
        piece = str(w[k * u:(k + 1) * u])
        out.append(int(piece.ljust(u, "0"), 2))
    return out


def tag(field: GF2k, chunks: list[int], x: int) -> int:
    d = len(chunks)
    acc = 0
    for c in reversed(chunks):  # Horner for sum c_i x^i, i = 1..d
        acc = field.mul(acc ^ c, x)
    return acc ^ field.pow(x, d + 2)


def tag_array(field: GF2k, chunks: list[int], xs: np.ndarray) -> np.ndarray:
    """:func:`tag` for an array of nonces."""
    xs = np.asarray(xs, dtype=np.uint64)
    acc = np.zeros_like(xs)
    for c in reversed(chunks):
        acc = field.mul_array(acc ^ np.uint64(c), xs)
    power = np.ones_like(xs)
    for _ in range(len(chunks) + 2):
        power = field.mul_array(power, xs)
    return acc ^ power


def amd_encode(w: Bits, params: AmdParams, tape) -> Bits:
    if len(w) != params.m:
        raise ValueError(f"message must be {params.m} bits, got {len(w)}")
    x = tape.bits(params.u)
    t = tag(params.field, message_chunks(w, params), x)
    return Bits.concat([w, element_to_bits(x, params.u), element_to_bits(t, params.u)])


def split_codeword(c: Bits, params: AmdParams) -> tuple[Bits, int, int]:
    m, u = params.m, params.u
    return c[:m], bits_to_element(c[m:m + u]), bits_to_element(c[m + u:])


def amd_decode(c: Bits, params: AmdParams) -> Bits | None:
    """The message, or None when the codeword was tampered with."""
    if len(c) != params.length:
        raise ValueError(f"codeword must be {params.length} bits, got {len(c)}")
    w, x, t = split_codeword(c, params)
    if tag(params.field, message_chunks(w, params), x) != t:
        return None
    return w


def offset_acceptance(w: Bits, offset: Bits, params: AmdParams, nonces: np.ndarray
                      ) -> np.ndarray:
    """For each nonce, whether ``encode(w) XOR offset`` still decodes.

    The offset is fixed before the nonces are drawn, as for an adversary that
    never sees the nonce.
    """
    f = params.field
    dw, dx, dt = split_codeword(offset, params)
    nonces = np.asarray(nonces, dtype=np.uint64)
    honest_tag = tag_array(f, message_chunks(w, params), nonces)
    forged_tag = tag_array(f, message_chunks(w ^ dw, params), nonces ^ np.uint64(dx))
    return forged_tag == (honest_tag ^ np.uint64(dt))
