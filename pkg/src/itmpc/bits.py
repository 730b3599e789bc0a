"""Fixed-length bit vectors backed by Python integers.

Element ``k`` of a :class:`Bits` is bit ``k`` of ``value`` (least significant
first).  Text renderings list elements in index order, so ``Bits.from_str("110")``
has elements 1, 1, 0.  Byte and hex conversions are most-significant-bit
first within each byte, i.e. element 0 is the top bit of the first byte.

Parallel parity rounds are batched by packing one round per element, which
keeps XOR and popcount cheap for ten-thousand-round batches.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True, slots=True)
class Bits:
    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"value does not fit in {self.length} bits")

    @classmethod
    def zeros(cls, length: int) -> Bits:
        return cls(0, length)

    @classmethod
    def ones(cls, length: int) -> Bits:
        return cls((1 << length) - 1, length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> Bits:
        value = 0
        length = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"not a bit: {b!r}")
            value |= b << length
            length += 1
        return cls(value, length)

    @classmethod
    def from_str(cls, text: str) -> Bits:
        if text and set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(text[::-1], 2) if text else 0, len(text))

    @classmethod
    def from_bytes(cls, data: bytes) -> Bits:
        length = 8 * len(data)
        if not length:
            return cls(0, 0)
        return cls.from_str(format(int.from_bytes(data, "big"), f"0{length}b"))

    @classmethod
    def from_hex(cls, text: str) -> Bits:
        """Parse hex digits; each digit contributes four bits, MSB first."""
        text = text.strip().lower()
        if text.startswith("0x"):
            text = text[2:]
        if not text:
            return cls(0, 0)
        length = 4 * len(text)
        return cls.from_str(format(int(text, 16), f"0{length}b"))

    @classmethod
    def concat(cls, parts: Iterable[Bits]) -> Bits:
        value = 0
        length = 0
        for p in parts:
            value |= p.value << length
            length += p.length
        return cls(value, length)

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        v = self.value
        for _ in range(self.length):
            yield v & 1
            v >>= 1

    def __getitem__(self, key):
        if isinstance(key, slice):
            start, stop, step = key.indices(self.length)
            if step != 1:
                return Bits.from_bits(list(self)[key])
            width = max(0, stop - start)
            return Bits((self.value >> start) & ((1 << width) - 1), width)
        if key < 0:
            key += self.length
        if not 0 <= key < self.length:
            raise IndexError(key)
        return (self.value >> key) & 1

    def __xor__(self, other: Bits) -> Bits:
        if self.length != other.length:
            raise ValueError(f"length mismatch {self.length} != {other.length}")
        return Bits(self.value ^ other.value, self.length)

    def __and__(self, other: Bits) -> Bits:
        if self.length != other.length:
            raise ValueError(f"length mismatch {self.length} != {other.length}")
        return Bits(self.value & other.value, self.length)

    def __bool__(self) -> bool:
        return self.value != 0

    def count(self) -> int:
        """Number of one bits."""
        return self.value.bit_count()

    def chunks(self, size: int) -> list[Bits]:
        return [self[k:k + size] for k in range(0, self.length, size)]

    def to_bytes(self) -> bytes:
        if self.length % 8:
            raise ValueError("length is not a whole number of bytes")
        if not self.length:
            return b""
        return int(str(self), 2).to_bytes(self.length // 8, "big")

    def hex(self) -> str:
        if self.length % 4:
            raise ValueError("length is not a whole number of hex digits")
        if not self.length:
            return ""
        return format(int(str(self), 2), f"0{self.length // 4}x")

    def __str__(self) -> str:
        if not self.length:
            return ""
        return format(self.value, f"0{self.length}b")[::-1]

    def __repr__(self) -> str:
        return f"Bits('{self}')" if self.length <= 64 else f"Bits(<{self.length} bits>)"


def xor_all(vectors: Iterable[Bits], length: int) -> Bits:
    acc = 0
    for v in vectors:
        acc ^= v.value
    return Bits(acc, length)
