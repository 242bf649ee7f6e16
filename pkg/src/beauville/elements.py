"""Subsets of a finite group's element indices, stored as integer bitmasks."""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np


def mask_from_indices(indices: Iterable[int] | np.ndarray, n: int) -> int:
    flags = np.zeros(n, dtype=bool)
    idx = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=np.int64)
    if idx.size:
        flags[idx] = True
    return mask_from_flags(flags)


def mask_from_flags(flags: np.ndarray) -> int:
    packed = np.packbits(np.asarray(flags, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def flags_from_mask(mask: int, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


class ElementSet:
    """An immutable set of element indices ``0..n-1``.

    Membership is a bit in ``mask``; set algebra is exact integer bit
    arithmetic, so equality and hashing are cheap.
    """

    __slots__ = ("n", "mask")

    def __init__(self, n: int, mask: int = 0):
        if mask >> n:
            raise ValueError("mask has bits outside 0..n-1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("ElementSet is immutable")

    @classmethod
    def from_indices(cls, n: int, indices) -> "ElementSet":
        return cls(n, mask_from_indices(indices, n))

    @classmethod
    def from_flags(cls, flags: np.ndarray) -> "ElementSet":
        return cls(len(flags), mask_from_flags(flags))

    @classmethod
    def full(cls, n: int) -> "ElementSet":
        return cls(n, (1 << n) - 1)

    @classmethod
    def identity_only(cls, n: int) -> "ElementSet":
        return cls(n, 1)

    def __contains__(self, a: int) -> bool:
        return 0 <= a < self.n and bool((self.mask >> a) & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.flags())

    def flags(self) -> np.ndarray:
        return flags_from_mask(self.mask, self.n)

    def _check(self, other: "ElementSet"):
        if other.n != self.n:
            raise ValueError("element sets over different groups")

    def __or__(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet(self.n, self.mask | other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet(self.n, self.mask & other.mask)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet(self.n, self.mask & ~other.mask)

    def complement(self) -> "ElementSet":
        return ElementSet(self.n, ((1 << self.n) - 1) ^ self.mask)

    def issubset(self, other: "ElementSet") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def issuperset(self, other: "ElementSet") -> bool:
        return other.issubset(self)

    def is_trivial(self) -> bool:
        """True when the set is empty or just the identity."""
        return self.mask | 1 == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, ElementSet) and other.n == self.n and other.mask == self.mask

    def __hash__(self) -> int:
        return hash((self.n, self.mask))

    def __repr__(self) -> str:
        items = list(self)
        shown = ", ".join(map(str, items[:12])) + (", ..." if len(items) > 12 else "")
        return f"ElementSet(n={self.n}, size={len(items)}, {{{shown}}})"
