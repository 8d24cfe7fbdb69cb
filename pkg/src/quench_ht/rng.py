"""Seeded random streams with order-independent child derivation."""
from __future__ import annotations

import hashlib
import struct

import numpy as np


def _label_key(label: str) -> int:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "little")


def float_key(x: float) -> int:
    """Stable non-negative integer for a float, from its IEEE-754 bit pattern."""
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]


class RandomStream:
    """Deterministic stream built on numpy's ``SeedSequence``/``PCG64``.

    ``child(label, index)`` derives an independent stream whose state depends
    only on the parent's key path and ``(label, index)``, never on how many
    draws the parent has made.
    """

    def __init__(self, seed: int, _path: tuple[int, ...] = ()):
        if seed < 0 or seed >= 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self.path = _path
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.path))
        )

    def child(self, label: str, index: int = 0) -> RandomStream:
        if index < 0:
            raise ValueError("child index must be non-negative")
        return RandomStream(self.seed, self.path + (_label_key(label), int(index)))

    def normal(self, loc: float = 0.0, scale: float = 1.0, size=None):
        return self._gen.normal(loc, scale, size)

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self._gen.uniform(low, high, size)

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, path={self.path})"
