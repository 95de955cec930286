"""Seeded randomness derived through an HMAC-SHA256 key tree.

Every consumer gets its own child stream, ``root.child("bundle").child(i)``,
so the output of one stream never depends on how much another consumed.
That is what makes whole protocol runs byte-reproducible from one seed.

    key(child) = HMAC-SHA256(key(parent), b"child:" + label)
    block(n)   = HMAC-SHA256(key, b"block:" + n.to_bytes(8, "big"))

Integers are drawn by rejection sampling over the minimal number of bits.
"""

from __future__ import annotations

import hashlib
import hmac
import os


class PrfRng:
    def __init__(self, seed=None, _key: bytes | None = None):
        if _key is None:
            if seed is None:
                seed = os.urandom(32)
            if isinstance(seed, int):
                seed = seed.to_bytes((seed.bit_length() + 8) // 8, "big", signed=True)
            elif isinstance(seed, str):
                seed = seed.encode()
            _key = hashlib.sha256(b"zkpoa/prf-root/" + bytes(seed)).digest()
        self._key = _key
        self._counter = 0
        self._buffer = b""

    def child(self, label) -> "PrfRng":
        if isinstance(label, int):
            label = b"#" + str(label).encode()
        elif isinstance(label, str):
            label = label.encode()
        return PrfRng(_key=hmac.new(self._key, b"child:" + label, hashlib.sha256).digest())

    def randbytes(self, n: int) -> bytes:
        while len(self._buffer) < n:
            block = hmac.new(self._key, b"block:" + self._counter.to_bytes(8, "big"), hashlib.sha256).digest()
            self._counter += 1
            self._buffer += block
        out, self._buffer = self._buffer[:n], self._buffer[n:]
        return out

    def getrandbits(self, k: int) -> int:
        if k <= 0:
            return 0
        v = int.from_bytes(self.randbytes((k + 7) // 8), "big")
        return v >> (-k % 8)

    def randbelow(self, n: int) -> int:
        n = int(n)
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        k = n.bit_length()
        while True:
            v = self.getrandbits(k)
            if v < n:
                return v

    def randrange(self, start: int, stop: int | None = None) -> int:
        if stop is None:
            start, stop = 0, start
        return int(start) + self.randbelow(int(stop) - int(start))

    def nonzero(self, modulus: int) -> int:
        return self.randrange(1, int(modulus))

    def random(self) -> float:
        return self.getrandbits(53) / (1 << 53)


def as_rng(seed_or_rng) -> PrfRng:
    if isinstance(seed_or_rng, PrfRng):
        return seed_or_rng
    return PrfRng(seed_or_rng)
