"""Reproducible random streams: splitmix64 seeding, xoshiro256**, polar Gaussians.

Each stream is addressed by a master seed plus a path of labels, e.g.
``RngStream(0, ("A", 3))`` for realization ``A`` at noise-level index 3.  The
path is hashed into the seed, so streams never depend on call order.
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

MASK64 = (1 << 64) - 1
_TWO_M53 = 1.0 / (1 << 53)


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seed(master_seed: int, path=()) -> int:
    """Hash ``(master_seed, *path)`` into a 64-bit seed."""
    key = json.dumps([int(master_seed) & MASK64, *[str(p) for p in path]], separators=(",", ":"))
    return int.from_bytes(hashlib.blake2b(key.encode(), digest_size=8).digest(), "little")


class Xoshiro256StarStar:
    def __init__(self, seed: int):
        sm = seed & MASK64
        s = []
        for _ in range(4):
            sm, out = splitmix64(sm)
            s.append(out)
        self.s = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        x = (s1 * 5) & MASK64
        result = ((((x << 7) | (x >> 57)) & MASK64) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
        self.s = [s0, s1, s2, s3]
        return result


class RngStream:
    """Gaussian and uniform variates for one ``(master_seed, path)`` address."""

    def __init__(self, master_seed: int = 0, path=()):
        self.master_seed = int(master_seed)
        self.path = tuple(path)
        self._gen = Xoshiro256StarStar(derive_seed(self.master_seed, self.path))
        self._spare = None

    def child(self, *labels) -> "RngStream":
        return RngStream(self.master_seed, self.path + tuple(labels))

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self._gen.next_u64() >> 11) * _TWO_M53

    def standard_normal(self, size=None):
        if size is None:
            return self._normal_list(1)[0]
        shape = (size,) if isinstance(size, int) else tuple(size)
        count = math.prod(shape)
        return np.array(self._normal_list(count), dtype=float).reshape(shape)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return loc + scale * self.standard_normal(size)

    def _normal_list(self, count: int) -> list[float]:
        # Polar Box-Muller: each accepted pair (u, v) yields u*f then v*f.
        out = []
        if self._spare is not None and count:
            out.append(self._spare)
            self._spare = None
        gen = self._gen
        s0, s1, s2, s3 = gen.s
        log, sqrt = math.log, math.sqrt
        while len(out) < count:
            # two inlined xoshiro256** steps
            x = (s1 * 5) & MASK64
            a = ((((x << 7) | (x >> 57)) & MASK64) * 9) & MASK64
            t = (s1 << 17) & MASK64
            s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t
            s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
            x = (s1 * 5) & MASK64
            b = ((((x << 7) | (x >> 57)) & MASK64) * 9) & MASK64
            t = (s1 << 17) & MASK64
            s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t
            s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
            u = 2.0 * ((a >> 11) * _TWO_M53) - 1.0
            v = 2.0 * ((b >> 11) * _TWO_M53) - 1.0
            r = u * u + v * v
            if r >= 1.0 or r == 0.0:
                continue
            f = sqrt(-2.0 * log(r) / r)
            out.append(u * f)
            out.append(v * f)
        gen.s = [s0, s1, s2, s3]
        if len(out) > count:
            self._spare = out.pop()
        return out
