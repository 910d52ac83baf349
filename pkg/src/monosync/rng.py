"""Counter-based deterministic randomness for reproducible simulation.

Coupling from the past must reuse its past: the draw attached to time -t
has to come out identical in every epoch that reaches back that far.  A
counter-based generator gives that for free, since each draw depends
only on (seed, stream, t) and never on query order.
"""

from __future__ import annotations

from hashlib import blake2b

_WORD = 64  # bits hashed out per attempt


class CellSampler:
    """Uniform draws over ``{0, ..., L-1}``, addressable by time index.

    ``cell_at(t)`` is a pure function of ``(seed, stream, t)``; repeated
    and out-of-order queries agree bit for bit.  Rejection sampling
    removes the modulo bias exactly, so every cell has probability
    ``1/L`` under the uniform-output model of the hash.
    """

    def __init__(self, L: int, seed: int, stream: int = 0):
        if L <= 0:
            raise ValueError(f"grid size {L} must be positive")
        self._L = L
        self._key = ((seed % 2**64).to_bytes(8, "big")
                     + (stream % 2**64).to_bytes(8, "big"))
        self._bound = (2**_WORD // L) * L
        self._cache: dict[int, int] = {}

    @property
    def L(self) -> int:
        return self._L

    def _word(self, t: int, attempt: int) -> int:
        h = blake2b(key=self._key, digest_size=_WORD // 8)
        h.update((t % 2**64).to_bytes(8, "big"))
        h.update(attempt.to_bytes(4, "big"))
        return int.from_bytes(h.digest(), "big")

    def cell_at(self, t: int) -> int:
        hit = self._cache.get(t)
        if hit is not None:
            return hit
        attempt = 0
        draw = self._word(t, attempt)
        while draw >= self._bound:  # rejected: top sliver of the word range
            attempt += 1
            draw = self._word(t, attempt)
        cell = draw % self._L
        self._cache[t] = cell
        return cell
