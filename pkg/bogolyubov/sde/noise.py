"""Counter-based Gaussian streams keyed by (seed, stream, path block).

Paths are grouped in fixed blocks of ``PATH_BLOCK`` lanes. Each block owns a
Philox generator derived from ``SeedSequence(seed, spawn_key=(stream, block))``
and always draws full blocks in fixed step chunks, so a path's increments
depend only on (seed, stream, path index, step index): never on the number
of paths requested, on chunking, or on the thread count.
"""

import numpy as np

from bogolyubov.exceptions import InvalidArgumentError

PATH_BLOCK = 256
STEP_CHUNK = 64


def block_count(n_paths: int) -> int:
    return -(-int(n_paths) // PATH_BLOCK)


class BlockNoise:
    """Standard normals for one block of lanes, one draw per step."""

    def __init__(self, generator: np.random.Generator, width: int = 1):
        self._generator = generator
        self._width = width
        self._buffer = np.empty((0, PATH_BLOCK, width))
        self._cursor = 0

    def draw(self) -> np.ndarray:
        """Next step of standard normals, shape (PATH_BLOCK, width)."""
        if self._cursor == self._buffer.shape[0]:
            self._buffer = self._generator.standard_normal((STEP_CHUNK, PATH_BLOCK, self._width))
            self._cursor = 0
        out = self._buffer[self._cursor]
        self._cursor += 1
        return out


class BrownianSource:
    """Keyed source of Brownian increments for one (seed, stream) pair."""

    def __init__(self, seed: int, stream: int = 0):
        if int(seed) < 0:
            raise InvalidArgumentError(f"seed must be non-negative, got {seed}", argument="seed")
        self.seed = int(seed)
        self.stream = int(stream)

    def generator(self, block: int) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream, int(block)))
        return np.random.Generator(np.random.Philox(sequence))

    def block(self, block: int, width: int = 1) -> BlockNoise:
        return BlockNoise(self.generator(block), width)
