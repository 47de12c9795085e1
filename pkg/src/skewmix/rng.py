"""Seeded counter-based random streams.

``make_rng(seed, stream)`` gives an independent Philox stream per
``(seed, stream)`` pair, so replicate ``i`` of a study is reproducible on its
own regardless of execution order.
"""

import numpy as np

from .errors import PreconditionError


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    if int(seed) != seed or seed < 0 or int(stream) != stream or stream < 0:
        raise PreconditionError("seed and stream must be non-negative integers")
    return np.random.Generator(np.random.Philox(key=[int(seed), int(stream)]))
