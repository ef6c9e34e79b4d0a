"""Counter-keyed random streams and max/argmax reductions over samples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np


def rng_for(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for sample ``index``; order of evaluation is irrelevant."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream), int(index)]))


@dataclass(frozen=True)
class MaxResidual:
    value: float
    index: int
    witness: Any = None
    samples: int = 0


def max_residual(fn: Callable[[np.random.Generator], tuple[float, Any]], samples: int, seed: int, stream: int = 0) -> MaxResidual:
    """Largest residual over ``samples`` draws; ties go to the lowest index."""
    if samples <= 0:
        raise ValueError("sample count must be positive")
    best = MaxResidual(-np.inf, -1, None, samples)
    for i in range(samples):
        value, witness = fn(rng_for(seed, i, stream))
        value = float(value)
        if value > best.value or np.isnan(value):
            best = MaxResidual(value, i, witness, samples)
            if np.isnan(value):
                break
    return best
