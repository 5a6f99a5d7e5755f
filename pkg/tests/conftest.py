"""Shared chain generators for the test suite. Everything is seeded."""

from __future__ import annotations

import numpy as np
import pytest

from mixgap.chain import StochasticMatrix
from mixgap.fixtures import example_chain, random_dense_chain, random_reversible_chain


@pytest.fixture
def ex31() -> StochasticMatrix:
    return example_chain()


def random_ergodic(seed: int, n: int | None = None) -> StochasticMatrix:
    """Random strictly positive chain; n drawn from {2..8} when omitted."""
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(2, 9))
    return random_dense_chain(n, seed=int(rng.integers(0, 2**31)))


def random_reversible(seed: int, n: int | None = None) -> StochasticMatrix:
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(2, 9))
    return random_reversible_chain(n, seed=int(rng.integers(0, 2**31)))
