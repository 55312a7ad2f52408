"""Fixtures compartidos: sumas parciales de ln 2 y sucesiones racionales aleatorias."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from mseps.numerics import SequencePrefix
from mseps.sequences import AlternatingHarmonic, SeriesSpec, generate, random_rational_sequence

SWEEP_SEED = 20240611
SWEEP_SIZE = 50
SWEEP_LENGTH = 13

LN2_PREFIX = [
    Fraction(1),
    Fraction(1, 2),
    Fraction(5, 6),
    Fraction(7, 12),
    Fraction(47, 60),
    Fraction(37, 60),
    Fraction(319, 420),
    Fraction(533, 840),
    Fraction(1879, 2520),
]


def ln2_terms(length: int) -> SequencePrefix:
    return generate(SeriesSpec(AlternatingHarmonic(), length))


@pytest.fixture
def ln2() -> SequencePrefix:
    return ln2_terms(9)


@pytest.fixture
def ln2_long() -> SequencePrefix:
    return ln2_terms(13)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SWEEP_SEED)


def random_sweep(count: int = SWEEP_SIZE, length: int = SWEEP_LENGTH, seed: int = SWEEP_SEED):
    """Reproducible list of random rational sequences."""
    gen = np.random.default_rng(seed)
    return [random_rational_sequence(gen, length, label=f"sweep#{i}") for i in range(count)]


@pytest.fixture(scope="session")
def sweep():
    return random_sweep()
