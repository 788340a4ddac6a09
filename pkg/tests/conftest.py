from __future__ import annotations

import sys
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ssgbvi.generator import GeneratorParams, random_game  # noqa: E402
from ssgbvi.oracle import solve_exact  # noqa: E402


@lru_cache(maxsize=None)
def seeded_game(seed: int, states: int = 7, max_actions: int = 3):
    return random_game(GeneratorParams(state_count=states, max_actions=max_actions, seed=seed))


@lru_cache(maxsize=None)
def oracle_values(seed: int, states: int = 7, max_actions: int = 3) -> tuple[Fraction, ...]:
    return tuple(solve_exact(seeded_game(seed, states, max_actions)))


@pytest.fixture
def F():
    return Fraction
