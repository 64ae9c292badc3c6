import random
from fractions import Fraction

import numpy as np
import pytest

from distrecon import PointConfig

FIVE_POINT = [(0, 0), (7, 0), (5, -1), (3, -3), (11, 2)]
UNIT_SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


@pytest.fixture
def five_point():
    return PointConfig.from_points(FIVE_POINT)


@pytest.fixture
def square():
    return PointConfig.from_points(UNIT_SQUARE)


def random_int_config(rng: random.Random, n: int, m: int = 2, lo: int = -20, hi: int = 20) -> PointConfig:
    return PointConfig.from_points([[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)])


def shuffled(P: PointConfig, rng: random.Random):
    perm = list(range(P.n))
    rng.shuffle(perm)
    return P.relabeled(perm), perm


PYTHAGOREAN = [(3, 4), (5, 12), (8, 15), (7, 24), (20, 21), (4, -3), (-12, 5)]


def frac(x) -> Fraction:
    return Fraction(x)


def float_rng(seed=0):
    return np.random.default_rng(seed)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
