import random
from fractions import Fraction

import pytest

from ibsl import catalog
from ibsl.generators import random_measure, random_system
from ibsl.plonka import plonka_sum

SEED = 20261015
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def diamond():
    return catalog.diamond_system()


@pytest.fixture(scope="session")
def diamond_sum(diamond):
    return plonka_sum(diamond)


@pytest.fixture(scope="session")
def two_chain():
    return catalog.two_chain_system()


@pytest.fixture(scope="session")
def two_chain_sum(two_chain):
    return plonka_sum(two_chain)


@pytest.fixture(scope="session")
def diamond_state_table(diamond_sum):
    return tuple(catalog.DIAMOND_STATE_VALUES[diamond_sum.name(a)] for a in range(diamond_sum.size))


def generated_systems(count=200, seed=SEED, **kw):
    rng = random.Random(seed)
    return [random_system(rng, **kw) for _ in range(count)]


@pytest.fixture(scope="session")
def systems():
    return generated_systems()


@pytest.fixture(scope="session")
def sums(systems):
    return [plonka_sum(S) for S in systems]


@pytest.fixture(scope="session")
def injective_faithful():
    """(decomposition, regular top measure) pairs on injective systems."""
    rng = random.Random(SEED + 1)
    out = []
    for _ in range(40):
        S = random_system(rng, injective=True, trivial_rate=0.0)
        out.append((plonka_sum(S), random_measure(rng, S.top_algebra)))
    return out


def frac_table(values):
    return tuple(Fraction(v) for v in values)
