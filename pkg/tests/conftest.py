import random
from pathlib import Path

import pytest

from hightrans import fixtures

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


@pytest.fixture(scope="session")
def free2():
    return fixtures.free2()


@pytest.fixture(scope="session")
def bs12():
    return fixtures.bs12()


@pytest.fixture(scope="session")
def modular():
    return fixtures.z2_star_z3()


@pytest.fixture(scope="session")
def surface():
    return fixtures.surface_group()


@pytest.fixture(scope="session")
def gauss_aff():
    return fixtures.gaussian_units_semidirect()


@pytest.fixture(scope="session")
def commutator_emb():
    return fixtures.commutator_subgroup_embedding()


def random_element(group, rng, length=6):
    """A product of random letters; deterministic given the rng."""
    letters = [el for _, el in group.letters()]
    x = group.identity()
    for _ in range(rng.randrange(length + 1)):
        x = x * rng.choice(letters)
    return x


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def problem_path(name):
    return str(PROBLEMS / name)
