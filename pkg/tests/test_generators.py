import random

import pytest

from hfsmdec.errors import InputError
from hfsmdec.fsm import is_accessible
from hfsmdec.generators import random_fsm, random_thin_hfsm, random_word, symbols
from hfsmdec.hfsm import flatten, is_thin_hfsm


def test_symbols():
    assert symbols(3) == ["a", "b", "c"]
    with pytest.raises(InputError):
        symbols(0)
    with pytest.raises(InputError):
        symbols(27)


@pytest.mark.parametrize("seed", range(20))
def test_random_fsm_is_accessible(seed):
    z = random_fsm(random.Random(seed), 8, 2)
    assert z.size == 8
    assert z.start == "1"
    assert is_accessible(z)


def test_random_fsm_is_reproducible():
    assert random_fsm(random.Random(5), 6, 3) == random_fsm(random.Random(5), 6, 3)


def test_random_fsm_density_bounds():
    sparse = random_fsm(random.Random(1), 6, 2, density=0.0)
    full = random_fsm(random.Random(1), 6, 2, density=1.0)
    assert len(sparse.transitions) == 5
    assert len(full.transitions) == 12


@pytest.mark.parametrize("seed", range(20))
def test_random_thin_hfsm(seed):
    rng = random.Random(seed)
    z = random_thin_hfsm(rng, 7, 2, 3)
    assert 1 <= z.order <= 4
    assert is_thin_hfsm(z)
    assert flatten(z).size == 7


def test_random_word():
    rng = random.Random(3)
    for _ in range(50):
        word = random_word(rng, ["a", "b"], 5)
        assert len(word) <= 5
        assert set(word) <= {"a", "b"}
