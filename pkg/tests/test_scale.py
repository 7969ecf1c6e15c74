import random
import time

import pytest

from hfsmdec.decomposition import arc_bound, build_decomposition_tree
from hfsmdec.generators import random_fsm

pytestmark = pytest.mark.slow


def test_long_path(path):
    z = path(400)
    tree = build_decomposition_tree(z)
    assert len(tree) == 799
    assert tree.arc_count <= arc_bound(z)


@pytest.mark.parametrize("seed", range(5))
def test_random_machine_bounds(seed):
    z = random_fsm(random.Random(seed), 300, 3)
    tree = build_decomposition_tree(z)
    assert z.size + 1 <= len(tree) <= 2 * z.size - 1
    assert tree.arc_count <= arc_bound(z)


def test_small_random_corpus_bounds():
    rng = random.Random(2024)
    for _ in range(500):
        z = random_fsm(rng, rng.randint(2, 30), rng.randint(1, 4), rng.random())
        tree = build_decomposition_tree(z)
        assert z.size + 1 <= len(tree) <= 2 * z.size - 1
        assert tree.arc_count <= arc_bound(z)


def _best_time(z, repeats=2):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        build_decomposition_tree(z)
        best = min(best, time.perf_counter() - started)
    return best


def test_quadratic_scaling():
    rng = random.Random(1)
    timings = [_best_time(random_fsm(rng, n, 4)) for n in (500, 1000, 2000)]
    for smaller, larger in zip(timings, timings[1:]):
        assert larger / smaller <= 4.5, timings
    assert timings[-1] < 30.0, timings
