import numpy as np
import pytest

from graphsketch import CodebookSpec, ExactGraph, generate_graph


@pytest.fixture
def spec():
    return CodebookSpec(seed=12345, dimension=64)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def small_graph():
    return ExactGraph([("a", "b"), ("b", "c"), ("c", "a"), ("a", "d")])


@pytest.fixture
def random_graph():
    return generate_graph("erdos_renyi", seed=7, n=60, k=100)


@pytest.fixture
def fixture_dir(tmp_path):
    (tmp_path / "g.txt").write_text("# two edges\n1 2\n2 3\n")
    (tmp_path / "h.txt").write_text("3 4\n4 1\n")
    (tmp_path / "labels.txt").write_text("# every vertex\n1\n2\n3\n4\n")
    return tmp_path
