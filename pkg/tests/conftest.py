import pytest

from ergm_cluster import BUILTIN_MOTIFS, make_graph


@pytest.fixture(scope="session")
def fig_graph():
    # 4 vertices A..D as 0..3, edges AB, AD, BC, BD.
    return make_graph(4, [(0, 1), (0, 3), (1, 2), (1, 3)])


@pytest.fixture(scope="session")
def edge():
    return BUILTIN_MOTIFS["edge"]


@pytest.fixture(scope="session")
def two_star():
    return BUILTIN_MOTIFS["two-star"]


@pytest.fixture(scope="session")
def triangle():
    return BUILTIN_MOTIFS["triangle"]
