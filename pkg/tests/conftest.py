import pytest

from reconfig import constructions as C
from reconfig import search as S


@pytest.fixture(scope="session")
def exhaustive_k2():
    """Exhaustive k=2 search results for n = 4..7, shared across tests."""
    return {n: S.exhaustive_search(n, 2) for n in (4, 5, 6, 7)}


@pytest.fixture(scope="session")
def circ17():
    return C.circulant_ap_graph(17, [1])


@pytest.fixture(scope="session")
def circ41():
    return C.circulant_ap_graph(41, [1, 5])


@pytest.fixture(scope="session")
def glued47():
    """47-vertex instance: circulant p=41, S={1,5}, one junction, k=3."""
    return C.build_k3_extremal(47)


@pytest.fixture(scope="session")
def comp_p4():
    return C.complement_path(4)
