import warnings

import pytest

from fqlab import euclid_graph, make_field, regular_view, spectrum


@pytest.fixture(scope="session")
def f3():
    return make_field(3)


@pytest.fixture(scope="session")
def f7():
    return make_field(7)


@pytest.fixture(scope="session")
def f11():
    return make_field(11)


@pytest.fixture(scope="session")
def f19():
    return make_field(19)


@pytest.fixture(scope="session")
def f13():
    # 13 = 1 mod 4: -1 is a square, construction warns but proceeds
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return make_field(13)


@pytest.fixture(scope="session")
def g3_view(f3):
    """G_3(1) in dim 2 with its exact second eigenvalue, shared read-only."""
    G = euclid_graph(f3, 2, 1)
    return regular_view(G, lam=spectrum(G).second_eigenvalue)
