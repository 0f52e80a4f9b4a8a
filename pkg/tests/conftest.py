import pytest

from latmod import catalog


def small_catalog():
    """Named finite lattices used across the suites, all within desk scale."""
    return {
        "C1": catalog.chain(1),
        "C2": catalog.chain(2),
        "C3": catalog.chain(3),
        "C4": catalog.chain(4),
        "C2sq": catalog.c2sq(),
        "B3": catalog.boolean(3),
        "N5": catalog.n5(),
        "M3": catalog.m_k(3),
        "M4": catalog.m_k(4),
        "M5": catalog.m_k(5),
        "witness7": catalog.witness7(),
    }


@pytest.fixture(scope="session")
def lattices():
    return small_catalog()
