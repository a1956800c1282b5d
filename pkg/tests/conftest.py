import pytest

from g0wb.corpus import load_entry


@pytest.fixture(scope="session")
def corpus_j():
    return load_entry("j").series


@pytest.fixture(scope="session")
def corpus_g0_2():
    return load_entry("g0_2").series


@pytest.fixture(scope="session")
def corpus_g0_13():
    return load_entry("g0_13").series


@pytest.fixture(scope="session")
def corpus_g0_25():
    return load_entry("g0_25").series
