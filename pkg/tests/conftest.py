import pytest

from haraforge import load_corpus


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_item(corpus):
    return corpus[0]


@pytest.fixture(scope="session")
def rev1(corpus):
    return corpus[1].revisions[0]


@pytest.fixture(scope="session")
def rev2(corpus):
    return corpus[1].revisions[1]


@pytest.fixture(scope="session")
def history(corpus):
    return corpus[1]
