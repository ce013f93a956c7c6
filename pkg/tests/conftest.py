import pytest
from hypothesis import strategies as st

from rosa.index import build_index, loaded_from_built

EXAMPLE = b"she#sells#shells"


@pytest.fixture(scope="session")
def example_built():
    return build_index(EXAMPLE, 3)


@pytest.fixture(scope="session")
def example_loaded(example_built):
    return loaded_from_built(example_built)


def texts(max_size=60, alphabet=b"ab#\x00\xff"):
    return st.binary(min_size=1, max_size=max_size).map(
        lambda raw: bytes(alphabet[c % len(alphabet)] for c in raw))


def small_alphabet_texts(max_size=60):
    return st.sampled_from([b"ab", b"abc", b"acgt", b"a"]).flatmap(
        lambda alpha: st.lists(st.sampled_from(list(alpha)), min_size=1, max_size=max_size)
        .map(bytes))
