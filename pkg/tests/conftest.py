from __future__ import annotations

import pytest

from dlcusp.chartable import CharacterData

_DATA_CACHE: dict[int, CharacterData] = {}


def get_data(p: int) -> CharacterData:
    """Session-wide CharacterData cache; builds are pure so sharing is safe."""
    if p not in _DATA_CACHE:
        _DATA_CACHE[p] = CharacterData(p)
    return _DATA_CACHE[p]


@pytest.fixture
def data7():
    return get_data(7)


@pytest.fixture
def data11():
    return get_data(11)


@pytest.fixture
def data13():
    return get_data(13)
