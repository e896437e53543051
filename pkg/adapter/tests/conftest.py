import pytest

from _server import make_adapter


@pytest.fixture
def adapter():
    env = make_adapter()
    yield env
    env.close()
