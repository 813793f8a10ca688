import pytest

from aces import demo_stub_backends


@pytest.fixture
def backends():
    return demo_stub_backends()
