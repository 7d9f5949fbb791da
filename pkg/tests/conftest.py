import pytest

from taxising import kernels


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    # compile everything up front so timing-sensitive tests never pay JIT cost
    kernels.warm_up()


class FakeStream:
    """Scripted uniform source for forcing specific decisions in tests."""

    def __init__(self, draws):
        self._draws = list(draws)
        self.consumed = 0

    def uniform(self) -> float:
        self.consumed += 1
        return self._draws.pop(0)


@pytest.fixture
def fake_stream():
    return FakeStream
