import numpy as np
import pytest


class ScriptedRng:
    """Stand-in for a Generator when a test needs exact uniform draws."""

    def __init__(self, draws):
        self._draws = list(draws)

    def random(self):
        return self._draws.pop(0)


@pytest.fixture
def scripted_rng():
    return ScriptedRng


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
