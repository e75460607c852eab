import numpy as np
import pytest

from panelbreaks import build_panel


def random_panel(rng, n, T):
    return build_panel(rng.standard_normal((n, T)), [f"s{i}" for i in range(n)], range(1, T + 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
