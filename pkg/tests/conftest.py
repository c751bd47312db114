import numpy as np
import pytest

from nhrabi import ModelParams
from nhrabi.floquet import FloquetConfig

# named parameter points, (delta / omega, A / omega)
POINT_A = ModelParams(2.5, 1.0)
POINT_B = ModelParams(3.5, 3.0)
POINT_C = ModelParams(2.5, 4.0)


@pytest.fixture(scope="session")
def cfg():
    return FloquetConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def multiset_distance(a, b):
    """Largest distance after greedy nearest matching of two complex multisets."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    assert len(a) == len(b)
    worst = 0.0
    for z in a:
        d = [abs(z - w) for w in b]
        k = int(np.argmin(d))
        worst = max(worst, d[k])
        b.pop(k)
    return worst
