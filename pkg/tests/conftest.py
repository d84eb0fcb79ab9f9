import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("suite", max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def wavevectors(lo=-5.0, hi=5.0, min_norm=1e-3):
    comp = st.floats(lo, hi, allow_nan=False, allow_infinity=False)
    return st.tuples(comp, comp, comp).map(np.array).filter(lambda k: np.linalg.norm(k) >= min_norm)


def random_k(rng, n, lo=-5.0, hi=5.0, min_norm=1e-3):
    out = []
    while len(out) < n:
        k = rng.uniform(lo, hi, size=3)
        if np.linalg.norm(k) >= min_norm:
            out.append(k)
    return np.array(out)
