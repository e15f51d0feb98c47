import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_of(seed: int) -> random.Random:
    return random.Random(seed)


@pytest.fixture
def fixtures():
    from hfol.counterexamples import load_fixture
    return {c: load_fixture(c) for c in ("counter1", "counter2", "counter3")}
