import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fusion_census.finab import FinAbGroup, GroupHom, _step_matrix

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = Path(__file__).parent / "fixtures"

SMALL_DESCRIPTORS = ["1", "2", "3", "2^2", "2:2", "2+2^2", "5", "2:3", "2^3", "2+3", "7", "5:2",
                     "2^2:2", "2+5"]


@st.composite
def small_groups(draw, max_order=64):
    desc = draw(st.sampled_from(SMALL_DESCRIPTORS))
    A = FinAbGroup.parse(desc)
    if A.order > max_order:
        return FinAbGroup.parse("2:2")
    return A


@st.composite
def homs(draw, A, B):
    """A uniformly drawn homomorphism A -> B."""
    step = _step_matrix(A, B)
    rows = []
    for i, n in enumerate(B.orders):
        rows.append([draw(st.integers(0, n // int(s) - 1)) * int(s) for s in step[i]])
    return GroupHom(A, B, np.array(rows, dtype=np.int64).reshape(B.rank, A.rank))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
