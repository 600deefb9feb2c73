import numpy as np
import pytest
from hypothesis import strategies as st

from noon_ent.fock import make_noisy_noon


def random_state(rng, n_max=None, coherence_prob=0.7):
    """Random valid noisy N00N state (block positivity by construction)."""
    n = int(rng.integers(1, 4)) if n_max is None else n_max
    A, B, L0 = rng.random(n), rng.random(n), rng.random()
    A[rng.random(n) < 0.2] = 0.0
    tot = L0 + A.sum() + B.sum()
    A, B, L0 = A / tot, B / tot, L0 / tot
    C = np.sqrt(A * B) * rng.random(n) * np.exp(2j * np.pi * rng.random(n))
    C[rng.random(n) > coherence_prob] = 0.0
    return make_noisy_noon(L0, A, B, C, as_state=True)


def random_operator(rng, n_max=None):
    n = int(rng.integers(1, 4)) if n_max is None else n_max
    return make_noisy_noon(
        rng.normal(), rng.normal(size=n), rng.normal(size=n), rng.normal(size=n) + 1j * rng.normal(size=n)
    )


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
