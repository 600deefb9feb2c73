import numpy as np
import pytest
from hypothesis import given, settings

from noon_ent.channels import DiscreteMoments, apply_atmospheric_loss, gaussian_lambda
from noon_ent.errors import IndexOutOfRange
from noon_ent.fock import (
    interference_operator,
    make_noisy_noon,
    noon_state,
    product_expectations,
    random_product_vectors,
    to_dense,
)
from noon_ent.witness import (
    ENTANGLED,
    INCONCLUSIVE,
    dephasing_threshold,
    interference_criterion,
    real_part_criterion,
    separable_bound,
    witness_dense,
    witness_value,
)

from conftest import random_state, seeds


def vacuum_weighted_bound_oracle():
    # |a> = (c, 0, s), |b> = (c, 0, s) real: <L> = c^4/2 + 2 c^2 s^2 = 2t - 3t^2/2, t = c^2 -> max 2/3 at t = 2/3
    t = np.linspace(0, 1, 200001)
    return float(np.max(2 * t - 1.5 * t**2))


def test_pure_noon_witness_is_minus_half():
    for N in (1, 2, 3):
        rep = witness_value(interference_operator(N), noon_state(N))
        assert rep.g_sup == pytest.approx(0.5, abs=1e-12)
        assert rep.value == pytest.approx(-0.5, abs=1e-12)
        assert rep.verdict == ENTANGLED


def test_product_fock_state_is_inconclusive():
    state = make_noisy_noon(0.0, [0.0, 0.0], [0.0, 1.0], [0.0, 0.0], as_state=True)
    rep = witness_value(interference_operator(2), state)
    assert rep.value == pytest.approx(0.5)
    assert rep.verdict == INCONCLUSIVE


def test_vacuum_weighted_operator_bound():
    L = interference_operator(2, L0=0.5)
    assert separable_bound(L) == pytest.approx(2 / 3, abs=1e-12)
    assert vacuum_weighted_bound_oracle() == pytest.approx(2 / 3, abs=1e-9)


@pytest.mark.parametrize("t2,t4", [(0.3, 0.1), (0.6, 0.5), (0.95, 0.9)])
def test_override_bound_gives_loss_formula(t2, t4):
    # two-point law matched to the two moments is not always possible; use the generic state directly
    state = make_noisy_noon(1 - 2 * t2 + t4, [t2 - t4, t4 / 2], [t2 - t4, t4 / 2], [0, t4 / 2], as_state=True)
    L = interference_operator(2, L0=0.5)
    rep = witness_value(L, state, g_sup=0.5)
    assert rep.value == pytest.approx(t2 - 1.5 * t4, abs=1e-12)


def test_loss_witness_crossing():
    for x in (0.1, 0.5, 0.9):
        state = apply_atmospheric_loss(2, DiscreteMoments([0.0, 1.0], [1 - x, x]))
        assert interference_criterion(state, 2) == pytest.approx(0.25 - x / 2, abs=1e-12)


def test_witness_nonnegative_on_product_vectors():
    rng = np.random.default_rng(7)
    for L in (interference_operator(2), interference_operator(2, L0=0.5)):
        g = separable_bound(L)
        A, B = random_product_vectors(100_000, L.local_dim, rng)
        assert np.min(g - product_expectations(L, A, B)) >= -1e-9


def test_witness_dense_matches_value():
    L = interference_operator(2, L0=0.5)
    W = witness_dense(L)
    rho = to_dense(noon_state(2))
    assert np.trace(W @ rho).real == pytest.approx(witness_value(L, noon_state(2)).value)


def test_interference_criterion_cases():
    s = noon_state(2, coherence=0.4)
    assert interference_criterion(s, 2) == pytest.approx(0.25 - 0.2)
    assert interference_criterion(s, 1) == pytest.approx(0.25)
    assert real_part_criterion(s, 2) == pytest.approx(0.5 - 0.4)
    with pytest.raises(IndexOutOfRange):
        interference_criterion(s, 3)
    with pytest.raises(IndexOutOfRange):
        interference_criterion(s, 0)


def test_rotated_coherence():
    s = noon_state(2, coherence=1j)
    assert interference_criterion(s, 2) == pytest.approx(-0.25)
    assert real_part_criterion(s, 2) == pytest.approx(0.5)


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_dephasing_threshold(N):
    d = dephasing_threshold(N)
    assert gaussian_lambda(d, N) == pytest.approx(0.5, abs=1e-12)
    assert interference_criterion(noon_state(N, coherence=gaussian_lambda(d, N)), N) == pytest.approx(0, abs=1e-12)
    with pytest.raises(ValueError):
        dephasing_threshold(0)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_witness_never_flags_separable_mixtures(seed):
    # states with no coherence are separable; the witness must not call them entangled
    rng = np.random.default_rng(seed)
    s = random_state(rng, coherence_prob=0.0)
    L = interference_operator(s.n_max, L0=float(rng.random()), n_max=s.n_max)
    assert witness_value(L, s).value >= -1e-12
