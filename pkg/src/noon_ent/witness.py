"""Entanglement witnesses ``W = sup(g) 1 - L`` and the coherence criteria."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange
from .fock import NoisyNoonOperator, to_dense, trace_product
from .sep import solve_sep_analytic

ENTANGLED = "entangled"
INCONCLUSIVE = "inconclusive"
VERDICT_TOL = 1e-10


@dataclass(frozen=True)
class WitnessReport:
    g_sup: float
    expectation_L: float
    value: float
    verdict: str

    @classmethod
    def from_values(cls, g_sup, expectation_L):
        value = g_sup - expectation_L
        return cls(float(g_sup), float(expectation_L), float(value), verdict_of(value))

    def as_dict(self):
        return {"g_sup": self.g_sup, "expectation": self.expectation_L, "value": self.value, "verdict": self.verdict}


def verdict_of(value: float) -> str:
    return ENTANGLED if value < -VERDICT_TOL else INCONCLUSIVE


def separable_bound(L: NoisyNoonOperator) -> float:
    """Largest expectation of ``L`` over separable states (largest SEP eigenvalue)."""
    return solve_sep_analytic(L).g_max


def witness_value(L: NoisyNoonOperator, state: NoisyNoonOperator, g_sup: float | None = None) -> WitnessReport:
    """``<W> = g_sup - tr(L rho)``.

    ``g_sup`` defaults to the largest analytic SEP eigenvalue of ``L``;
    passing a number overrides it (e.g. to evaluate a witness with a
    prescribed bound).
    """
    if g_sup is None:
        g_sup = separable_bound(L)
    return WitnessReport.from_values(g_sup, trace_product(L, state))


def witness_dense(L: NoisyNoonOperator, g_sup: float | None = None) -> np.ndarray:
    M = to_dense(L)
    if g_sup is None:
        g_sup = separable_bound(L)
    return g_sup * np.eye(len(M)) - M


def _check_index(state, i):
    if not 1 <= i <= state.n_max:
        raise IndexOutOfRange(f"coherence index {i} outside 1..{state.n_max}")


def interference_criterion(state: NoisyNoonOperator, i: int) -> float:
    """``1/4 - |rho_{i0,0i}|``; negative means entangled."""
    _check_index(state, i)
    return 0.25 - abs(state.coh[i - 1])


def real_part_criterion(state: NoisyNoonOperator, i: int) -> float:
    """``1/2 - 2 Re rho_{i0,0i}``; the unrotated form of :func:`interference_criterion`."""
    _check_index(state, i)
    return 0.5 - 2 * state.coh[i - 1].real


def dephasing_threshold(N: int) -> float:
    """Gaussian dephasing width at which the coherence criterion stops detecting (coherence factor 1/2)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return float(np.sqrt(2 * np.log(2)) / N)

