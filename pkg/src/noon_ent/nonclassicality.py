"""Partial-transpose spectrum and Glauber-Sudarshan P series of diagonal states."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .errors import NotDiagonal
from .fock import NoisyNoonOperator, local_dim_of, to_dense


def partial_transpose(M, mode: str = "b") -> np.ndarray:
    M = np.asarray(M)
    d = local_dim_of(M)
    T = M.reshape(d, d, d, d)  # (i, k, j, l) for <i,k| M |j,l>
    if mode == "b":
        T = T.transpose(0, 3, 2, 1)
    elif mode == "a":
        T = T.transpose(2, 1, 0, 3)
    else:
        raise ValueError("mode must be 'a' or 'b'")
    return T.reshape(d * d, d * d)


def ppt_min_eigenvalue(state, mode: str = "b") -> float:
    """Smallest eigenvalue of the partial transpose (negative => entangled)."""
    M = to_dense(state) if isinstance(state, NoisyNoonOperator) else np.asarray(state, complex)
    return float(np.linalg.eigvalsh(partial_transpose(M, mode)).min())


@dataclass(frozen=True)
class DeltaDerivativeSeries:
    """``sum coefficient * d^order_x d^order_x* delta(alpha) delta(beta)``, ``x`` the mode variable.

    Order-0 terms are the same distribution on both modes; the vacuum weight
    is booked on mode ``a``.
    """

    terms: tuple  # (mode, order, coefficient), sorted

    def coefficient(self, mode: str, order: int) -> float:
        for m, k, c in self.terms:
            if m == mode and k == order:
                return c
        return 0.0

    def max_order(self, mode: str) -> int:
        return max((k for m, k, _ in self.terms if m == mode), default=0)

    def total_weight(self) -> float:
        """Integral of the distribution (sum of order-0 coefficients)."""
        return sum(c for _, k, c in self.terms if k == 0)


def fock_p_coefficients(n: int) -> list[float]:
    """``|n><n|`` has ``P = sum_j C(n, j)/j! d^j d*^j delta``; entry ``j`` is that coefficient."""
    return [comb(n, j) / factorial(j) for j in range(n + 1)]


def glauber_p(state: NoisyNoonOperator, tol: float = 1e-12) -> DeltaDerivativeSeries:
    if np.any(np.abs(state.coh) > tol):
        raise NotDiagonal("P series is only available for states without coherences")
    acc = {}

    def add(mode, order, c):
        acc[(mode, order)] = acc.get((mode, order), 0.0) + c

    add("a", 0, state.L0)
    for mode, weights in (("a", state.diag_a), ("b", state.diag_b)):
        for n, w in enumerate(weights, start=1):
            if w == 0:
                continue
            for j, c in enumerate(fock_p_coefficients(n)):
                add(mode, j, w * c)
    terms = tuple(sorted((m, k, float(c)) for (m, k), c in acc.items() if abs(c) > tol))
    return DeltaDerivativeSeries(terms)


def p_is_classical(series: DeltaDerivativeSeries) -> bool:
    """True iff the series is a nonnegative combination of plain deltas."""
    return all(k == 0 and c >= 0 for _, k, c in series.terms)
