"""Generalized W states ``(1/sqrt(d)) sum_m |0..N_m..0>`` and tripartite witnesses.

States are kept in the compact ``d x d`` representation over the vectors
``|e_m> = |N in mode m, vacuum elsewhere>``; that span is invariant under
phase noise, so nothing else is ever populated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import gaussian_lambda
from .errors import UnsupportedModeCount
from .fock import NoisyNoonOperator, make_noisy_noon
from .witness import WitnessReport

# Separability bounds of the projector onto the tripartite W-type state.
# External constants (full / partial separability), not derived here.
F_FULL = 2.0 / 3.0
F_PART = 4.0 / 9.0

SUPPORTED_MODES = (2, 3)


@dataclass(frozen=True, eq=False)
class MultiModeState:
    d: int
    N: int
    rho: np.ndarray  # d x d over |e_1>, ..., |e_d>

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (self.d, self.d):
            raise ValueError(f"compact matrix must be {self.d}x{self.d}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("state is not Hermitian")
        if abs(np.trace(rho).real - 1) > 1e-12:
            raise ValueError("state trace is not 1")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    def overlap_with_w(self) -> float:
        """``<psi_{N,d}| rho |psi_{N,d}>``."""
        return float(self.rho.sum().real / self.d)

    def dense(self) -> np.ndarray:
        """Full matrix over ``(N+1)^d`` Fock product states (mode 1 most significant)."""
        dim = (self.N + 1) ** self.d
        idx = [self.N * (self.N + 1) ** (self.d - 1 - m) for m in range(self.d)]
        out = np.zeros((dim, dim), complex)
        out[np.ix_(idx, idx)] = self.rho
        return out

    def to_noisy_noon(self) -> NoisyNoonOperator:
        """Two-mode case as a :class:`NoisyNoonOperator`."""
        if self.d != 2:
            raise UnsupportedModeCount("only d = 2 maps onto a two-mode noisy N00N state")
        a = np.zeros(self.N)
        b = np.zeros(self.N)
        c = np.zeros(self.N, complex)
        a[-1] = self.rho[0, 0].real
        b[-1] = self.rho[1, 1].real
        c[-1] = self.rho[0, 1]
        return make_noisy_noon(0.0, a, b, c, as_state=True)


def _check_modes(d):
    if d not in SUPPORTED_MODES:
        raise UnsupportedModeCount(f"d = {d} not supported (use one of {SUPPORTED_MODES})")


def w_state(N: int, d: int = 3) -> MultiModeState:
    _check_modes(d)
    if N < 1:
        raise ValueError("N must be >= 1")
    return MultiModeState(d, N, np.full((d, d), 1.0 / d))


def dephase_one_mode(
    state: MultiModeState, delta: float | None = None, lam: complex | None = None, mode: int | None = None
) -> MultiModeState:
    """Gaussian dephasing of one mode (default: the last).

    Coherences between that mode and the others are multiplied by
    ``lam = exp(-delta^2 N^2 / 2)``; pass ``lam`` directly to skip the width.
    """
    if (delta is None) == (lam is None):
        raise ValueError("give exactly one of delta or lam")
    if lam is None:
        lam = gaussian_lambda(delta, state.N)
    m = state.d - 1 if mode is None else mode
    rho = np.array(state.rho)
    others = [k for k in range(state.d) if k != m]
    rho[m, others] *= np.conj(lam)
    rho[others, m] *= lam
    return MultiModeState(state.d, state.N, rho)


def tripartite_witness(state: MultiModeState, kind: str = "full") -> WitnessReport:
    """``f_kind - <psi_{N,3}| rho |psi_{N,3}>``; negative means not fully (resp. partially) separable."""
    _check_modes(state.d)
    if state.d != 3:
        raise UnsupportedModeCount("tripartite witness needs d = 3")
    bounds = {"full": F_FULL, "partial": F_PART}
    if kind not in bounds:
        raise ValueError(f"kind must be 'full' or 'partial', got {kind!r}")
    return WitnessReport.from_values(bounds[kind], state.overlap_with_w())
