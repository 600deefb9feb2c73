"""Entanglement quasiprobabilities of noisy-N00N states.

The state is expanded as ``rho = sum_k p_k |a_k,b_k><a_k,b_k|`` over a fixed
basis of product vectors taken from the SEP solutions of ``rho``. The
weights solve ``G p = g`` with ``G_kl = |<a_k,b_k|a_l,b_l>|^2`` and
``g_k = <a_k,b_k|rho|a_k,b_k>``. Negative weights certify entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ReconstructionFailure
from .fock import NoisyNoonOperator, ProductVector, fock, phase_superposition, product_expectations, product_vector, to_dense

NULL_RTOL = 1e-10
RECONSTRUCTION_TOL = 1e-8
RIGHT_ANGLES = (0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi)


@dataclass(frozen=True)
class QuasiProbability:
    basis: tuple
    weights: np.ndarray
    gram_rank: int
    reconstruction_residual: float
    min_weight: float
    labels: tuple = ()

    def as_dict(self):
        return {
            "labels": list(self.labels),
            "weights": [float(w) for w in self.weights],
            "min_weight": self.min_weight,
            "gram_rank": self.gram_rank,
            "residual": self.reconstruction_residual,
        }


def _superposition_families(i, arg_gamma, d):
    """``|s_n, s_n>`` and ``|s_n, s_{n+2}>`` for coherence index ``i``.

    ``s_n = (|0> + e^{i n pi/2}|i>)/sqrt(2)`` on mode A; mode B carries the
    extra phase ``-arg(gamma_i)`` so the families align with the coherence.
    """
    same, shifted = [], []
    for n, phi in enumerate(RIGHT_ANGLES):
        a = phase_superposition(i, phi, d)
        same.append(product_vector(a, phase_superposition(i, phi - arg_gamma, d), label=f"|s{n},s{n}>[{i}]"))
        shifted.append(
            product_vector(a, phase_superposition(i, phi + np.pi - arg_gamma, d), label=f"|s{n},s{(n + 2) % 4}>[{i}]")
        )
    return same, shifted


def build_basis(state: NoisyNoonOperator, coherent_indices=None) -> list[ProductVector]:
    """Ordered product-vector basis for :func:`solve_quasiprob`.

    ``|0,0>``; then for each coherence index ``i``: ``|i,i>``, ``|0,i>``,
    ``|i,0>``, four ``|s_n,s_n>`` and four ``|s_n,s_{n+2}>``; then ``|j,0>``,
    ``|0,j>`` for the remaining populated indices.

    ``coherent_indices`` defaults to the indices with a nonzero coherence.
    Passing an index explicitly keeps its full 12-vector block even when the
    coherence vanishes (useful to compare weights across a dephasing sweep).
    """
    d = state.local_dim
    if coherent_indices is None:
        coherent_indices = state.coherent_indices()
    coherent_indices = sorted(set(int(i) for i in coherent_indices))
    basis = [product_vector(fock(0, d), fock(0, d), label="|0,0>")]
    for i in coherent_indices:
        arg = float(np.angle(state.coh[i - 1]))
        basis.append(product_vector(fock(i, d), fock(i, d), label=f"|{i},{i}>"))
        basis.append(product_vector(fock(0, d), fock(i, d), label=f"|0,{i}>"))
        basis.append(product_vector(fock(i, d), fock(0, d), label=f"|{i},0>"))
        same, shifted = _superposition_families(i, arg, d)
        basis.extend(same)
        basis.extend(shifted)
    for j in state.active_indices():
        if j in coherent_indices:
            continue
        basis.append(product_vector(fock(j, d), fock(0, d), label=f"|{j},0>"))
        basis.append(product_vector(fock(0, d), fock(j, d), label=f"|0,{j}>"))
    return basis


def gram_matrix(basis) -> np.ndarray:
    """``G_kl = |<a_k|a_l>|^2 |<b_k|b_l>|^2``."""
    A = np.array([v.amp_a for v in basis])
    B = np.array([v.amp_b for v in basis])
    return np.abs(A.conj() @ A.T) ** 2 * np.abs(B.conj() @ B.T) ** 2


def _null_space(G):
    w, V = np.linalg.eigh(G)
    zero = w < NULL_RTOL * w.max()
    return V[:, zero], int(np.sum(~zero))


def reconstruct(q: QuasiProbability) -> np.ndarray:
    """``sum_k p_k |a_k,b_k><a_k,b_k|`` as a dense matrix."""
    X = np.array([v.dense() for v in q.basis])
    return (X.T * q.weights) @ X.conj()


def solve_quasiprob(state: NoisyNoonOperator, coherent_indices=None, basis=None) -> QuasiProbability:
    """Quasiprobability weights of ``state`` over :func:`build_basis`.

    ``p = G^+ g`` is the minimum-norm solution. When ``G`` is singular the
    null-space component is then fixed so that the weights on the
    superposition vectors (``|s_n,.>``) have the smallest Euclidean norm.
    The Fock-vector weights then carry the populations and each
    superposition family carries ``+-|gamma_i|/2`` uniformly. Raises
    :class:`ReconstructionFailure` if the weights do not rebuild the state.
    """
    if basis is None:
        basis = build_basis(state, coherent_indices)
    basis = tuple(basis)
    A = np.array([v.amp_a for v in basis])
    B = np.array([v.amp_b for v in basis])
    gvec = product_expectations(state, A, B)
    G = gram_matrix(basis)

    p = np.linalg.pinv(G, rcond=NULL_RTOL, hermitian=True) @ gvec
    Z, rank = _null_space(G)
    if Z.shape[1]:
        # projection onto the null space (zero for the pseudoinverse solution, kept as a guard)
        for k in range(Z.shape[1]):
            z = Z[:, k]
            p = p - (z @ p) / (z @ z) * z
        sup = np.array([v.label.startswith("|s") for v in basis])
        if sup.any():
            c = -np.linalg.pinv(Z[sup], rcond=NULL_RTOL) @ p[sup]
            p = p + Z @ c
    p = np.where(np.abs(p) < 1e-14, 0.0, p)  # clear round-off signs on exact zeros

    X = np.array([v.dense() for v in basis])
    rebuilt = (X.T * p) @ X.conj()
    residual = float(np.linalg.norm(to_dense(state) - rebuilt))
    q = QuasiProbability(
        basis=basis,
        weights=p,
        gram_rank=rank,
        reconstruction_residual=residual,
        min_weight=float(p.min()),
        labels=tuple(v.label for v in basis),
    )
    if residual > RECONSTRUCTION_TOL:
        raise ReconstructionFailure(f"basis does not reproduce the state (residual {residual:.3e})", result=q)
    return q


def negativity(q: QuasiProbability) -> float:
    """Most negative weight (``>= 0`` means no negativity)."""
    return q.min_weight
