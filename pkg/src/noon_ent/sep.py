"""Separability eigenvalue problem (SEP).

For a Hermitian two-mode operator ``L`` the SEP asks for product vectors
``|a,b>`` and reals ``g`` with

    L_b |a> = g |a>,   L_a |b> = g |b>,

where ``L_b = <b|L|b>`` (partial expectation over mode B, an operator on
mode A) and ``L_a = <a|L|a>`` (operator on mode B). The largest ``g`` is
the maximal expectation of ``L`` over separable states.

:func:`solve_sep_analytic` enumerates the closed-form solutions available
for noisy-N00N operators; :func:`solve_sep_numeric` is a multistart
Levenberg-Marquardt search for arbitrary small dense operators, used as an
independent oracle.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateUnresolvable, DimensionMismatch, NoConvergence
from .fock import (
    NoisyNoonOperator,
    ProductVector,
    fock,
    local_dim_of,
    product_vector,
    to_dense,
)

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-9
RIGHT_ANGLES = (0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi)


@dataclass(frozen=True)
class SepSolution:
    g: float
    vec: ProductVector
    branch: str
    residual: float
    index: int | None = None  # Fock index of the coherence block, if any
    phase: int | None = None  # right-angle phase label k (phi = k pi/2)


@dataclass(frozen=True)
class SepSolutionSet:
    operator: object
    solutions: tuple
    flags: tuple = field(default=())

    @property
    def g_max(self) -> float:
        return max(s.g for s in self.solutions)

    @property
    def g_min(self) -> float:
        return min(s.g for s in self.solutions)

    def g_values(self, decimals: int = 8) -> np.ndarray:
        """Distinct separability eigenvalues, ascending."""
        return np.unique(np.round([s.g for s in self.solutions], decimals) + 0.0)

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)


# ---------------------------------------------------------------------------
# reduced operators and residuals


def _as_dense(op) -> np.ndarray:
    if isinstance(op, NoisyNoonOperator):
        return to_dense(op)
    M = np.asarray(op, dtype=complex)
    local_dim_of(M)
    return M


def reduce_over_b(M, b) -> np.ndarray:
    """``L_b = tr_B[L (1 x |b><b|)]``, an operator on mode A."""
    d = local_dim_of(M)
    return np.einsum("ikjl,k,l->ij", M.reshape(d, d, d, d), np.conj(b), b)


def reduce_over_a(M, a) -> np.ndarray:
    """``L_a = tr_A[L (|a><a| x 1)]``, an operator on mode B."""
    d = local_dim_of(M)
    return np.einsum("ikjl,i,j->kl", M.reshape(d, d, d, d), np.conj(a), a)


def _residual_dense(M, a, b, g) -> float:
    ra = np.linalg.norm(reduce_over_b(M, b) @ a - g * a)
    rb = np.linalg.norm(reduce_over_a(M, a) @ b - g * b)
    return float(max(ra, rb))


def sep_residual(op, sol: SepSolution | tuple) -> float:
    """``max(||L_b a - g a||, ||L_a b - g b||)`` for a candidate solution.

    ``sol`` is a :class:`SepSolution` or a ``(g, ProductVector)`` pair.
    """
    g, vec = (sol.g, sol.vec) if isinstance(sol, SepSolution) else sol
    M = _as_dense(op)
    d = local_dim_of(M)
    if vec.local_dim != d:
        raise DimensionMismatch(f"vector local dim {vec.local_dim} != operator local dim {d}")
    return _residual_dense(M, vec.amp_a, vec.amp_b, g)


def _overlap(u: ProductVector, v: ProductVector) -> float:
    return abs(np.vdot(u.amp_a, v.amp_a)) ** 2 * abs(np.vdot(u.amp_b, v.amp_b)) ** 2


def _dedupe(solutions, g_decimals=8, overlap_tol=1e-8, max_per_g=None):
    """Drop repeated solutions (same rounded ``g`` and overlapping vectors).

    ``max_per_g`` caps the number of distinct vectors kept per eigenvalue,
    which matters on continua of solutions.
    """
    groups = {}
    kept = []
    for s in solutions:
        group = groups.setdefault(round(s.g, g_decimals) + 0.0, [])
        if max_per_g is not None and len(group) >= max_per_g:
            continue
        if any(_overlap(k.vec, s.vec) >= 1 - overlap_tol for k in group):
            continue
        group.append(s)
        kept.append(s)
    return kept


# ---------------------------------------------------------------------------
# analytic solution for noisy-N00N operators


def _block_candidates(L0, LA, LB, c, thr):
    """Candidate ``(mu, nu, sign, degenerate)`` tuples for one coherence block.

    ``q^(S,T) = L_S (L_T - L0) - |gamma|^2``; see :func:`solve_sep_analytic`.
    """
    qAA = LA * (LA - L0) - c * c
    qBB = LB * (LB - L0) - c * c
    qAB = LA * (LB - L0) - c * c
    qBA = LB * (LA - L0) - c * c
    qs = (qAA, qBB, qAB, qBA)

    if abs(qAA) < thr or abs(qBB) < thr:
        if max(qs) - min(qs) < thr:
            # all q coincide: the ratios cancel and mu = L_A +- |gamma|
            return [(LA + s * c, LB + s * c, s, True) for s in (+1, -1)]
        # one-sided degeneracy: solve the reduced quadratic in u = nu - L_A
        # -qBB u^2 + 2|gamma|^2 (L_A - L_B) u + |gamma|^2 qAA = 0
        coeffs = np.array([-qBB, 2 * c * c * (LA - LB), c * c * qAA])
        if np.all(np.abs(coeffs) < thr * max(1.0, c * c)):
            raise DegenerateUnresolvable(
                f"degenerate coherence block (q={qs}) without a resolvable limit"
            )
        out = []
        for u in np.roots(coeffs):
            if abs(u.imag) > 1e-9 * max(1.0, abs(u)) or abs(u) < thr:
                continue
            u = u.real
            out.append((LB + c * c / u, LA + u, +1 if u > 0 else -1, True))
        return out

    disc = qAB * qBA
    if disc < -thr * thr:
        return []
    root = np.sqrt(max(disc, 0.0))
    mu = {s: (LA * qBA + s * c * root) / qAA for s in (+1, -1)}
    nu = {s: (LB * qAB + s * c * root) / qBB for s in (+1, -1)}
    # the paper pairs the signs; the mixed pairings are tried too and are
    # rejected by the residual check unless they happen to be genuine
    return [(mu[s], nu[t], s if s == t else 0, False) for s in (+1, -1) for t in (+1, -1)]


def _nontrivial_block(M, op, i, thr_scale, tol):
    d = op.local_dim
    L0 = op.L0
    LA, LB = op.diag_a[i - 1], op.diag_b[i - 1]
    gamma = op.coh[i - 1]
    c = abs(gamma)
    scale = max(abs(L0), abs(LA), abs(LB), c)
    thr = thr_scale * scale * scale
    eps = 1e-12 * scale

    found, rejected = [], []
    for mu, nu, sign, degenerate in _block_candidates(L0, LA, LB, c, thr):
        D = mu + nu - L0
        continuum = False
        if abs(D) < eps:
            if abs(mu) < eps and abs(nu) < eps and abs(L0) < eps:
                # g = 0 continuum of vectors orthogonal to the block; pick |alpha| = |beta| = 1
                g, alpha2, beta2, continuum = 0.0, 1.0, 1.0, True
            else:
                continue
        else:
            g = mu * nu / D
            alpha2 = (mu - L0) / nu if abs(nu) > eps else (mu / g - 1 if abs(g) > eps else np.nan)
            beta2 = (nu - L0) / mu if abs(mu) > eps else (nu / g - 1 if abs(g) > eps else np.nan)
        if not (np.isfinite(alpha2) and np.isfinite(beta2)) or alpha2 <= 0 or beta2 <= 0:
            continue  # unphysical branch: |x> or |y> would vanish or need negative norm
        # beta/alpha = (nu - L_A)/gamma = conj(gamma)/(mu - L_B)
        if abs(nu - LA) > abs(mu - LB):
            ratio = (nu - LA) / gamma
        else:
            ratio = np.conj(gamma) / (mu - LB)
        shift = float(np.angle(ratio))
        for k, phi in enumerate(RIGHT_ANGLES):
            a = np.zeros(d, complex)
            b = np.zeros(d, complex)
            a[0], a[i] = 1.0, np.sqrt(alpha2) * np.exp(1j * phi)
            b[0], b[i] = 1.0, np.sqrt(beta2) * np.exp(1j * (phi + shift))
            vec = product_vector(a, b)
            a, b = vec.amp_a, vec.amp_b
            g_exp = float(np.real(np.vdot(vec.dense(), M @ vec.dense())))
            if continuum:
                g = g_exp
            res = _residual_dense(M, a, b, g)
            if degenerate:
                branch = f"degenerate_phase({k})"
            else:
                branch = {+1: "nontrivial_plus", -1: "nontrivial_minus", 0: "nontrivial_mixed"}[sign]
            sol = SepSolution(float(g), vec, branch, res, index=i, phase=k)
            if res <= tol and abs(g_exp - g) <= max(tol, 1e-9 * scale):
                found.append(sol)
            else:
                rejected.append(sol)
    return found, rejected


def _pair_candidates(op, thr):
    """``(mu, nu, components)`` where two block constraints intersect.

    Components are ``("coh", i)`` for a coherence block whose 2x2 kernel is
    hit (``(L_A_i - nu)(L_B_i - mu) = |gamma_i|^2``), ``("x", j)`` for an
    incoherent index with ``nu = L_A_j`` (amplitude on mode A only) and
    ``("y", j)`` for ``mu = L_B_j`` (mode B only).
    """
    n = op.n_max
    LA, LB, C = op.diag_a, op.diag_b, np.abs(op.coh)
    coh = [i for i in range(1, n + 1) if C[i - 1] != 0]
    inc = [j for j in range(1, n + 1) if C[j - 1] == 0]
    out = []
    for p, i in enumerate(coh):
        ai, bi, ci2 = LA[i - 1], LB[i - 1], C[i - 1] ** 2
        for k in coh[p + 1 :]:
            ak, bk, ck2 = LA[k - 1], LB[k - 1], C[k - 1] ** 2
            # (a_k - nu)[(b_k - b_i)(a_i - nu) + c_i^2] - c_k^2 (a_i - nu) = 0
            lin_i = np.array([-1.0, ai])
            poly = np.polysub(
                np.polymul([-1.0, ak], np.polyadd((bk - bi) * lin_i, [ci2])), ck2 * lin_i
            )
            for nu in np.roots(poly):
                if abs(nu.imag) > 1e-9 * max(1.0, abs(nu)) or abs(ai - nu.real) < thr:
                    continue
                nu = nu.real
                out.append((bi - ci2 / (ai - nu), nu, (("coh", i), ("coh", k))))
        for j in inc:
            if abs(ai - LA[j - 1]) > thr:
                out.append((bi - ci2 / (ai - LA[j - 1]), LA[j - 1], (("coh", i), ("x", j))))
            if abs(bi - LB[j - 1]) > thr:
                out.append((LB[j - 1], ai - ci2 / (bi - LB[j - 1]), (("coh", i), ("y", j))))
    for j in inc:
        for k in inc:
            out.append((LB[k - 1], LA[j - 1], (("x", j), ("y", k))))
    return out


def _paired_solutions(M, op, tol, thr):
    """Solutions whose superposed parts span two blocks (see :func:`_pair_candidates`)."""
    d = op.local_dim
    L0 = op.L0
    scale = max(abs(L0), np.max(np.abs(op.diag_a)), np.max(np.abs(op.diag_b)), np.max(np.abs(op.coh)))
    eps = 1e-12 * max(scale, 1e-300)
    found = []
    for mu, nu, comps in _pair_candidates(op, thr):
        D = mu + nu - L0
        if abs(D) < eps or abs(mu) < eps or abs(nu) < eps:
            continue
        g = mu * nu / D
        X, Y = (mu - L0) / nu, (nu - L0) / mu
        # squared magnitudes s_c solve  sum s_c wx_c = X,  sum s_c wy_c = Y
        W = np.zeros((2, 2))
        ratio = {}
        for col, (kind, j) in enumerate(comps):
            if kind == "coh":
                ratio[j] = (nu - op.diag_a[j - 1]) / op.coh[j - 1]
                W[:, col] = (1.0, abs(ratio[j]) ** 2)
            elif kind == "x":
                W[:, col] = (1.0, 0.0)
            else:
                W[:, col] = (0.0, 1.0)
        if abs(np.linalg.det(W)) < 1e-12:
            continue
        s = np.linalg.solve(W, [X, Y])
        if np.any(s <= 0) or not np.all(np.isfinite(s)):
            continue
        for k, phi in enumerate(RIGHT_ANGLES):
            a = np.zeros(d, complex)
            b = np.zeros(d, complex)
            a[0] = b[0] = 1.0
            for (kind, j), sc in zip(comps, s):
                amp = np.sqrt(sc) * np.exp(1j * phi)
                if kind == "coh":
                    a[j] = amp
                    b[j] = amp * ratio[j]
                elif kind == "x":
                    a[j] = amp
                else:
                    b[j] = amp
            vec = product_vector(a, b)
            res = _residual_dense(M, vec.amp_a, vec.amp_b, g)
            g_exp = float(np.real(np.vdot(vec.dense(), M @ vec.dense())))
            if res <= tol and abs(g_exp - g) <= max(tol, 1e-9 * scale):
                label = "+".join(f"{kind}{j}" for kind, j in comps)
                found.append(SepSolution(float(g), vec, f"paired({label})", res, comps[0][1], k))
    return found


def solve_sep_analytic(
    op: NoisyNoonOperator, tol: float = RESIDUAL_TOL, degenerate_thr: float = 1e-12, paired: bool = True
) -> SepSolutionSet:
    """Closed-form SEP solutions of a noisy-N00N operator.

    Emits the trivial product solutions (``|0,0>``, ``|i,0>``, ``|0,i>``,
    ``|i,i>`` for every active Fock index) and, for every nonzero coherence
    ``gamma_i``, the superposition branch

        g = mu nu / (mu + nu - L0),
        |a> ~ |0> + |alpha| e^{i phi} |i>,  |b> ~ |0> + |beta| e^{i theta} |i>,
        |alpha|^2 = (mu - L0)/nu,  |beta|^2 = (nu - L0)/mu,

    with ``mu``, ``nu`` from the per-block characteristic equations and
    ``phi`` sampled at right angles.

    With ``paired`` (default) the superpositions spread over two blocks are
    added as well: two coherence blocks whose kernels open at the same
    ``(mu, nu)``, or a coherence block combined with an incoherent index
    (``nu = L_A_j`` or ``mu = L_B_j``), or two incoherent indices. Without
    them the set misses genuine solutions whenever more than one Fock index
    is populated.

    Every returned solution has been substituted back into the SEP equations
    (residual ``<= tol``).
    """
    if not isinstance(op, NoisyNoonOperator):
        raise TypeError("solve_sep_analytic needs a NoisyNoonOperator")
    M = to_dense(op)
    d = op.local_dim
    sols = []

    def add(g, a, b, branch, index=None):
        vec = product_vector(a, b)
        sols.append(SepSolution(float(g), vec, branch, _residual_dense(M, vec.amp_a, vec.amp_b, g), index))

    add(op.L0, fock(0, d), fock(0, d), "trivial_row1")
    active = op.active_indices() or [1]
    for i in active:
        add(op.diag_a[i - 1], fock(i, d), fock(0, d), "trivial_row2", i)
        add(op.diag_b[i - 1], fock(0, d), fock(i, d), "trivial_row3", i)
    for i in active:
        add(0.0, fock(i, d), fock(i, d), "trivial_row4", i)

    flags = []
    for i in op.coherent_indices():
        found, rejected = _nontrivial_block(M, op, i, degenerate_thr, tol)
        sols.extend(found)
        if rejected:
            flags.append(f"block {i}: {len(rejected)} candidate vectors failed substitution")
    if paired:
        scale = max(abs(op.L0), np.max(np.abs(op.diag_a)), np.max(np.abs(op.diag_b)), np.max(np.abs(op.coh)))
        sols.extend(_paired_solutions(M, op, tol, degenerate_thr * max(scale, 1e-300)))

    bad = [s for s in sols if s.residual > tol]
    if bad:
        raise ArithmeticError(f"trivial SEP solutions failed substitution: {bad}")
    return SepSolutionSet(op, tuple(_dedupe(sols)), tuple(flags))


# ---------------------------------------------------------------------------
# numeric oracle


def _outer(u, v):
    return (u[:, :, None] * v[:, None, :]).reshape(len(u), -1)


class _EliminatedSep:
    """SEP residual as a function of ``|a>`` only.

    ``|b>`` is taken as the ``k``-th eigenvector of ``L_a`` restricted to a
    support mask and ``g`` as its eigenvalue, so the remaining equation is
    ``L_b a = g a``. Everything is vectorized over a batch of starts.
    """

    def __init__(self, M):
        d = local_dim_of(M)
        T = M.reshape(d, d, d, d)
        self.d = d
        self.to_lb = T.transpose(0, 2, 1, 3).reshape(d * d, d * d).T
        self.to_la = T.transpose(1, 3, 0, 2).reshape(d * d, d * d).T

    def branch(self, a, mask_b, k):
        S, d = a.shape
        La = (_outer(a.conj(), a) @ self.to_la).reshape(S, d, d)
        La = La * (mask_b[:, :, None] * mask_b[:, None, :])
        # park off-support directions far above the spectrum so the first |S_b| eigenpairs live on the support
        La = La + np.einsum("si,ij->sij", (1 - mask_b) * (1e6 + np.arange(d)), np.eye(d))
        w, V = np.linalg.eigh(La)
        idx = np.arange(S)
        return w[idx, k], V[idx, :, k]

    def residual(self, x, mask_a, mask_b, k):
        d = self.d
        a = (x[:, :d] + 1j * x[:, d:]) * mask_a
        a = a / np.linalg.norm(a, axis=1, keepdims=True)
        g, b = self.branch(a, mask_b, k)
        Lb = (_outer(b.conj(), b) @ self.to_lb).reshape(len(x), d, d)
        R = (Lb @ a[..., None])[..., 0] - g[:, None] * a
        return np.concatenate([R.real, R.imag], axis=1), a, b


def _batched_lm(E, a0, mask_a, mask_b, k, max_iter, fd_step=1e-7):
    """Levenberg-Marquardt on the eliminated residual, one independent problem per row."""
    S, d = a0.shape
    n = 2 * d
    X = np.concatenate([a0.real, a0.imag], axis=1)
    cols = np.concatenate([mask_a, mask_a], axis=1)
    act = np.arange(S)
    x = X.copy()
    r = E.residual(x, mask_a, mask_b, k)[0]
    f = (r * r).sum(1)
    lam = np.full(S, 1e-3)
    eye = np.eye(n)
    for _ in range(max_iter):
        ma, mb, kk, ck = mask_a[act], mask_b[act], k[act], cols[act]
        J = np.empty((len(act), r.shape[1], n))
        for j in range(n):
            xp = x.copy()
            xp[:, j] += fd_step
            J[:, :, j] = (E.residual(xp, ma, mb, kk)[0] - r) / fd_step
        J *= ck[:, None, :]
        Jt = np.swapaxes(J, 1, 2)
        A = Jt @ J
        grad = (Jt @ r[..., None])[..., 0]
        damp = lam[:, None] * np.einsum("sii->si", A) + 1e-14
        step = -np.linalg.solve(A + damp[:, :, None] * eye, grad[..., None])[..., 0]
        xn = x + step * ck
        rn = E.residual(xn, ma, mb, kk)[0]
        fn = (rn * rn).sum(1)
        ok = fn < f
        x = np.where(ok[:, None], xn, x)
        r = np.where(ok[:, None], rn, r)
        f = np.where(ok, fn, f)
        lam = np.where(ok, np.maximum(lam / 10, 1e-12), lam * 10)
        X[act] = x
        keep = (f > 1e-26) & (lam < 1e10)
        if not keep.all():
            act, x, r, f, lam = act[keep], x[keep], r[keep], f[keep], lam[keep]
            if len(act) == 0:
                break
    _, a, b = E.residual(X, mask_a, mask_b, k)
    return a, b


class _FullSep:
    """SEP residual in all unknowns ``(a, b, g)`` with its analytic Jacobian.

    Used as a second pass: it does not rely on ``L_a`` having a
    nondegenerate spectrum, where the eliminated form picks an arbitrary
    eigenvector.
    """

    def __init__(self, M):
        d = local_dim_of(M)
        T = M.reshape(d, d, d, d)
        D2 = d * d
        self.d = d
        self.to_lb = T.transpose(0, 2, 1, 3).reshape(D2, D2).T
        self.to_la = T.transpose(1, 3, 0, 2).reshape(D2, D2).T
        self.to_p = T.reshape(D2, D2).T
        self.to_q = T.transpose(0, 3, 1, 2).reshape(D2, D2).T
        self.to_q2 = T.transpose(1, 2, 0, 3).reshape(D2, D2).T

    def unpack(self, x):
        d = self.d
        return x[:, :d] + 1j * x[:, d : 2 * d], x[:, 2 * d : 3 * d] + 1j * x[:, 3 * d : 4 * d], x[:, 4 * d]

    def residual(self, x):
        d = self.d
        a, b, g = self.unpack(x)
        S = len(x)
        Lb = (_outer(b.conj(), b) @ self.to_lb).reshape(S, d, d)
        La = (_outer(a.conj(), a) @ self.to_la).reshape(S, d, d)
        r1 = (Lb @ a[..., None])[..., 0] - g[:, None] * a
        r2 = (La @ b[..., None])[..., 0] - g[:, None] * b
        na = (np.abs(a) ** 2).sum(1, keepdims=True) - 1
        nb = (np.abs(b) ** 2).sum(1, keepdims=True) - 1
        return np.concatenate([r1.real, r1.imag, r2.real, r2.imag, na, nb], axis=1), (a, b, g, Lb, La)

    def jacobian(self, parts):
        d = self.d
        a, b, g, Lb, La = parts
        S = len(g)
        eye = np.eye(d)
        P = (_outer(a, b) @ self.to_p).reshape(S, d, d)
        Q = (_outer(b.conj(), a) @ self.to_q).reshape(S, d, d)
        Q2 = (_outer(a.conj(), b) @ self.to_q2).reshape(S, d, d)
        P2 = np.swapaxes(P, 1, 2)
        Ab = Lb - g[:, None, None] * eye
        Aa = La - g[:, None, None] * eye
        J1 = np.concatenate([Ab, 1j * Ab, P + Q, -1j * P + 1j * Q, -a[:, :, None]], axis=2)
        J2 = np.concatenate([P2 + Q2, -1j * P2 + 1j * Q2, Aa, 1j * Aa, -b[:, :, None]], axis=2)
        z = np.zeros((S, d))
        z1 = np.zeros((S, 1))
        n1 = np.concatenate([2 * a.real, 2 * a.imag, z, z, z1], axis=1)
        n2 = np.concatenate([z, z, 2 * b.real, 2 * b.imag, z1], axis=1)
        return np.concatenate([J1.real, J1.imag, J2.real, J2.imag, n1[:, None], n2[:, None]], axis=1)


def _batched_lm_full(F, M, a0, b0, mask_a, mask_b, max_iter):
    S, d = a0.shape
    X = np.concatenate([a0.real, a0.imag, b0.real, b0.imag, np.zeros((S, 1))], axis=1)
    ab = _outer(a0, b0)
    X[:, 4 * d] = np.einsum("sp,pq,sq->s", ab.conj(), M, ab).real
    cols = np.concatenate([mask_a, mask_a, mask_b, mask_b, np.ones((S, 1))], axis=1)
    n = X.shape[1]
    eye = np.eye(n)
    act = np.arange(S)
    x = X.copy()
    r, parts = F.residual(x)
    f = (r * r).sum(1)
    lam = np.full(S, 1e-3)
    for _ in range(max_iter):
        ck = cols[act]
        J = F.jacobian(parts) * ck[:, None, :]
        Jt = np.swapaxes(J, 1, 2)
        A = Jt @ J
        grad = (Jt @ r[..., None])[..., 0]
        damp = lam[:, None] * np.einsum("sii->si", A) + 1e-14
        step = -np.linalg.solve(A + damp[:, :, None] * eye, grad[..., None])[..., 0]
        xn = x + step * ck
        rn, pn = F.residual(xn)
        fn = (rn * rn).sum(1)
        ok = fn < f
        x = np.where(ok[:, None], xn, x)
        r = np.where(ok[:, None], rn, r)
        f = np.where(ok, fn, f)
        parts = tuple(np.where(ok.reshape((-1,) + (1,) * (p.ndim - 1)), q, p) for p, q in zip(parts, pn))
        lam = np.where(ok, np.maximum(lam / 10, 1e-12), lam * 10)
        X[act] = x
        keep = (f > 1e-26) & (lam < 1e10)
        if not keep.all():
            act, x, r, f, lam = act[keep], x[keep], r[keep], f[keep], lam[keep]
            parts = tuple(p[keep] for p in parts)
            if len(act) == 0:
                break
    a, b, _ = F.unpack(X)
    return a / np.linalg.norm(a, axis=1, keepdims=True), b / np.linalg.norm(b, axis=1, keepdims=True)


def _support_pairs(d, rng, max_pairs):
    subsets = [s for size in range(1, d + 1) for s in itertools.combinations(range(d), size)]
    pairs = [(sa, sb) for sa in subsets for sb in subsets]
    if len(pairs) > max_pairs:
        pick = rng.choice(len(pairs), max_pairs, replace=False)
        pairs = [pairs[i] for i in sorted(pick)]
    return pairs


def solve_sep_numeric(
    op,
    restarts: int = 8,
    max_iter: int = 60,
    tol: float = RESIDUAL_TOL,
    seed=0,
    raise_on_empty: bool = True,
    full_restarts: int | None = None,
    max_support_pairs: int = 1024,
    chunk: int = 4096,
) -> SepSolutionSet:
    """Numeric SEP solutions of a dense (or sparse) Hermitian operator.

    Independent of the closed forms: for every pair of Fock supports
    ``(S_a, S_b)`` and every eigen-branch ``k < |S_b|``, ``restarts`` random
    vectors ``|a>`` on ``S_a`` are refined by Levenberg-Marquardt on
    ``L_b a = g a`` with ``(g, |b>)`` the ``k``-th eigenpair of ``L_a`` on
    ``S_b``. Converged points (SEP residual ``<= tol``) are deduplicated and
    sorted by ``g`` then by a lexicographic vector key, so the output does not
    depend on batch order. A second, smaller pass runs Levenberg-Marquardt in
    all unknowns ``(a, b, g)`` from random starts on the same supports; it
    covers points where ``L_a`` is degenerate and the eliminated form is
    ill-defined. Support pairs are subsampled beyond
    ``max_support_pairs``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    M = _as_dense(op)
    if np.max(np.abs(M - M.conj().T)) > 1e-12:
        raise ValueError("operator is not Hermitian")
    E = _EliminatedSep(M)
    d = E.d
    rng = np.random.default_rng(seed)

    A, MA, MB, K = [], [], [], []
    A2, B2, MA2, MB2 = [], [], [], []
    full_starts = 6 * restarts if full_restarts is None else full_restarts
    for sa, sb in _support_pairs(d, rng, max_support_pairs):
        ma = np.zeros(d)
        ma[list(sa)] = 1
        mb = np.zeros(d)
        mb[list(sb)] = 1
        for k in range(len(sb)):
            for _ in range(restarts):
                A.append(ma * (rng.normal(size=d) + 1j * rng.normal(size=d)))
                MA.append(ma)
                MB.append(mb)
                K.append(k)
        for _ in range(full_starts):
            A2.append(ma * (rng.normal(size=d) + 1j * rng.normal(size=d)))
            B2.append(mb * (rng.normal(size=d) + 1j * rng.normal(size=d)))
            MA2.append(ma)
            MB2.append(mb)
    A, MA, MB, K = map(np.array, (A, MA, MB, K))
    A2, B2, MA2, MB2 = map(np.array, (A2, B2, MA2, MB2))
    A2 /= np.linalg.norm(A2, axis=1, keepdims=True)
    B2 /= np.linalg.norm(B2, axis=1, keepdims=True)

    found, failed = {}, 0

    def collect(a, b):
        nonlocal failed
        a = a / np.linalg.norm(a, axis=1, keepdims=True)
        b = b / np.linalg.norm(b, axis=1, keepdims=True)
        x = _outer(a, b)
        g = np.einsum("sp,pq,sq->s", x.conj(), M, x).real
        T = M.reshape(d, d, d, d)
        ra = np.einsum("ikjl,sk,sl,sj->si", T, b.conj(), b, a) - g[:, None] * a
        rb = np.einsum("ikjl,si,sj,sl->sk", T, a.conj(), a, b) - g[:, None] * b
        res = np.maximum(np.linalg.norm(ra, axis=1), np.linalg.norm(rb, axis=1))
        ok = res <= tol
        failed += int(np.sum(~ok))
        a, b, g, res = a[ok], b[ok], g[ok], res[ok]
        keys = np.round(np.concatenate(_canonical_parts(a) + _canonical_parts(b), axis=1), 6) + 0.0
        keys = np.concatenate([np.round(g, 8)[:, None] + 0.0, keys], axis=1)
        _, first = np.unique(keys, axis=0, return_index=True)
        for k in np.sort(first):
            key = (float(keys[k, 0]), tuple(keys[k, 1:]))
            if key not in found:
                found[key] = SepSolution(float(g[k]), product_vector(a[k], b[k]), "numeric", float(res[k]))

    for lo in range(0, len(A), chunk):
        sl = slice(lo, lo + chunk)
        collect(*_batched_lm(E, A[sl], MA[sl], MB[sl], K[sl], max_iter))
    F = _FullSep(M)
    for lo in range(0, len(A2), chunk):
        sl = slice(lo, lo + chunk)
        collect(*_batched_lm_full(F, M, A2[sl], B2[sl], MA2[sl], MB2[sl], max_iter))

    found = _dedupe([found[key] for key in sorted(found)], max_per_g=8)
    flags = (f"{failed} of {len(A) + len(A2)} runs did not converge",) if failed else ()
    result = SepSolutionSet(op, tuple(found), flags)
    if not found and raise_on_empty:
        raise NoConvergence("no SEP fixed point reached the residual tolerance", partial=result)
    return result


def _g(M, a, b):
    x = np.kron(a, b)
    return float(np.vdot(x, M @ x).real)


def _canonical_phase(v):
    k = int(np.argmax(np.abs(v) > 1e-6))
    return v * np.exp(-1j * np.angle(v[k]))


def _canonical_parts(V):
    """Row-wise :func:`_canonical_phase` split into real and imaginary parts."""
    k = np.argmax(np.abs(V) > 1e-6, axis=1)
    lead = V[np.arange(len(V)), k]
    W = V * np.exp(-1j * np.angle(lead))[:, None]
    return [W.real, W.imag]


def _sort_key(s: SepSolution):
    a, b = _canonical_phase(s.vec.amp_a), _canonical_phase(s.vec.amp_b)
    key = np.round(np.concatenate([a.real, a.imag, b.real, b.imag]), 6) + 0.0
    return (round(s.g, 8) + 0.0, tuple(key))


def g_sets_agree(g1, g2, tol=1e-6) -> bool:
    """Every value of each set lies within ``tol`` of some value of the other."""
    g1, g2 = np.asarray(g1, float), np.asarray(g2, float)
    if len(g1) == 0 or len(g2) == 0:
        return len(g1) == len(g2)
    d = np.abs(g1[:, None] - g2[None, :])
    return bool(np.all(d.min(axis=1) <= tol) and np.all(d.min(axis=0) <= tol))
