"""Truncated two-mode Fock representation of noisy N00N operators.

A noisy N00N operator is supported on the populations of ``|0,0>``,
``|i,0>``, ``|0,i>`` and the coherences ``|i,0><0,i|`` (plus conjugates).
The sparse coefficient form stored in :class:`NoisyNoonOperator` is the
canonical one; dense ``(n_max+1)**2`` square matrices exist for oracles
(partial transposition, numeric SEP, reconstruction checks).

Dense index convention: ``|j,k>`` sits at row ``j * d + k`` with
``d = n_max + 1`` (mode A is the slow index, matching ``np.kron(a, b)``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, LengthMismatch, PositivityError, TraceError

STATE_TOL = 1e-12
HERMITIAN_TOL = 1e-12


def _frozen(x, dtype):
    arr = np.array(x, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class NoisyNoonOperator:
    """Sparse noisy-N00N operator.

    Attributes:
        L0: coefficient of ``|0,0><0,0|``.
        diag_a: ``diag_a[i-1]`` is the coefficient of ``|i,0><i,0|``.
        diag_b: ``diag_b[i-1]`` is the coefficient of ``|0,i><0,i|``.
        coh: ``coh[i-1]`` is the coefficient of ``|i,0><0,i|``; the
            Hermitian conjugate ``|0,i><i,0|`` is implied.
        is_state: whether state invariants were enforced on construction.
    """

    L0: float
    diag_a: np.ndarray
    diag_b: np.ndarray
    coh: np.ndarray
    is_state: bool = False

    @property
    def n_max(self) -> int:
        return len(self.diag_a)

    @property
    def local_dim(self) -> int:
        return self.n_max + 1

    def trace(self) -> float:
        return float(self.L0 + self.diag_a.sum() + self.diag_b.sum())

    def active_indices(self) -> list[int]:
        """Fock indices (1-based) carrying any nonzero coefficient."""
        nz = (self.diag_a != 0) | (self.diag_b != 0) | (self.coh != 0)
        return [i + 1 for i in np.flatnonzero(nz)]

    def coherent_indices(self) -> list[int]:
        return [i + 1 for i in np.flatnonzero(self.coh != 0)]

    def with_coherences(self, coh) -> "NoisyNoonOperator":
        return make_noisy_noon(self.L0, self.diag_a, self.diag_b, coh, as_state=self.is_state)

    def __repr__(self):
        return (
            f"NoisyNoonOperator(L0={self.L0!r}, diag_a={self.diag_a.tolist()!r}, "
            f"diag_b={self.diag_b.tolist()!r}, coh={self.coh.tolist()!r}, is_state={self.is_state})"
        )


def make_noisy_noon(L0, diag_a, diag_b, coh, as_state=False, tol=STATE_TOL) -> NoisyNoonOperator:
    """Validate coefficients and build a :class:`NoisyNoonOperator`.

    With ``as_state`` the unit trace, nonnegative populations and the
    positivity of every 2x2 coherence block ``|coh_i|^2 <= A_i B_i`` are
    enforced (all within ``tol``).
    """
    diag_a = np.asarray(diag_a, dtype=float).ravel()
    diag_b = np.asarray(diag_b, dtype=float).ravel()
    coh = np.asarray(coh, dtype=complex).ravel()
    if not (len(diag_a) == len(diag_b) == len(coh)):
        raise LengthMismatch(
            f"coefficient sequences differ in length: {len(diag_a)}, {len(diag_b)}, {len(coh)}"
        )
    if len(diag_a) < 1:
        raise LengthMismatch("at least one Fock index (n_max >= 1) is required")
    L0 = float(L0)
    if not all(np.all(np.isfinite(x)) for x in (L0, diag_a, diag_b, coh)):
        raise ValueError("coefficients must be finite")

    if as_state:
        tr = L0 + diag_a.sum() + diag_b.sum()
        if abs(tr - 1.0) > tol:
            raise TraceError(f"trace is {tr!r}, expected 1")
        if L0 < -tol or np.any(diag_a < -tol) or np.any(diag_b < -tol):
            raise PositivityError("populations must be nonnegative")
        excess = np.abs(coh) ** 2 - diag_a * diag_b
        if np.any(excess > tol):
            i = int(np.argmax(excess)) + 1
            raise PositivityError(
                f"coherence block {i} not positive: |coh|^2={abs(coh[i - 1]) ** 2!r} "
                f"> A*B={diag_a[i - 1] * diag_b[i - 1]!r}"
            )

    return NoisyNoonOperator(
        L0=L0,
        diag_a=_frozen(diag_a, float),
        diag_b=_frozen(diag_b, float),
        coh=_frozen(coh, complex),
        is_state=bool(as_state),
    )


def noon_state(N: int, n_max: int | None = None, coherence: complex = 1.0) -> NoisyNoonOperator:
    """``(|N,0> + |0,N>)/sqrt(2)`` with its coherence scaled by ``coherence``."""
    if N < 1:
        raise ValueError("photon number N must be >= 1")
    n_max = N if n_max is None else n_max
    a = np.zeros(n_max)
    a[N - 1] = 0.5
    c = np.zeros(n_max, dtype=complex)
    c[N - 1] = 0.5 * coherence
    return make_noisy_noon(0.0, a, a.copy(), c, as_state=True)


def vacuum(n_max: int = 1) -> NoisyNoonOperator:
    return make_noisy_noon(1.0, np.zeros(n_max), np.zeros(n_max), np.zeros(n_max), as_state=True)


def interference_operator(N: int, L0: float = 0.0, n_max: int | None = None) -> NoisyNoonOperator:
    """Test operator ``|N,0><0,N| + |0,N><N,0| + L0 |0,0><0,0|``."""
    n_max = N if n_max is None else n_max
    c = np.zeros(n_max, dtype=complex)
    c[N - 1] = 1.0
    return make_noisy_noon(L0, np.zeros(n_max), np.zeros(n_max), c)


def pad(op: NoisyNoonOperator, n_max: int) -> NoisyNoonOperator:
    """Same operator embedded in a larger truncation."""
    if n_max < op.n_max:
        raise DimensionMismatch(f"cannot shrink n_max {op.n_max} -> {n_max}")
    extra = n_max - op.n_max
    return make_noisy_noon(
        op.L0,
        np.concatenate([op.diag_a, np.zeros(extra)]),
        np.concatenate([op.diag_b, np.zeros(extra)]),
        np.concatenate([op.coh, np.zeros(extra)]),
        as_state=op.is_state,
    )


# ---------------------------------------------------------------------------
# product vectors


@dataclass(frozen=True, eq=False)
class ProductVector:
    """Normalized product vector ``|a> (x) |b>`` over truncated Fock spaces."""

    amp_a: np.ndarray
    amp_b: np.ndarray
    label: str = field(default="", compare=False)

    @property
    def local_dim(self) -> int:
        return len(self.amp_a)

    def dense(self) -> np.ndarray:
        return np.kron(self.amp_a, self.amp_b)

    def projector(self) -> np.ndarray:
        v = self.dense()
        return np.outer(v, v.conj())

    def __repr__(self):
        name = f" {self.label}" if self.label else ""
        return f"ProductVector{name}(a={np.round(self.amp_a, 6).tolist()}, b={np.round(self.amp_b, 6).tolist()})"


def product_vector(a, b, label: str = "", normalize: bool = True) -> ProductVector:
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if len(a) != len(b):
        raise DimensionMismatch(f"factor dimensions differ: {len(a)} vs {len(b)}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("product vector factors must be nonzero")
    if normalize:
        a, b = a / na, b / nb
    elif abs(na - 1) > STATE_TOL or abs(nb - 1) > STATE_TOL:
        raise ValueError(f"factors not normalized: |a|={na!r}, |b|={nb!r}")
    return ProductVector(_frozen(a, complex), _frozen(b, complex), label)


def fock(n: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


def fock_product(j: int, k: int, dim: int) -> ProductVector:
    return product_vector(fock(j, dim), fock(k, dim), label=f"|{j},{k}>")


def phase_superposition(i: int, phase: float, dim: int) -> np.ndarray:
    """``(|0> + e^{i phase} |i>)/sqrt(2)``."""
    v = np.zeros(dim, dtype=complex)
    v[0] = 1.0
    v[i] = np.exp(1j * phase)
    return v / np.sqrt(2.0)


def random_product_vectors(count: int, dim: int, rng=None) -> tuple[np.ndarray, np.ndarray]:
    """``count`` Haar-random local factor pairs as arrays of shape ``(count, dim)``."""
    rng = np.random.default_rng(rng)
    a = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    b = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    return a, b


# ---------------------------------------------------------------------------
# dense form and expectation values


def to_dense(op: NoisyNoonOperator) -> np.ndarray:
    d = op.local_dim
    M = np.zeros((d * d, d * d), dtype=complex)
    M[0, 0] = op.L0
    for i in range(1, d):
        ia, ib = i * d, i  # |i,0>, |0,i>
        M[ia, ia] = op.diag_a[i - 1]
        M[ib, ib] = op.diag_b[i - 1]
        M[ia, ib] = op.coh[i - 1]
        M[ib, ia] = np.conj(op.coh[i - 1])
    return M


def is_hermitian(M, tol=HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(M - M.conj().T), initial=0.0) <= tol)


def local_dim_of(M) -> int:
    n = M.shape[0]
    d = int(round(np.sqrt(n)))
    if M.ndim != 2 or M.shape[0] != M.shape[1] or d * d != n:
        raise DimensionMismatch(f"not a square two-mode operator: shape {M.shape}")
    return d


def _check_real(z, tol):
    z = complex(z)
    if abs(z.imag) > tol * max(1.0, abs(z.real)):
        raise ValueError(f"expectation value has imaginary part {z.imag!r}; operator not Hermitian?")
    return z.real


def expectation(op, v: ProductVector, tol: float = 1e-12) -> float:
    """``<a,b|L|a,b>`` for a sparse operator or a dense matrix."""
    if isinstance(op, NoisyNoonOperator):
        if v.local_dim < op.local_dim:
            raise DimensionMismatch(f"vector local dim {v.local_dim} < operator local dim {op.local_dim}")
        return float(product_expectations(op, v.amp_a[None, :], v.amp_b[None, :])[0])
    M = np.asarray(op)
    d = local_dim_of(M)
    if d != v.local_dim:
        raise DimensionMismatch(f"operator local dim {d} != vector local dim {v.local_dim}")
    x = v.dense()
    return _check_real(np.vdot(x, M @ x), tol)


def product_expectations(op: NoisyNoonOperator, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Vectorized ``<a_k,b_k|L|a_k,b_k>`` over rows of ``A`` and ``B``.

    Rows may be longer than ``n_max + 1``; higher Fock components do not
    couple to a noisy-N00N operator.
    """
    n = op.n_max
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    if A.shape[1] < n + 1 or B.shape[1] < n + 1:
        raise DimensionMismatch("product vectors shorter than operator truncation")
    a0, b0 = A[:, 0], B[:, 0]
    ai, bi = A[:, 1 : n + 1], B[:, 1 : n + 1]
    pa0, pb0 = np.abs(a0) ** 2, np.abs(b0) ** 2
    val = op.L0 * pa0 * pb0
    val = val + pb0 * (np.abs(ai) ** 2 @ op.diag_a) + pa0 * (np.abs(bi) ** 2 @ op.diag_b)
    # gamma |i,0><0,i| + h.c. -> 2 Re[gamma conj(a_i b_0) a_0 b_i]
    cross = (np.conj(ai) * bi) @ op.coh
    val = val + 2.0 * np.real(np.conj(b0) * a0 * cross)
    return val


def trace_product(L: NoisyNoonOperator, rho: NoisyNoonOperator) -> float:
    """``tr(L rho)`` computed in sparse form."""
    n = max(L.n_max, rho.n_max)
    L, rho = pad(L, n), pad(rho, n)
    val = L.L0 * rho.L0 + L.diag_a @ rho.diag_a + L.diag_b @ rho.diag_b
    # tr(gamma |i0><0i| rho) = gamma rho_{0i,i0} = gamma conj(rho_coh)
    val += 2.0 * np.real(L.coh @ np.conj(rho.coh))
    return float(val)


def min_eigenvalue(M) -> float:
    return float(np.linalg.eigvalsh(np.asarray(M))[0])


# ---------------------------------------------------------------------------
# JSON state-spec


def from_spec(spec: dict) -> NoisyNoonOperator:
    """Build an operator from the JSON state-spec dictionary.

    Schema: ``{"L0": r, "terms": [{"i": int, "A": r, "B": r, "coh": [re, im]}, ...],
    "state": bool}``. Omitted term fields default to zero.
    """
    if not isinstance(spec, dict):
        raise ValueError("state spec must be a JSON object")
    unknown = set(spec) - {"L0", "terms", "state"}
    if unknown:
        raise ValueError(f"unknown state-spec fields: {sorted(unknown)}")
    terms = spec.get("terms", [])
    if not isinstance(terms, list):
        raise ValueError("'terms' must be a list")
    idx = []
    for t in terms:
        if not isinstance(t, dict) or "i" not in t:
            raise ValueError(f"malformed term {t!r}")
        bad = set(t) - {"i", "A", "B", "coh"}
        if bad:
            raise ValueError(f"unknown term fields: {sorted(bad)}")
        i = t["i"]
        if not isinstance(i, int) or isinstance(i, bool) or i < 1:
            raise ValueError(f"term index must be a positive integer, got {i!r}")
        idx.append(i)
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate term index")
    n_max = max(idx, default=1)
    A = np.zeros(n_max)
    B = np.zeros(n_max)
    C = np.zeros(n_max, dtype=complex)
    for t in terms:
        k = t["i"] - 1
        A[k] = float(t.get("A", 0.0))
        B[k] = float(t.get("B", 0.0))
        c = t.get("coh", [0.0, 0.0])
        if not (isinstance(c, (list, tuple)) and len(c) == 2):
            raise ValueError(f"'coh' must be [re, im], got {c!r}")
        C[k] = complex(float(c[0]), float(c[1]))
    return make_noisy_noon(float(spec.get("L0", 0.0)), A, B, C, as_state=bool(spec.get("state", False)))


def to_spec(op: NoisyNoonOperator) -> dict:
    terms = []
    for i in range(1, op.n_max + 1):
        a, b, c = op.diag_a[i - 1], op.diag_b[i - 1], op.coh[i - 1]
        if a == 0 and b == 0 and c == 0:
            continue
        terms.append({"i": i, "A": float(a), "B": float(b), "coh": [float(c.real), float(c.imag)]})
    return {"L0": op.L0, "terms": terms, "state": op.is_state}


def load_spec(path) -> NoisyNoonOperator:
    with open(path) as fh:
        return from_spec(json.load(fh))
