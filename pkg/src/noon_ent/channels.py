"""Dephasing and (fluctuating) loss channels acting on N00N states."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Mapping

import numpy as np
from scipy import integrate, special

from .errors import InvalidDistribution, MomentUnavailable
from .fock import NoisyNoonOperator, make_noisy_noon

# ---------------------------------------------------------------------------
# phase distributions


@dataclass(frozen=True)
class PhaseDistribution:
    """Single-mode phase distribution.

    ``kind`` is one of ``"delta"`` (fixed phase ``phi0``), ``"uniform"``,
    ``"wrapped_gaussian"`` (width ``delta``) or ``"empirical"`` (``samples``).
    """

    kind: str
    phi0: float = 0.0
    delta: float = 0.0
    samples: tuple = ()

    def __post_init__(self):
        if self.kind not in ("delta", "uniform", "wrapped_gaussian", "empirical"):
            raise InvalidDistribution(f"unknown phase distribution kind {self.kind!r}")
        if self.kind == "wrapped_gaussian" and not self.delta >= 0:
            raise InvalidDistribution(f"wrapped Gaussian width must be >= 0, got {self.delta!r}")
        if self.kind == "empirical" and len(self.samples) < 1:
            raise InvalidDistribution("empirical distribution needs at least one sample")

    def characteristic(self, n: int) -> complex:
        """``E[exp(i n phi)]``."""
        if self.kind == "delta":
            return complex(np.exp(1j * n * self.phi0))
        if self.kind == "uniform":
            return 1.0 + 0j if n == 0 else 0j
        if self.kind == "wrapped_gaussian":
            # wrapping does not change the characteristic function at integer n
            return complex(np.exp(-0.5 * (self.delta * n) ** 2))
        return complex(np.mean(np.exp(1j * n * np.asarray(self.samples, dtype=float))))


def delta_phase(phi0: float = 0.0) -> PhaseDistribution:
    return PhaseDistribution("delta", phi0=phi0)


def uniform_phase() -> PhaseDistribution:
    return PhaseDistribution("uniform")


def wrapped_gaussian(delta: float) -> PhaseDistribution:
    return PhaseDistribution("wrapped_gaussian", delta=float(delta))


def empirical_phase(samples) -> PhaseDistribution:
    return PhaseDistribution("empirical", samples=tuple(float(s) for s in np.ravel(samples)))


def dephasing_factor(dist, N: int) -> complex:
    """Coherence factor ``lambda = E[exp(i (phi_a - phi_b) N)]``.

    ``dist`` is a pair ``(dist_a, dist_b)`` of independent single-mode
    distributions, or an ``(n, 2)`` array of joint samples ``(phi_a, phi_b)``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if isinstance(dist, np.ndarray):
        joint = np.asarray(dist, dtype=float)
        if joint.ndim != 2 or joint.shape[1] != 2 or len(joint) < 1:
            raise InvalidDistribution("joint phase samples must have shape (n, 2)")
        return complex(np.mean(np.exp(1j * N * (joint[:, 0] - joint[:, 1]))))
    dist_a, dist_b = dist
    return dist_a.characteristic(N) * np.conj(dist_b.characteristic(N))


def gaussian_lambda(delta: float, N: int) -> float:
    """Closed form ``exp(-delta^2 N^2 / 2)`` for one-mode wrapped Gaussian dephasing."""
    return float(np.exp(-0.5 * (delta * N) ** 2))


def apply_dephasing(state: NoisyNoonOperator, dist) -> NoisyNoonOperator:
    """Multiply each coherence ``coh_i`` by the dephasing factor at order ``i``."""
    factors = np.array([dephasing_factor(dist, i) for i in range(1, state.n_max + 1)])
    return make_noisy_noon(state.L0, state.diag_a, state.diag_b, state.coh * factors, as_state=state.is_state)


def dephase_gaussian(state: NoisyNoonOperator, delta: float) -> NoisyNoonOperator:
    return apply_dephasing(state, (delta_phase(0.0), wrapped_gaussian(delta)))


# ---------------------------------------------------------------------------
# transmission moments


class TransmissionMoments:
    """Provider of joint transmission moments ``<T_a^m T_b^n>``.

    Subclasses implement :meth:`_moment`; the public :meth:`moment` validates
    orders and handles ``(0, 0)``. ``stderr`` is nonzero only for sampled
    providers.
    """

    correlated = False

    def moment(self, m: int, n: int = 0) -> float:
        if m < 0 or n < 0 or int(m) != m or int(n) != n:
            raise ValueError(f"moment orders must be nonnegative integers, got ({m}, {n})")
        if m == 0 and n == 0:
            return 1.0
        return float(self._moment(int(m), int(n)))

    def stderr(self, m: int, n: int = 0) -> float:
        return 0.0

    def marginal(self, k: int, mode: str = "a") -> float:
        return self.moment(k, 0) if mode == "a" else self.moment(0, k)

    def _moment(self, m, n):
        raise NotImplementedError


class DeterministicMoments(TransmissionMoments):
    def __init__(self, t_a: float, t_b: float):
        for t in (t_a, t_b):
            if not 0.0 <= t <= 1.0:
                raise InvalidDistribution(f"transmission coefficient {t!r} outside [0, 1]")
        self.t_a, self.t_b = float(t_a), float(t_b)

    def _moment(self, m, n):
        return self.t_a**m * self.t_b**n

    def __repr__(self):
        return f"DeterministicMoments(t_a={self.t_a}, t_b={self.t_b})"


class CorrelatedMoments(TransmissionMoments):
    """Both modes see the same random ``T``: ``<T_a^m T_b^n> = <T^(m+n)>``."""

    correlated = True

    def _moment(self, m, n):
        return self.power_moment(m + n)

    def power_moment(self, k: int) -> float:
        raise NotImplementedError


class CorrelatedDeterministic(CorrelatedMoments):
    def __init__(self, t: float):
        if not 0.0 <= t <= 1.0:
            raise InvalidDistribution(f"transmission coefficient {t!r} outside [0, 1]")
        self.t = float(t)

    def power_moment(self, k):
        return self.t**k

    def __repr__(self):
        return f"CorrelatedDeterministic(t={self.t})"


class DiscreteMoments(CorrelatedMoments):
    """Correlated ``T`` supported on finitely many atoms (e.g. a two-point law)."""

    def __init__(self, values, probabilities, tol: float = 1e-12):
        v = np.asarray(values, dtype=float).ravel()
        p = np.asarray(probabilities, dtype=float).ravel()
        if len(v) != len(p) or len(v) == 0:
            raise InvalidDistribution("values and probabilities must be nonempty and of equal length")
        if np.any(p < 0) or abs(p.sum() - 1.0) > tol:
            raise InvalidDistribution(f"probabilities must be nonnegative and sum to 1 (sum={p.sum()!r})")
        if np.any(v < 0) or np.any(v > 1):
            raise InvalidDistribution("transmission values must lie in [0, 1]")
        self.values, self.probabilities = v, p

    def power_moment(self, k):
        return float(self.probabilities @ self.values**k)

    def __repr__(self):
        return f"DiscreteMoments(values={self.values.tolist()}, probabilities={self.probabilities.tolist()})"


class BetaMoments(CorrelatedMoments):
    """Correlated ``T ~ Beta(alpha, beta)``; ``<T^k> = B(alpha+k, beta)/B(alpha, beta)``."""

    def __init__(self, alpha: float, beta: float):
        if not (alpha > 0 and beta > 0):
            raise InvalidDistribution(f"beta parameters must be > 0, got ({alpha!r}, {beta!r})")
        self.alpha, self.beta = float(alpha), float(beta)

    def power_moment(self, k):
        j = np.arange(k)
        return float(np.prod((self.alpha + j) / (self.alpha + self.beta + j)))

    def density(self, t):
        return special.beta(self.alpha, self.beta) ** -1 * t ** (self.alpha - 1) * (1 - t) ** (self.beta - 1)

    def __repr__(self):
        return f"BetaMoments(alpha={self.alpha}, beta={self.beta})"


class ProductMoments(TransmissionMoments):
    """Uncorrelated modes: ``<T_a^m T_b^n> = <T_a^m><T_b^n>``."""

    def __init__(self, mode_a: TransmissionMoments, mode_b: TransmissionMoments):
        self.mode_a, self.mode_b = mode_a, mode_b

    def _moment(self, m, n):
        return self.mode_a.moment(m, 0) * self.mode_b.moment(n, 0)

    def stderr(self, m, n=0):
        va, vb = self.mode_a.moment(m, 0), self.mode_b.moment(n, 0)
        sa, sb = self.mode_a.stderr(m, 0), self.mode_b.stderr(n, 0)
        return float(np.hypot(sa * vb, sb * va))


class TableMoments(TransmissionMoments):
    """Precomputed moments keyed by ``(m, n)``; missing orders raise."""

    def __init__(self, table: Mapping):
        self.table = {}
        for key, val in table.items():
            m, n = (int(x) for x in key)
            val = float(val)
            if not -1e-12 <= val <= 1 + 1e-12:
                raise InvalidDistribution(f"moment <T_a^{m} T_b^{n}> = {val!r} outside [0, 1]")
            self.table[(m, n)] = val
        if (0, 0) in self.table and abs(self.table[(0, 0)] - 1.0) > 1e-12:
            raise InvalidDistribution("<T^0> must equal 1")

    def _moment(self, m, n):
        try:
            return self.table[(m, n)]
        except KeyError:
            raise MomentUnavailable(f"moment order ({m}, {n}) not in table") from None


class MonteCarloMoments(TransmissionMoments):
    """Sample-mean moments, precomputed up to ``max_order`` per mode.

    ``sampler(rng, count)`` returns either a 1-D array of correlated ``T``
    values or a ``(count, 2)`` array of ``(T_a, T_b)`` pairs.
    """

    MIN_COUNT = 10_000

    def __init__(self, sampler: Callable, count: int, max_order: int = 8, seed=0):
        if count < self.MIN_COUNT:
            raise InvalidDistribution(f"monte_carlo needs at least {self.MIN_COUNT} samples, got {count}")
        rng = np.random.default_rng(seed)
        s = np.asarray(sampler(rng, count), dtype=float)
        if s.ndim == 1:
            self.correlated = True
            ta = tb = s
        elif s.ndim == 2 and s.shape[1] == 2:
            ta, tb = s[:, 0], s[:, 1]
        else:
            raise InvalidDistribution(f"sampler returned shape {s.shape}")
        if np.any(s < 0) or np.any(s > 1):
            raise InvalidDistribution("sampled transmissions must lie in [0, 1]")
        self.count, self.max_order = len(ta), int(max_order)
        k = np.arange(self.max_order + 1)
        pa = ta[:, None] ** k  # (count, K)
        pb = tb[:, None] ** k
        prod = pa[:, :, None] * pb[:, None, :]
        self._mean = prod.mean(axis=0)
        self._err = prod.std(axis=0, ddof=1) / np.sqrt(self.count)

    def _moment(self, m, n):
        if m > self.max_order or n > self.max_order:
            raise MomentUnavailable(f"order ({m}, {n}) exceeds precomputed max_order={self.max_order}")
        return self._mean[m, n]

    def stderr(self, m, n=0):
        if m > self.max_order or n > self.max_order:
            raise MomentUnavailable(f"order ({m}, {n}) exceeds precomputed max_order={self.max_order}")
        return float(self._err[m, n])


def make_moments(spec) -> TransmissionMoments:
    """Build a moment provider from a dictionary (the ``"loss"`` block of a channel spec).

    Recognised kinds: ``deterministic`` (``t_a``, ``t_b``),
    ``correlated_deterministic`` (``t``), ``two_point``/``discrete``
    (``values``, ``probabilities``), ``beta`` (``alpha``, ``beta``),
    ``product`` (``a``, ``b`` nested specs), ``table`` (``moments`` as
    ``[[m, n, value], ...]``) and ``monte_carlo`` (``sampler`` callable,
    ``count``, optional ``max_order``, ``seed``).
    """
    if isinstance(spec, TransmissionMoments):
        return spec
    spec = dict(spec)
    kind = spec.pop("kind", None)
    try:
        if kind == "deterministic":
            return DeterministicMoments(spec["t_a"], spec.get("t_b", spec["t_a"]))
        if kind == "correlated_deterministic":
            return CorrelatedDeterministic(spec["t"])
        if kind in ("two_point", "discrete"):
            return DiscreteMoments(spec["values"], spec["probabilities"])
        if kind == "beta":
            return BetaMoments(spec["alpha"], spec["beta"])
        if kind == "product":
            return ProductMoments(make_moments(spec["a"]), make_moments(spec["b"]))
        if kind == "table":
            rows = spec["moments"]
            table = rows if isinstance(rows, Mapping) else {(r[0], r[1]): r[2] for r in rows}
            return TableMoments(table)
        if kind == "monte_carlo":
            return MonteCarloMoments(
                spec["sampler"], int(spec["count"]), spec.get("max_order", 8), spec.get("seed", 0)
            )
    except KeyError as exc:
        raise InvalidDistribution(f"loss spec of kind {kind!r} is missing field {exc}") from None
    raise InvalidDistribution(f"unknown loss kind {kind!r}")


def beta_moment_quadrature(alpha: float, beta: float, k: int) -> float:
    """``<T^k>`` of a Beta density by adaptive quadrature (independent of the closed form)."""
    norm = special.beta(alpha, beta)
    val, _ = integrate.quad(
        lambda t: t ** (alpha + k - 1) * (1 - t) ** (beta - 1), 0.0, 1.0, epsabs=1e-10, epsrel=1e-12, limit=200
    )
    return val / norm


def _loss_population(moments: TransmissionMoments, N: int, k: int, mode: str) -> float:
    """``<T^(2k) (1 - T^2)^(N-k)>`` expanded into pure power moments."""
    total = 0.0
    for j in range(N - k + 1):
        total += comb(N - k, j) * (-1) ** j * moments.marginal(2 * (k + j), mode)
    return total


def apply_atmospheric_loss(N: int, moments, n_max: int | None = None) -> NoisyNoonOperator:
    """Noisy N00N state obtained by sending ``|psi_N>`` through a (fluctuating) loss channel."""
    if N < 1:
        raise ValueError("N must be >= 1")
    moments = make_moments(moments)
    n_max = N if n_max is None else n_max
    if n_max < N:
        raise ValueError(f"n_max={n_max} cannot hold N={N}")
    A = np.zeros(n_max)
    B = np.zeros(n_max)
    C = np.zeros(n_max, dtype=complex)
    L0 = 0.0
    for k in range(N + 1):
        pa = 0.5 * comb(N, k) * _loss_population(moments, N, k, "a")
        pb = 0.5 * comb(N, k) * _loss_population(moments, N, k, "b")
        if k == 0:
            L0 = pa + pb
        else:
            A[k - 1], B[k - 1] = pa, pb
    C[N - 1] = 0.5 * moments.moment(N, N)
    # binomial cancellation leaves rounding-level negatives for lossless channels
    A[np.abs(A) < 1e-15] = 0.0
    B[np.abs(B) < 1e-15] = 0.0
    L0 = 0.0 if abs(L0) < 1e-15 else L0
    return make_noisy_noon(L0, A, B, C, as_state=True, tol=1e-10)


def channel_from_spec(spec: dict, N: int):
    """Apply a JSON channel spec ``{"dephasing": {...}, "loss": {...}}`` to ``|psi_N>``.

    Loss (if present) acts first, then dephasing. The dephasing block takes
    ``kind`` (``gaussian``, ``uniform`` or ``none``) and ``delta``; the
    Gaussian acts on mode B only.
    """
    from .fock import noon_state

    unknown = set(spec) - {"dephasing", "loss"}
    if unknown:
        raise InvalidDistribution(f"unknown channel-spec fields: {sorted(unknown)}")
    if "loss" in spec and spec["loss"] is not None:
        state = apply_atmospheric_loss(N, make_moments(spec["loss"]))
    else:
        state = noon_state(N)
    deph = spec.get("dephasing")
    if deph:
        kind = deph.get("kind", "gaussian")
        if kind in ("gaussian", "wrapped_gaussian"):
            state = apply_dephasing(state, (delta_phase(0.0), wrapped_gaussian(float(deph.get("delta", 0.0)))))
        elif kind == "uniform":
            state = apply_dephasing(state, (delta_phase(0.0), uniform_phase()))
        elif kind != "none":
            raise InvalidDistribution(f"unknown dephasing kind {kind!r}")
    return state
