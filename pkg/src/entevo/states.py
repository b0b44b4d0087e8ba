"""Bipartite states, Kraus channels and the structural constructions built on them.

Conventions
-----------
A pure state on C^d (x) C^f is stored as its coefficient matrix ``A`` with
``|chi> = sum_ij A[i, j] |i>|j>``, so the state vector is ``A.reshape(-1)``.
Channels act on one subsystem; the Jamiolkowski state of a channel is
``(1 (x) $)|Phi><Phi|`` (channel on the *second* factor) and the filter that
prepares ``|chi>`` from ``|Phi>`` acts on the *first* factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DimensionError,
    as_matrix,
    haar_isometry,
    is_hermitian,
    make_rng,
    partial_trace,
)

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10


@dataclass(frozen=True)
class PureState:
    coeffs: np.ndarray
    squared_norm: float = field(init=False)

    def __post_init__(self):
        a = as_matrix(self.coeffs, "coeffs")
        if a.shape[0] > a.shape[1]:
            raise DimensionError(f"need d <= f, got coefficient shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "squared_norm", float(np.vdot(a, a).real))

    @classmethod
    def from_vector(cls, vec, d: int, f: int | None = None) -> PureState:
        f = d if f is None else f
        v = np.asarray(vec, dtype=np.complex128)
        if v.size != d * f:
            raise DimensionError(f"vector of length {v.size} does not fit {d}x{f}")
        return cls(v.reshape(d, f))

    @property
    def d(self) -> int:
        return self.coeffs.shape[0]

    @property
    def f(self) -> int:
        return self.coeffs.shape[1]

    @property
    def vector(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def is_normalized(self, tol: float = TRACE_TOL) -> bool:
        return abs(self.squared_norm - 1.0) <= tol

    def normalized(self) -> PureState:
        return PureState(self.coeffs / np.sqrt(self.squared_norm))

    def projector(self) -> DensityMatrix:
        v = self.vector
        return DensityMatrix(np.outer(v, v.conj()), self.d, self.f,
                             normalized=self.is_normalized())


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian PSD operator on C^d (x) C^f.

    ``normalized=False`` marks an operator whose trace is allowed to differ
    from one (outputs of filters and trace-decreasing maps).
    """

    matrix: np.ndarray
    d: int
    f: int
    normalized: bool = True

    def __post_init__(self):
        m = as_matrix(self.matrix, "matrix")
        n = self.d * self.f
        if m.shape != (n, n):
            raise DimensionError(f"matrix shape {m.shape} does not match {self.d}x{self.f}")
        scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
        if not is_hermitian(m, HERMITIAN_TOL * scale):
            raise ValueError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(m)[0] < -PSD_TOL * scale:
            raise ValueError("density matrix is not positive semidefinite")
        if self.normalized and abs(np.trace(m).real - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {np.trace(m).real!r} differs from 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def reduced(self, keep: str = "first") -> np.ndarray:
        """Reduced operator on subsystem ``keep``."""
        drop = "second" if keep == "first" else "first"
        return partial_trace(self.matrix, (self.d, self.f), drop)


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive map on C^d given by Kraus operators."""

    kraus: tuple
    trace_preserving: bool = True

    def __post_init__(self):
        ops = tuple(as_matrix(k, "kraus operator") for k in self.kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise DimensionError("Kraus operators must all be square d x d (dim_in == dim_out)")
            k.setflags(write=False)
        gram = sum(k.conj().T @ k for k in ops)
        top = np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))[-1]
        if top > 1.0 + 1e-10:
            raise ValueError(f"sum K^dag K exceeds the identity (max eigenvalue {top:.3g})")
        is_tp = np.max(np.abs(gram - np.eye(d))) <= 1e-10
        if bool(is_tp) != bool(self.trace_preserving):
            raise ValueError("trace_preserving flag disagrees with sum K^dag K")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    dim_in = dim_out = dim

    @property
    def stacked(self) -> np.ndarray:
        return np.stack(self.kraus)

    def __call__(self, x) -> np.ndarray:
        """Action on a single-system operator."""
        k = self.stacked
        return np.einsum("nij,jk,nlk->il", k, np.asarray(x, dtype=np.complex128), k.conj())


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d),))


def unitary_channel(u) -> KrausChannel:
    return KrausChannel((as_matrix(u),))


def max_entangled(d: int) -> PureState:
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return PureState(np.eye(d) / np.sqrt(d))


def filtering_operator(chi: PureState) -> np.ndarray:
    """M with (M (x) 1)|Phi> = |chi>, namely sqrt(d) * A."""
    if chi.d != chi.f:
        raise DimensionError(f"filtering operator needs d == f, got {chi.d}x{chi.f}")
    if not chi.is_normalized():
        raise ValueError("filtering operator needs a normalized state")
    return np.sqrt(chi.d) * np.array(chi.coeffs)


def _as_density(state) -> DensityMatrix:
    if isinstance(state, PureState):
        return state.projector()
    if isinstance(state, DensityMatrix):
        return state
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _apply_ops(rho: np.ndarray, d: int, f: int, first=None, second=None) -> np.ndarray:
    t = rho.reshape(d, f, d, f)
    if first is not None:
        t = np.einsum("nai,ijkl,nbk->ajbl", first, t, first.conj())
    if second is not None:
        t = np.einsum("naj,ijkl,nbl->iakb", second, t, second.conj())
    return t.reshape(d * f, d * f)


def apply_one_sided(ch: KrausChannel, state, side: str = "second") -> DensityMatrix:
    """rho' = sum_i (K_i on ``side``) rho (K_i on ``side``)^dagger."""
    rho = _as_density(state)
    if side not in ("first", "second"):
        raise ValueError(f"side must be 'first' or 'second', got {side!r}")
    target = rho.d if side == "first" else rho.f
    if ch.dim != target:
        raise DimensionError(f"channel acts on dimension {ch.dim}, {side} subsystem has {target}")
    ops = {side: ch.stacked}
    out = _hermitize(_apply_ops(rho.matrix, rho.d, rho.f, **ops))
    return DensityMatrix(out, rho.d, rho.f, normalized=rho.normalized and ch.trace_preserving)


def apply_two_sided(ch1: KrausChannel, ch2: KrausChannel, state) -> DensityMatrix:
    """(ch1 (x) ch2) rho."""
    rho = _as_density(state)
    if ch1.dim != rho.d or ch2.dim != rho.f:
        raise DimensionError(
            f"channels act on {ch1.dim}x{ch2.dim}, state is {rho.d}x{rho.f}")
    out = _hermitize(_apply_ops(rho.matrix, rho.d, rho.f, ch1.stacked, ch2.stacked))
    ok = rho.normalized and ch1.trace_preserving and ch2.trace_preserving
    return DensityMatrix(out, rho.d, rho.f, normalized=ok)


def jamiolkowski_state(ch: KrausChannel, d: int | None = None) -> DensityMatrix:
    """(1 (x) $)|Phi><Phi|."""
    d = ch.dim if d is None else d
    if ch.dim != d:
        raise DimensionError(f"channel acts on dimension {ch.dim}, not {d}")
    # (1 (x) K)|Phi> has coefficient matrix K^T / sqrt(d)
    vecs = np.transpose(ch.stacked, (0, 2, 1)).reshape(len(ch.kraus), -1) / np.sqrt(d)
    rho = _hermitize(vecs.T @ vecs.conj())
    return DensityMatrix(rho, d, d, normalized=ch.trace_preserving)


def channel_from_jamiolkowski(rho: DensityMatrix, tol: float = 1e-8) -> KrausChannel:
    """Invert :func:`jamiolkowski_state` for a trace-preserving channel.

    Kraus operators come from the eigendecomposition of ``rho`` and are only
    defined up to a unitary mixing; compare channels by their action.
    """
    d = rho.d
    if rho.f != d:
        raise DimensionError("Jamiolkowski state must be d x d")
    red = rho.reduced("first")
    if np.max(np.abs(red - np.eye(d) / d)) > tol:
        raise ValueError("first reduction is not maximally mixed; not a trace-preserving channel image")
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > 1e-14 * max(w[-1], 1e-300)
    kraus = [np.sqrt(d * wi) * vi.reshape(d, d).T for wi, vi in zip(w[keep], v[:, keep].T)]
    ops = np.stack(kraus)
    # absorb the residual from the 1e-8 reduction tolerance so the TP check holds exactly
    gram = np.einsum("nji,njk->ik", ops.conj(), ops)
    wg, vg = np.linalg.eigh(_hermitize(gram))
    fix = (vg / np.sqrt(wg)) @ vg.conj().T
    return KrausChannel(tuple(k @ fix for k in ops))


def dual_form(chi: PureState, ch: KrausChannel) -> DensityMatrix:
    """(M_chi (x) 1) rho_$ (M_chi^dagger (x) 1) with rho_$ the Jamiolkowski state."""
    m = filtering_operator(chi)
    if ch.dim != chi.d:
        raise DimensionError(f"channel acts on dimension {ch.dim}, state is {chi.d}x{chi.d}")
    rho_ch = jamiolkowski_state(ch, chi.d)
    out = _apply_ops(rho_ch.matrix, chi.d, chi.d, first=m[None])
    return DensityMatrix(_hermitize(out), chi.d, chi.d, normalized=ch.trace_preserving)


def weyl_operator(d: int, a: int, b: int) -> np.ndarray:
    """X^a Z^b with X the cyclic shift and Z = diag(omega^k)."""
    x = np.roll(np.eye(d), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)


def depolarizing_channel(d: int, p: float) -> KrausChannel:
    """rho -> (1 - p) rho + p tr(rho) 1/d, with d^2 Weyl Kraus operators."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    ops = [np.sqrt(1.0 - p + p / d**2) * np.eye(d)]
    w = np.sqrt(p / d**2)
    ops += [w * weyl_operator(d, a, b) for a in range(d) for b in range(d) if (a, b) != (0, 0)]
    return KrausChannel(tuple(ops))


def depolarizing_probability(d: int, gamma: float, t: float) -> float:
    """Mixing probability reached after time t: p = 1 - exp(-2 d gamma t)."""
    _check_time(gamma, t)
    return float(-np.expm1(-2.0 * d * gamma * t))


def fidelity_from_probability(d: int, p: float) -> float:
    return 1.0 - p + p / d**2


def fidelity_at_time(d: int, gamma: float, t: float) -> float:
    """F(t) = [1 + (d^2 - 1) exp(-2 d gamma t)] / d^2."""
    _check_time(gamma, t)
    return (1.0 + (d**2 - 1) * np.exp(-2.0 * d * gamma * t)) / d**2


def _check_time(gamma: float, t: float) -> None:
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")


def check_fidelity(d: int, F: float) -> None:
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not (1.0 / d**2 - 1e-12 <= F <= 1.0 + 1e-12):
        raise ValueError(f"F must lie in [1/d^2, 1] = [{1 / d**2:.6g}, 1], got {F}")


def isotropic_state(d: int, F: float) -> DensityMatrix:
    check_fidelity(d, F)
    phi = max_entangled(d).vector
    proj = np.outer(phi, phi.conj())
    rho = (1.0 - F) / (d**2 - 1) * (np.eye(d * d) - proj) + F * proj
    return DensityMatrix(rho, d, d)


def random_pure_state(d: int, f: int | None = None, seed=None) -> PureState:
    """Haar-random normalized pure state on C^d (x) C^f."""
    f = d if f is None else f
    rng = make_rng(seed)
    a = rng.standard_normal((d, f)) + 1j * rng.standard_normal((d, f))
    return PureState(a / np.linalg.norm(a))


def random_density_matrix(d: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Random state from the induced measure: G G^dagger / tr with G Ginibre of width ``rank``."""
    n = d * d
    rank = n if rank is None else rank
    if not 1 <= rank <= n:
        raise ValueError(f"rank must lie in [1, {n}], got {rank}")
    rng = make_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    return DensityMatrix(_hermitize(rho / np.trace(rho).real), d, d)


def random_channel(d: int, n_kraus: int, seed=None) -> KrausChannel:
    """Trace-preserving channel from a Haar isometry C^d -> C^(d n_kraus) cut into blocks."""
    if not 1 <= n_kraus <= d * d:
        raise ValueError(f"n_kraus must lie in [1, {d * d}], got {n_kraus}")
    v = haar_isometry(d * n_kraus, d, seed)
    return KrausChannel(tuple(v.reshape(n_kraus, d, d)))


def random_diagonal_channel(d: int, n_kraus: int, seed=None) -> KrausChannel:
    """Trace-preserving channel whose Kraus operators are all diagonal."""
    rng = make_rng(seed)
    g = rng.standard_normal((n_kraus, d)) + 1j * rng.standard_normal((n_kraus, d))
    g /= np.linalg.norm(g, axis=0)
    return KrausChannel(tuple(np.diag(col) for col in g))


def random_contraction(d: int, seed=None) -> np.ndarray:
    """Random d x d matrix with operator norm < 1."""
    rng = make_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    s = np.linalg.svd(g, compute_uv=False)[0]
    return g / (s * (1.0 + rng.uniform(0.05, 1.0)))
