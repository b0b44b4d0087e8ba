"""Entanglement measures: Schmidt data, G-concurrence, the C_k hierarchy,
two-qubit concurrence and closed forms for isotropic states.

Pure-state measures are evaluated on the raw coefficient matrix and are
homogeneous of degree two in it: for an unnormalized vector ``c * |psi>`` they
return ``|c|^2`` times the normalized value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import ZERO_TOL, DimensionError, singular_values
from .states import DensityMatrix, PureState, check_fidelity, fidelity_at_time


@dataclass(frozen=True)
class SchmidtSpectrum:
    lambdas: np.ndarray
    total: float

    @property
    def rank(self) -> int:
        lam = self.lambdas
        if len(lam) == 0 or lam[0] <= 0.0:
            return 0
        # threshold on squared singular values mirrors sigma_i <= ZERO_TOL * sigma_max
        return int(np.count_nonzero(lam > (ZERO_TOL**2) * lam[0]))


def schmidt_spectrum(chi: PureState) -> SchmidtSpectrum:
    lam = singular_values(chi.coeffs) ** 2
    return SchmidtSpectrum(lam, float(lam.sum()))


def schmidt_rank(chi: PureState) -> int:
    return schmidt_spectrum(chi).rank


def _clean_lambdas(chi: PureState) -> np.ndarray:
    spec = schmidt_spectrum(chi)
    lam = spec.lambdas.copy()
    lam[spec.rank:] = 0.0
    return lam


def g_concurrence_pure(chi: PureState) -> float:
    """d * (prod lambda_i)^(1/d); zero whenever the Schmidt rank is below d."""
    d = chi.d
    lam = _clean_lambdas(chi)
    if np.any(lam == 0.0):
        return 0.0
    return float(d * np.exp(np.sum(np.log(lam)) / d))


def elementary_symmetric(values, k: int) -> np.ndarray:
    """e_k over the last axis of ``values``."""
    v = np.asarray(values, dtype=float)
    e = np.zeros(v.shape[:-1] + (k + 1,))
    e[..., 0] = 1.0
    for j in range(v.shape[-1]):
        x = v[..., j : j + 1]
        e[..., 1:] = e[..., 1:] + x * e[..., :-1]
    return e[..., k]


def c_k_pure(chi: PureState, k: int) -> float:
    """C_k = d * [e_k(lambda) / binom(d, k)]^(1/k); C_1 is the norm, C_d equals G_d."""
    d = chi.d
    if not 1 <= k <= d:
        raise ValueError(f"k must lie in [1, {d}], got {k}")
    ek = float(elementary_symmetric(_clean_lambdas(chi), k))
    return float(d * (max(ek, 0.0) / math.comb(d, k)) ** (1.0 / k))


_YY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.complex128)


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Closed-form two-qubit concurrence max(0, mu1 - mu2 - mu3 - mu4).

    The mu_i are computed as singular values of tau = B^T (Y (x) Y) B for any
    factorization rho = B B^dagger, which keeps zero mu_i accurate to machine
    precision (square roots of eigenvalues of rho rho~ would not).
    """
    if (rho.d, rho.f) != (2, 2):
        raise DimensionError(f"Wootters concurrence needs a 2x2 system, got {rho.d}x{rho.f}")
    w, v = np.linalg.eigh(rho.matrix)
    b = v * np.sqrt(np.clip(w, 0.0, None))
    mu = np.zeros(4)
    s = np.linalg.svd(b.T @ _YY @ b, compute_uv=False)
    mu[: len(s)] = s
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def isotropic_concurrence(d: int, F: float) -> float:
    """(F d - 1)/(d - 1) for F >= 1/d, else 0."""
    check_fidelity(d, F)
    return max(0.0, (F * d - 1.0) / (d - 1.0))


def isotropic_schmidt_number(d: int, F: float) -> int:
    """The k in 1..d with k - 1 < F d <= k."""
    check_fidelity(d, F)
    # snap F d to an integer boundary it sits on up to rounding
    k = math.ceil(F * d - 1e-12)
    return min(max(k, 1), d)


def drop_time(d: int, gamma: float, k: int) -> float:
    """Time at which the isotropic Schmidt number drops from k to k - 1."""
    if not 2 <= k <= d:
        raise ValueError(f"k must lie in [2, {d}], got {k}")
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return math.log((d * d - 1) / (d * k - d - 1)) / (2.0 * d * gamma)


def separability_time(d: int, gamma: float) -> float:
    return math.log(d + 1) / (2.0 * d * gamma)


def g_vanishing_time(d: int, gamma: float) -> float:
    return math.log((d * d - 1) / (d * d - d - 1)) / (2.0 * d * gamma)


def concurrence_trajectory(d: int, gamma: float, t: float) -> float:
    """C(t) = max(0, ((d + 1) exp(-2 d gamma t) - 1)/d) for one-sided depolarization of Phi."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return max(0.0, ((d + 1) * math.exp(-2.0 * d * gamma * t) - 1.0) / d)


def concurrence_rate(d: int, gamma: float, t: float = 0.0) -> float:
    """Relative decay rate -C'(t)/C(t) while C(t) > 0."""
    c = concurrence_trajectory(d, gamma, t)
    if c <= 0.0:
        raise ValueError("concurrence has vanished; relative rate undefined")
    dc = -2.0 * gamma * (d + 1) * math.exp(-2.0 * d * gamma * t)
    return -dc / c


def rate_ratio(d: int, gamma: float = 1.0) -> float:
    """Gamma_G / Gamma_C(0) with Gamma_G = 1/t_d and Gamma_C(0) = -C'(0)/C(0).

    Evaluated from the rate definitions at the given ``gamma``; the result is
    cross-checked against the gamma-free closed form.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    ratio = (1.0 / g_vanishing_time(d, gamma)) / concurrence_rate(d, gamma, 0.0)
    closed = d / ((d + 1) * math.log((d * d - 1) / (d * d - d - 1)))
    if not math.isclose(ratio, closed, rel_tol=1e-12):
        raise ArithmeticError(f"rate ratio {ratio!r} does not match closed form {closed!r}")
    return ratio


def isotropic_trajectory_point(d: int, gamma: float, t: float) -> tuple[float, float, int]:
    F = fidelity_at_time(d, gamma, t)
    return F, isotropic_concurrence(d, F), isotropic_schmidt_number(d, F)
