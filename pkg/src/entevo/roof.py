"""Upper bounds on convex-roof entanglement measures.

Every decomposition of ``rho = sum_j mu_j |e_j><e_j|`` into m pure states is
``Psi = U W`` with ``W`` the r x D matrix of rows ``sqrt(mu_j) <e_j|`` and U an
m x r isometry.  The rows of ``Psi`` are subnormalized members ``sqrt(p_i)
|phi_i>`` and, by degree-2 homogeneity, the ensemble average is simply the
sum of the pure measure over rows.

The search is derivative free: each iteration pairs up the rows of ``Psi`` at
random and mixes every pair with a random SU(2) rotation of angle at most
``step``; a pair is kept only if its contribution drops.  Left multiplication
by these rotations moves ``U`` over the whole isometry manifold.  After
``patience`` consecutive iterations with no accepted pair the step is halved,
and a restart ends once the step falls below ``tol``.

Each restart draws from its own child seed in fixed-size chunks, so its
trajectory does not depend on how many restarts or iterations were requested:
more restarts or a larger ``max_iters`` can only lower the result.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numba
import numpy as np

from .linalg import DimensionError, haar_isometry, split_seed
from .measures import elementary_symmetric
from .states import DensityMatrix

_CHUNK = 256
_KIND_G, _KIND_C = 0, 1


@dataclass(frozen=True)
class RoofParams:
    ensemble_size: int | None = None  # default max(rank, min(d^2, 2 * rank))
    restarts: int = 20
    max_iters: int = 20000
    tol: float = 1e-6
    initial_step: float = 0.5
    patience: int = 200
    shrink: float = 0.5


@dataclass(frozen=True)
class RoofEstimate:
    value: float
    ensemble_size: int
    restarts: int
    iterations: int
    converged: bool
    residual: float
    start_value: float
    best_restart: int
    measure: str
    weights: np.ndarray | None = None
    vectors: np.ndarray | None = None

    def to_dict(self, with_ensemble: bool = False) -> dict:
        out = asdict(self)
        out.pop("weights")
        out.pop("vectors")
        if with_ensemble and self.weights is not None:
            out["weights"] = self.weights.tolist()
        return out


def _measure_kind(measure: str, k: int | None, d: int) -> tuple[int, int]:
    if measure == "G":
        return _KIND_G, d
    if measure == "C":
        if k is None or not 1 <= k <= d:
            raise ValueError(f"C_k needs 1 <= k <= {d}, got {k}")
        return (_KIND_G, d) if k == d else (_KIND_C, k)
    raise ValueError(f"unknown measure {measure!r}; use 'G' or 'C'")


def batch_measure(psi: np.ndarray, d: int, measure: str = "G", k: int | None = None) -> np.ndarray:
    """Pure-state measure of every row of ``psi`` (shape (..., d*d)), homogeneous of degree 2."""
    kind, k = _measure_kind(measure, k, d)
    a = psi.reshape(psi.shape[:-1] + (d, d))
    if kind == _KIND_G:
        return d * np.abs(np.linalg.det(a)) ** (2.0 / d)
    gram = a @ np.swapaxes(a.conj(), -1, -2)
    lam = np.clip(np.linalg.eigvalsh(gram), 0.0, None)
    ek = elementary_symmetric(lam, k)
    return d * (np.clip(ek, 0.0, None) / math.comb(d, k)) ** (1.0 / k)


@numba.njit(cache=True)
def _det(v, d):
    if d == 2:
        return v[0] * v[3] - v[1] * v[2]
    if d == 3:
        return (v[0] * (v[4] * v[8] - v[5] * v[7])
                - v[1] * (v[3] * v[8] - v[5] * v[6])
                + v[2] * (v[3] * v[7] - v[4] * v[6]))
    a = v.copy().reshape((d, d))
    det = 1.0 + 0.0j
    for col in range(d):
        piv = col
        for row in range(col + 1, d):
            if abs(a[row, col]) > abs(a[piv, col]):
                piv = row
        if a[piv, col] == 0:
            return 0.0 + 0.0j
        if piv != col:
            for j in range(d):
                tmp = a[col, j]
                a[col, j] = a[piv, j]
                a[piv, j] = tmp
            det = -det
        det *= a[col, col]
        for row in range(col + 1, d):
            fac = a[row, col] / a[col, col]
            for j in range(col, d):
                a[row, j] -= fac * a[col, j]
    return det


@numba.njit(cache=True)
def _value(v, d, kind, k, binom, subsets):
    if kind == 0:
        return d * abs(_det(v, d)) ** (2.0 / d)
    # Cauchy-Binet: e_k of the spectrum of A A^dagger is the sum of |k x k minors|^2
    a = v.reshape((d, d))
    sub = np.empty(k * k, dtype=np.complex128)
    ek = 0.0
    for r in range(subsets.shape[0]):
        for c in range(subsets.shape[0]):
            for i in range(k):
                for j in range(k):
                    sub[i * k + j] = a[subsets[r, i], subsets[c, j]]
            ek += abs(_det(sub, k)) ** 2
    return d * (ek / binom) ** (1.0 / k)


@numba.njit(cache=True)
def _row_values(psi, d, kind, k, binom, subsets):
    out = np.empty(psi.shape[0])
    for i in range(psi.shape[0]):
        out[i] = _value(psi[i], d, kind, k, binom, subsets)
    return out


@numba.njit(cache=True)
def _descend(psi, vals, status, perm, axis, unif, n, d, kind, k, binom, subsets,
             patience, shrink, tol):
    """Run up to ``n`` iterations in place; status = [step, rejections, last_gain, iterations]."""
    npair = perm.shape[1] // 2
    step, rej, last_gain = status[0], status[1], status[2]
    done = 0
    for it in range(n):
        if step < tol:
            break
        done += 1
        hit = False
        total = 0.0
        for p in range(npair):
            ia = perm[it, p]
            ib = perm[it, npair + p]
            th = step * (0.5 + 0.5 * unif[it, p])
            c, s = math.cos(th), math.sin(th)
            nx, ny, nz = axis[it, p, 0], axis[it, p, 1], axis[it, p, 2]
            r00 = c + 1j * s * nz
            r01 = 1j * s * (nx - 1j * ny)
            r10 = 1j * s * (nx + 1j * ny)
            r11 = c - 1j * s * nz
            qa = r00 * psi[ia] + r01 * psi[ib]
            qb = r10 * psi[ia] + r11 * psi[ib]
            fa = _value(qa, d, kind, k, binom, subsets)
            fb = _value(qb, d, kind, k, binom, subsets)
            gain = vals[ia] + vals[ib] - fa - fb
            if gain > 0.0:
                psi[ia] = qa
                psi[ib] = qb
                vals[ia] = fa
                vals[ib] = fb
                hit = True
                total += gain
        if hit:
            rej = 0.0
            last_gain = total
        else:
            rej += 1.0
            if rej >= patience:
                step *= shrink
                rej = 0.0
    status[0], status[1], status[2] = step, rej, last_gain
    status[3] += done


def _subsets(d: int, k: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(d), k)), dtype=np.int64).reshape(-1, k)


def default_ensemble_size(d: int, rank: int) -> int:
    return max(rank, min(d * d, 2 * rank))


def _run_restart(psi, gen, d, kind, k, binom, subsets, params):
    m = psi.shape[0]
    npair = m // 2
    vals = _row_values(psi, d, kind, k, binom, subsets)
    status = np.array([params.initial_step, 0.0, 0.0, 0.0])
    while status[0] >= params.tol and status[3] < params.max_iters:
        z = gen.standard_normal((_CHUNK, m + 3 * npair))
        u = gen.random((_CHUNK, npair))
        perm = np.argsort(z[:, :m], axis=1)
        axis = z[:, m:].reshape(_CHUNK, npair, 3)
        axis = axis / np.linalg.norm(axis, axis=2, keepdims=True)
        n = int(min(_CHUNK, params.max_iters - status[3]))
        _descend(psi, vals, status, perm, axis, u, n, d, kind, k, binom, subsets,
                 float(params.patience), params.shrink, params.tol)
    return float(vals.sum()), status


def roof_estimate(rho: DensityMatrix, measure: str = "G", k: int | None = None,
                  params: RoofParams | None = None, seed=0,
                  keep_ensemble: bool = False) -> RoofEstimate:
    """Upper bound on ``inf sum_i p_i E(phi_i)`` over decompositions of ``rho``.

    ``measure`` is ``"G"`` for G-concurrence or ``"C"`` with level count ``k``
    (``k = d`` is G-concurrence).  The returned value never exceeds the
    average over the eigen-decomposition.  Restart 0 starts from the
    eigen-decomposition itself, the others from Haar-random isometries.
    """
    params = params or RoofParams()
    d = rho.d
    if rho.f != d:
        raise DimensionError("roof estimation needs a d x d system")
    if not rho.normalized or abs(rho.trace - 1.0) > 1e-10:
        raise ValueError("roof estimation needs a normalized density matrix")
    kind, kk = _measure_kind(measure, k, d)
    label = "G" if kind == _KIND_G else f"C{kk}"
    binom = float(math.comb(d, kk))
    subsets = _subsets(d, kk)

    w, v = np.linalg.eigh(rho.matrix)
    keep = w > 1e-14 * w[-1]
    w, v = w[keep][::-1], v[:, keep][:, ::-1]
    r = len(w)
    W = np.ascontiguousarray(np.sqrt(w)[:, None] * v.T)
    m = params.ensemble_size or default_ensemble_size(d, r)
    if m < r:
        raise ValueError(f"ensemble_size {m} is below rank(rho) = {r}")
    start = float(_row_values(W, d, kind, kk, binom, subsets).sum())

    if r == 1 or params.restarts == 0:
        weights, vectors = _ensemble(W if keep_ensemble else None)
        return RoofEstimate(start, m, 0, 0, True, 0.0, start, -1, label, weights, vectors)

    best, best_val, best_status, best_psi = -1, start, None, W
    total_iters = 0
    for i, child in enumerate(split_seed(seed, params.restarts)):
        gen = np.random.default_rng(child)
        u = np.eye(m, r) if i == 0 else haar_isometry(m, r, gen)
        psi = np.ascontiguousarray(u @ W)
        val, status = _run_restart(psi, gen, d, kind, kk, binom, subsets, params)
        total_iters += int(status[3])
        if val < best_val:
            best, best_val, best_status, best_psi = i, val, status, psi

    weights, vectors = _ensemble(best_psi if keep_ensemble else None)
    return RoofEstimate(
        value=best_val,
        ensemble_size=m,
        restarts=params.restarts,
        iterations=total_iters,
        converged=best_status is not None and bool(best_status[0] < params.tol),
        residual=float(best_status[2]) if best_status is not None else 0.0,
        start_value=start,
        best_restart=best,
        measure=label,
        weights=weights,
        vectors=vectors,
    )


def _ensemble(psi):
    if psi is None:
        return None, None
    p = np.einsum("ij,ij->i", psi.conj(), psi).real
    nz = p > 0
    return p[nz], psi[nz] / np.sqrt(p[nz])[:, None]
