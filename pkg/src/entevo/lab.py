"""Numerical experiments on entanglement evolution under one- and two-sided channels.

Three estimators are available for mixed-state entanglement:

``exact_pure``
    the output stays pure (single Kraus operator); pure-state formulas on the
    unnormalized coefficient matrix.
``wootters``
    d = 2 only; the closed-form two-qubit concurrence, which equals G_2.
``roof``
    the convex-roof optimizer of :mod:`entevo.roof`; yields upper bounds.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .linalg import DimensionError, split_seed
from .measures import (
    c_k_pure,
    concurrence_trajectory,
    drop_time,
    g_concurrence_pure,
    g_vanishing_time,
    isotropic_schmidt_number,
    rate_ratio,
    wootters_concurrence,
)
from .roof import RoofParams, roof_estimate
from .states import (
    DensityMatrix,
    KrausChannel,
    PureState,
    apply_one_sided,
    apply_two_sided,
    fidelity_at_time,
    isotropic_state,
    jamiolkowski_state,
    max_entangled,
    random_channel,
    random_pure_state,
)

METHODS = ("exact_pure", "wootters", "roof")
EXACT_TOL = 1e-9
ROOF_TOL = 5e-3


def tolerance_for(method: str) -> float:
    return ROOF_TOL if method == "roof" else EXACT_TOL


@dataclass(frozen=True)
class FactorizationReport:
    lhs: float
    rhs_initial: float
    rhs_channel: float
    abs_error: float
    method: str
    metadata: dict = field(default_factory=dict)

    @classmethod
    def build(cls, lhs, rhs_initial, rhs_channel, method, **metadata) -> FactorizationReport:
        err = abs(lhs - rhs_initial * rhs_channel)
        return cls(float(lhs), float(rhs_initial), float(rhs_channel), float(err), method, metadata)

    @property
    def rhs(self) -> float:
        return self.rhs_initial * self.rhs_channel

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BoundReport:
    """lhs <= rhs check; ``slack = rhs - lhs``."""

    lhs: float
    rhs: float
    slack: float
    method: str
    factors: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @classmethod
    def build(cls, lhs, rhs, method, factors, **metadata) -> BoundReport:
        return cls(float(lhs), float(rhs), float(rhs - lhs), method, factors, metadata)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    F: float
    concurrence: float
    schmidt_number: int
    g_positive: bool
    c_k: tuple | None = None


def _seed_tag(seed):
    return seed if isinstance(seed, (int, np.integer)) else repr(seed)


def resolve_method(method: str, d: int, ch: KrausChannel | None = None) -> str:
    if method == "auto":
        if ch is not None and len(ch.kraus) == 1:
            return "exact_pure"
        return "wootters" if d == 2 else "roof"
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS} or 'auto'")
    return method


def mixed_measure(rho: DensityMatrix, method: str, measure: str = "G", k: int | None = None,
                  params: RoofParams | None = None, seed=0) -> float:
    """Entanglement of ``rho`` with the chosen estimator."""
    if method == "wootters":
        if (rho.d, rho.f) != (2, 2):
            raise DimensionError("the wootters method needs d = 2")
        if measure == "C" and k != 2:
            raise ValueError("the wootters method only covers k = d = 2")
        return wootters_concurrence(rho)
    if method == "roof":
        return roof_estimate(rho, measure, k, params, seed).value
    raise ValueError(f"method {method!r} cannot evaluate a mixed state")


def _pure_measure(coeffs: np.ndarray, measure: str, k: int | None) -> float:
    state = PureState(coeffs)
    if measure == "G" or k == state.d:
        return g_concurrence_pure(state)
    return c_k_pure(state, k)


def _single_kraus(ch: KrausChannel, method: str) -> np.ndarray:
    if len(ch.kraus) != 1:
        raise ValueError("exact_pure needs a single-Kraus (unitary or filtering) channel; "
                         f"got {len(ch.kraus)} Kraus operators")
    return ch.kraus[0]


def _evolved_and_choi(chi, ch, method, measure, k, params, seed):
    """Entanglement of (1 x $)|chi><chi| and of (1 x $)|Phi><Phi|."""
    d = chi.d
    if chi.f != d:
        raise DimensionError("factorization experiments need d == f")
    if ch.dim != d:
        raise DimensionError(f"channel acts on {ch.dim}, state is {d}x{d}")
    if method == "exact_pure":
        kop = _single_kraus(ch, method)
        out = np.asarray(chi.coeffs) @ kop.T
        phi_out = kop.T / np.sqrt(d)
        return _pure_measure(out, measure, k), _pure_measure(phi_out, measure, k)
    s_lhs, s_ch = split_seed(seed, 2)
    lhs = mixed_measure(apply_one_sided(ch, chi, "second"), method, measure, k, params, s_lhs)
    rhs = mixed_measure(jamiolkowski_state(ch, d), method, measure, k, params, s_ch)
    return lhs, rhs


def verify_factorization(chi: PureState, ch: KrausChannel, method: str = "auto",
                         params: RoofParams | None = None, seed=0) -> FactorizationReport:
    """Compare G[(1 x $)|chi><chi|] with G(chi) * G[(1 x $)|Phi><Phi|]."""
    method = resolve_method(method, chi.d, ch)
    lhs, rhs_channel = _evolved_and_choi(chi, ch, method, "G", None, params, seed)
    return FactorizationReport.build(lhs, g_concurrence_pure(chi), rhs_channel, method,
                                     seed=_seed_tag(seed), d=chi.d, n_kraus=len(ch.kraus))


def verify_two_sided_bound(rho0, ch1: KrausChannel, ch2: KrausChannel, method: str = "auto",
                           params: RoofParams | None = None, seed=0) -> BoundReport:
    """G[($1 x $2) rho0] <= G(rho0) G[($1 x 1)Phi] G[(1 x $2)Phi]."""
    rho = rho0.projector() if isinstance(rho0, PureState) else rho0
    d = rho.d
    if rho.f != d:
        raise DimensionError("bound experiments need d == f")
    method = resolve_method(method, d)
    if method == "exact_pure":
        raise ValueError("the two-sided bound needs a mixed-state estimator (wootters or roof)")
    s0, s1, s2, s3 = split_seed(seed, 4)
    phi = max_entangled(d)
    lhs = mixed_measure(apply_two_sided(ch1, ch2, rho), method, params=params, seed=s0)
    g0 = mixed_measure(rho, method, params=params, seed=s1)
    g1 = mixed_measure(apply_one_sided(ch1, phi, "first"), method, params=params, seed=s2)
    g2 = mixed_measure(apply_one_sided(ch2, phi, "second"), method, params=params, seed=s3)
    return BoundReport.build(lhs, g0 * g1 * g2, method,
                             {"initial": g0, "first_channel": g1, "second_channel": g2},
                             seed=_seed_tag(seed), d=d)


def verify_ck_bound(chi: PureState, ch: KrausChannel, k: int, method: str = "auto",
                    params: RoofParams | None = None, seed=0) -> BoundReport:
    """C_k[(1 x $)|chi><chi|] <= C_k(chi) C_k[(1 x $)|Phi><Phi|] binom(d, k)^(1/k).

    Seeds are split exactly as in :func:`verify_factorization`, so ``k = d``
    reproduces its numbers.
    """
    d = chi.d
    if not 2 <= k <= d:
        raise ValueError(f"k must lie in [2, {d}], got {k}")
    method = resolve_method(method, d, ch)
    lhs, ck_channel = _evolved_and_choi(chi, ch, method, "C", k, params, seed)
    ck_initial = c_k_pure(chi, k)
    binom_factor = math.comb(d, k) ** (1.0 / k)
    return BoundReport.build(lhs, ck_initial * ck_channel * binom_factor, method,
                             {"initial": ck_initial, "channel": ck_channel,
                              "binomial": binom_factor},
                             seed=_seed_tag(seed), d=d, k=k)


def trajectory(d: int, gamma: float = 1.0, t_max: float = 1.0, steps: int = 101,
               with_ck_roofs: bool = False, params: RoofParams | None = None,
               seed=0) -> list[TrajectoryRecord]:
    """Depolarizing evolution of Phi on a uniform grid of ``steps`` points in [0, t_max]."""
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    t_g = g_vanishing_time(d, gamma)
    seeds = split_seed(seed, steps) if with_ck_roofs else [None] * steps
    out = []
    for t, s in zip(np.linspace(0.0, t_max, steps), seeds):
        t = float(t)
        F = fidelity_at_time(d, gamma, t)
        ck = None
        if with_ck_roofs:
            rho = isotropic_state(d, F)
            ck = tuple(roof_estimate(rho, "C", k, params, child).value
                       for k, child in zip(range(2, d + 1), split_seed(s, d - 1)))
        out.append(TrajectoryRecord(t, F, concurrence_trajectory(d, gamma, t),
                                    isotropic_schmidt_number(d, F), t < t_g, ck))
    return out


def analytic_markers(d: int, gamma: float = 1.0) -> dict:
    marks = {"d": d, "gamma": gamma}
    for k in range(2, d + 1):
        marks[f"t_{k}"] = drop_time(d, gamma, k)
    marks["ratio_eq9"] = rate_ratio(d, gamma)
    return marks


@dataclass(frozen=True)
class SweepConfig:
    d: int
    n_states: int
    n_channels: int = 1
    n_kraus: int = 2
    method: str = "auto"
    params: RoofParams = field(default_factory=RoofParams)
    seed: int = 0
    law: str = "factorization"
    k: int | None = None
    tolerance: float | None = None

    def validate(self) -> None:
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        if self.n_states < 0 or self.n_channels < 0:
            raise ValueError("case counts must be non-negative")
        if not 1 <= self.n_kraus <= self.d**2:
            raise ValueError(f"n_kraus must lie in [1, {self.d**2}], got {self.n_kraus}")
        if self.law not in ("factorization", "two-sided", "ck"):
            raise ValueError(f"unknown law {self.law!r}")
        if self.law == "ck" and (self.k is None or not 2 <= self.k <= self.d):
            raise ValueError(f"law 'ck' needs 2 <= k <= d, got k={self.k}")
        method = resolve_method(self.method, self.d)
        if method == "wootters" and self.d != 2:
            raise ValueError("the wootters method needs d = 2")


@dataclass(frozen=True)
class SweepSummary:
    law: str
    method: str
    n_cases: int
    failures: int
    tolerance: float
    max_abs_error: float | None
    mean_abs_error: float | None
    min_slack: float | None
    cases: list

    def to_dict(self) -> dict:
        return asdict(self)


def monte_carlo_sweep(config: SweepConfig) -> SweepSummary:
    """Evaluate a law over every (state, channel) pair of a seeded random grid."""
    config.validate()
    d = config.d
    method = resolve_method(config.method, d)
    if config.n_kraus == 1 and config.method == "auto" and config.law != "two-sided":
        method = "exact_pure"
    tol = config.tolerance if config.tolerance is not None else tolerance_for(method)
    s_states, s_channels, s_est = split_seed(config.seed, 3)
    states = [random_pure_state(d, seed=s) for s in split_seed(s_states, config.n_states)]
    n_ch = config.n_channels * (2 if config.law == "two-sided" else 1)
    channels = [random_channel(d, config.n_kraus, seed=s) for s in split_seed(s_channels, n_ch)]
    n_cases = config.n_states * config.n_channels
    est_seeds = split_seed(s_est, n_cases)

    cases = []
    channel_cache: dict[int, float] = {}
    for idx in range(n_cases):
        i, j = divmod(idx, config.n_channels)
        chi, seed = states[i], est_seeds[idx]
        tag = {"state": i, "channel": j}
        if config.law == "factorization":
            rep = _factorization_cached(chi, channels[j], j, method, config.params, seed,
                                        channel_cache, config.seed)
        elif config.law == "ck":
            rep = verify_ck_bound(chi, channels[j], config.k, method, config.params, seed)
        else:
            rep = verify_two_sided_bound(chi, channels[2 * j], channels[2 * j + 1],
                                         method, config.params, seed)
        cases.append({**tag, **rep.to_dict()})

    if config.law == "factorization":
        errs = [c["abs_error"] for c in cases]
        failures = sum(e > tol for e in errs)
        return SweepSummary(config.law, method, n_cases, failures, tol,
                            max(errs) if errs else None,
                            float(np.mean(errs)) if errs else None, None, cases)
    slacks = [c["slack"] for c in cases]
    failures = sum(s < -tol for s in slacks)
    return SweepSummary(config.law, method, n_cases, failures, tol, None, None,
                        min(slacks) if slacks else None, cases)


def _factorization_cached(chi, ch, j, method, params, seed, cache, root_seed):
    """verify_factorization with the channel-side estimate shared across states."""
    if method != "roof":
        return verify_factorization(chi, ch, method, params, seed)
    if j not in cache:
        child = split_seed(split_seed(root_seed, 4)[3], j + 1)[j]
        cache[j] = roof_estimate(jamiolkowski_state(ch), "G", None, params, child).value
    lhs = roof_estimate(apply_one_sided(ch, chi, "second"), "G", None, params, seed).value
    return FactorizationReport.build(lhs, g_concurrence_pure(chi), cache[j], method,
                                     seed=_seed_tag(seed), d=chi.d, n_kraus=len(ch.kraus))
