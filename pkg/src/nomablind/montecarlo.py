"""Monte Carlo estimators and brute-force oracles: empirical error rates
for both receivers, grid search over the power split, and exhaustive
scheduling for small drops."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import analytical_error_pair
from .classifier import log_mixture_likelihood
from .constellation import DegenerateConstellationError, make_qam, superpose
from .optimizer import allocate
from .rates import PowerSplit, rate_oma
from .scheduler import SchedulingOutcome, _infeasible_outcome

# Trials are consumed in fixed-size blocks, each with its own child seed,
# so estimates do not depend on chunking or worker count.
BLOCK_TRIALS = 8192

# cap on the rows of the per-sample likelihood matrix held at once
_LIKELIHOOD_CHUNK = 2048

_EXHAUSTIVE_MAX_USERS = 12


@dataclass(frozen=True)
class TrialConfig:
    """Inputs of one empirical error-rate run."""

    trials: int
    seed: int
    mods: tuple
    split: PowerSplit
    link_k: object
    link_n: object
    L: int = 1


@dataclass(frozen=True)
class EstimateWithCI:
    mean: float
    std_error: float
    trials: int


def _block_rng(seed: int, purpose: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, purpose, block]))


def _llr_sic_vs_nonsic(y, h, noise_var, chi_points, chik_points):
    """Per-sample log-likelihood ratio of the composite mixture over the
    direct-decoding mixture, chunked to bound memory."""
    flat = y.ravel()
    out = np.empty(flat.shape, dtype=float)
    for a in range(0, len(flat), _LIKELIHOOD_CHUNK):
        part = flat[a:a + _LIKELIHOOD_CHUNK]
        out[a:a + _LIKELIHOOD_CHUNK] = (
            log_mixture_likelihood(part, h, noise_var, chi_points)
            - log_mixture_likelihood(part, h, noise_var, chik_points))
    return out.reshape(y.shape)


def _validate_trial_config(cfg: TrialConfig):
    if cfg.trials < 1:
        raise ValueError(f"trials must be positive, got {cfg.trials}")
    if cfg.L < 1 or cfg.L % 2 == 0:
        raise ValueError(f"sample count must be odd and positive, got {cfg.L}")
    if cfg.seed < 0:
        raise ValueError(f"seed must be non-negative, got {cfg.seed}")


def _spawn_noise(rng, shape, noise_var):
    z = rng.standard_normal(shape + (2,))
    return np.sqrt(noise_var / 2.0) * (z[..., 0] + 1j * z[..., 1])


def _estimate_pair(cfg: TrialConfig, decide_sic) -> tuple:
    """Shared trial loop: `decide_sic(y, link, chi, ck)` returns one bool
    per trial row."""
    _validate_trial_config(cfg)
    ck = make_qam(cfg.mods[0], cfg.split.gamma_k)
    cn = make_qam(cfg.mods[1], cfg.split.gamma_n)
    chi = superpose(ck, cn)
    err_n = 0
    err_k = 0
    for block, start in enumerate(range(0, cfg.trials, BLOCK_TRIALS)):
        n_b = min(BLOCK_TRIALS, cfg.trials - start)
        idx = _block_rng(cfg.seed, 0, block).integers(0, len(chi), size=(n_b, cfg.L))
        s = chi.points[idx]
        w_n = _spawn_noise(_block_rng(cfg.seed, 1, block), s.shape, cfg.link_n.noise_var)
        w_k = _spawn_noise(_block_rng(cfg.seed, 2, block), s.shape, cfg.link_k.noise_var)
        sic_n = decide_sic(cfg.link_n.h * s + w_n, cfg.link_n, chi, ck)
        sic_k = decide_sic(cfg.link_k.h * s + w_k, cfg.link_k, chi, ck)
        err_n += int(n_b - np.count_nonzero(sic_n))
        err_k += int(np.count_nonzero(sic_k))

    def estimate(errors: int) -> EstimateWithCI:
        p = errors / cfg.trials
        se = math.sqrt(p * (1.0 - p) / cfg.trials)
        return EstimateWithCI(mean=p, std_error=se, trials=cfg.trials)

    return estimate(err_n), estimate(err_k)


def estimate_error_pair(cfg: TrialConfig) -> tuple:
    """Empirical misclassification rates (SIC-user estimate, non-SIC-user
    estimate) for the same broadcast.

    Both links see the same transmitted symbol stream with independent
    noise; decisions use the per-sample majority vote.  Returns a pair of
    EstimateWithCI.
    """
    def decide(y, link, chi, ck):
        llr = _llr_sic_vs_nonsic(y, link.h, link.noise_var, chi.points, ck.points)
        return np.count_nonzero(llr > 0.0, axis=1) > cfg.L // 2

    return _estimate_pair(cfg, decide)


def estimate_error_pair_joint(cfg: TrialConfig) -> tuple:
    """Error rates under the vector rule that treats all L samples jointly.

    The joint mixture factorizes across samples, so the decision is the
    sign of the summed per-sample log-likelihood ratios.  Kept as a
    cross-check oracle and guarded to small L.
    """
    if cfg.L > 3:
        raise ValueError("the joint rule is an oracle for L <= 3 only")

    def decide(y, link, chi, ck):
        llr = _llr_sic_vs_nonsic(y, link.h, link.noise_var, chi.points, ck.points)
        return llr.sum(axis=1) > 0.0

    return _estimate_pair(cfg, decide)


def grid_optimal_gamma(link_k, link_n, mods, L, r_t, p_t, step: float = 1e-3):
    """Constrained grid argmax of the lower-bound gain over the interferer
    power fraction; the brute-force oracle for `allocate`.

    Returns the best grid fraction, or None when no grid point satisfies
    all constraints.  Ties prefer the larger fraction.
    """
    if not 0.0 < step <= 0.1:
        raise ValueError(f"step must be in (0, 0.1], got {step}")
    if p_t <= 0.0:
        return None  # the closed-form errors are strictly positive
    r_t_tilde = r_t / (1.0 - p_t) if p_t < 1.0 else 0.0
    steps = int(round(1.0 / step))
    gammas = np.arange(1, steps) * step
    snr_k = link_k.snr()
    snr_n = link_n.snr()
    r_k = np.log2(1.0 + snr_k * (1.0 - gammas) / (snr_k * gammas + 1.0))
    r_n = np.log2(1.0 + snr_n * gammas)
    delta = (r_k + r_n) * (1.0 - min(p_t, 1.0)) - rate_oma(snr_k) - rate_oma(snr_n)
    ok_rate = (r_k >= r_t_tilde) & (r_n >= r_t_tilde)
    for i in np.lexsort((-gammas, -delta)):
        if not ok_rate[i]:
            continue
        gamma = float(gammas[i])
        if p_t < 1.0:
            try:
                errs = analytical_error_pair(
                    link_k, link_n, PowerSplit.from_gamma_n(gamma), mods, L)
            except DegenerateConstellationError:
                continue
            if errs.p_nonsic_as_sic > p_t or errs.p_sic_as_nonsic > p_t:
                continue
        return gamma
    return None


def exhaustive_schedule(drop, mods, L, r_t, p_t, eps: float = 1e-4) -> SchedulingOutcome:
    """Best non-SIC user by direct enumeration with the strongest user in
    the SIC role; the oracle for small drops."""
    K = len(drop.links)
    if K < 2:
        raise ValueError(f"need at least 2 users, got {K}")
    if K > _EXHAUSTIVE_MAX_USERS:
        raise ValueError(
            f"exhaustive search is guarded to {_EXHAUSTIVE_MAX_USERS} users")
    best_k = None
    best = None
    for k in range(2, K + 1):
        result = allocate(drop.links[k - 1], drop.links[0], mods, L, r_t, p_t, eps)
        if result.feasible and (best is None
                                or result.lower_bound_gain > best.lower_bound_gain):
            best_k, best = k, result
    if best_k is None:
        return _infeasible_outcome(examined=K - 1)
    return SchedulingOutcome(sic_user=1, nonsic_user=best_k, split=best.split,
                             lower_bound_gain=best.lower_bound_gain,
                             feasible=True, iterations=K - 1, case_trace=())
