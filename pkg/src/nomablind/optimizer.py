"""Power allocation for one scheduled pair: a closed-form rate boundary,
a bisection search for the classification boundary, and the min rule that
combines them."""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .analysis import analytical_error_pair, combine_majority, p_err_nonsic_user
from .constellation import DegenerateConstellationError, make_qam, superpose
from .rates import PowerSplit, gain_lower_bound, rate_nonsic, rate_sic

# resolution of the bracketing scan that precedes bisection
_COARSE_STEPS = 32

# slack allowed when the chosen split is checked against the original
# constraints
RATE_SLACK = 1e-6
ERROR_SLACK = 1e-6


class Binding(enum.Enum):
    RATE_CONSTRAINT = "rate"
    CLASSIFIER_CONSTRAINT = "classifier"
    INFEASIBLE = "infeasible"


class RateBoundary(NamedTuple):
    gamma: float
    feasible: bool


class ClassifierBoundary(NamedTuple):
    gamma: float
    feasible: bool
    used_fallback: bool


@dataclass(frozen=True)
class AllocationResult:
    """Outcome of the constrained power search for one user pair."""

    split: PowerSplit | None
    gamma_r: float
    gamma_p: float
    binding: Binding
    lower_bound_gain: float

    @property
    def feasible(self) -> bool:
        return self.binding is not Binding.INFEASIBLE


def gamma_rate_boundary(snr_k, r_t_tilde: float) -> RateBoundary:
    """Largest interferer power fraction that keeps the direct-decoding
    user's rate at or above r_t_tilde.

    Closed form; returns feasible=False when even full power misses the
    target (the fraction is then reported as 0).
    """
    if snr_k <= 0:
        raise ValueError(f"snr_k must be positive, got {snr_k}")
    if r_t_tilde < 0:
        raise ValueError(f"r_t_tilde must be non-negative, got {r_t_tilde}")
    need = 2.0 ** r_t_tilde - 1.0
    if snr_k < need:
        return RateBoundary(0.0, False)
    gamma = (snr_k - need) / (2.0 ** r_t_tilde * snr_k)
    return RateBoundary(float(min(max(gamma, 0.0), 1.0)), True)


def _pk_analytical(link_k, mods, L, gamma_n):
    """Non-SIC classification error at one power split; inf marks a split
    that cannot be realized (treated as violating the constraint)."""
    if not 0.0 < gamma_n < 1.0:
        return math.inf
    try:
        ck = make_qam(mods[0], 1.0 - gamma_n)
        cn = make_qam(mods[1], gamma_n)
        chi = superpose(ck, cn)
    except DegenerateConstellationError:
        return math.inf
    p0 = p_err_nonsic_user(link_k.h, link_k.noise_var, chi, ck, cn)
    return combine_majority(p0, L)


def gamma_classifier_boundary(link_k, link_n, mods, L, p_t,
                              eps: float = 1e-4) -> ClassifierBoundary:
    """Largest interferer power fraction (within eps) below which the
    classification error stays at or below p_t.

    The error depends only on the non-SIC user's link; link_n is taken
    for the ordering sanity check.  A coarse scan brackets the first
    crossing, then bisection refines it.  The error can wiggle around
    p_t where it saturates; when the scan sees feasible points beyond the
    first crossing, the contiguous low-power boundary is still the value
    returned (used_fallback marks such results) so that every fraction up
    to the boundary remains safe.
    """
    if abs(link_n.h) ** 2 <= abs(link_k.h) ** 2:
        raise ValueError("the SIC user must have the stronger channel")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if p_t >= 1.0:
        return ClassifierBoundary(1.0, True, False)
    if p_t <= 0.0:
        # the closed-form error is strictly positive for any realizable split
        return ClassifierBoundary(0.0, False, False)

    gammas = np.arange(1, _COARSE_STEPS) / _COARSE_STEPS
    feas = np.array([_pk_analytical(link_k, mods, L, g) <= p_t for g in gammas])
    infeasible_at = np.flatnonzero(~feas)
    prefix_end = int(infeasible_at[0]) if len(infeasible_at) else len(gammas)
    beyond = bool(feas[prefix_end:].any())
    if beyond:
        warnings.warn("classification error is not monotone across the "
                      "power sweep; keeping the contiguous low-power "
                      "boundary", RuntimeWarning)

    if prefix_end == 0:
        lo, hi = 0.0, float(gammas[0])
    elif prefix_end == len(gammas):
        lo, hi = float(gammas[-1]), 1.0
    else:
        lo, hi = float(gammas[prefix_end - 1]), float(gammas[prefix_end])
    while hi - lo > eps:
        mid = 0.5 * (lo + hi)
        if _pk_analytical(link_k, mods, L, mid) <= p_t:
            lo = mid
        else:
            hi = mid
    if lo == 0.0:
        return ClassifierBoundary(0.0, False, beyond)
    return ClassifierBoundary(lo, True, beyond)


def _infeasible(gamma_r: float, gamma_p: float) -> AllocationResult:
    return AllocationResult(split=None, gamma_r=gamma_r, gamma_p=gamma_p,
                            binding=Binding.INFEASIBLE,
                            lower_bound_gain=-math.inf)


def allocate(link_k, link_n, mods, L, r_t, p_t, eps: float = 1e-4) -> AllocationResult:
    """Constrained power allocation for one scheduled pair.

    Takes the smaller of the rate and classification boundaries as the
    interferer power fraction, then re-checks both rate targets and both
    error probabilities at that split.  Any violation (beyond small
    numerical slack) yields an infeasible result rather than a weakened
    split.
    """
    if not 0.0 < p_t < 1.0:
        raise ValueError(f"p_t must be in (0, 1), got {p_t}")
    if r_t < 0:
        raise ValueError(f"r_t must be non-negative, got {r_t}")
    if L < 1 or L % 2 == 0:
        raise ValueError(f"sample count must be odd and positive, got {L}")
    if abs(link_n.h) ** 2 <= abs(link_k.h) ** 2:
        raise ValueError("the SIC user must have the stronger channel")

    r_t_tilde = r_t / (1.0 - p_t)
    rb = gamma_rate_boundary(link_k.snr(), r_t_tilde)
    if not rb.feasible or rb.gamma <= 0.0:
        # no split can meet the rate target, so the classifier search is moot
        return _infeasible(rb.gamma, math.nan)
    cb = gamma_classifier_boundary(link_k, link_n, mods, L, p_t, eps)
    if not cb.feasible or cb.gamma <= 0.0:
        return _infeasible(rb.gamma, cb.gamma)

    gamma = min(rb.gamma, cb.gamma)
    binding = (Binding.RATE_CONSTRAINT if rb.gamma <= cb.gamma
               else Binding.CLASSIFIER_CONSTRAINT)
    split = PowerSplit.from_gamma_n(gamma)
    try:
        errs = analytical_error_pair(link_k, link_n, split, mods, L)
    except DegenerateConstellationError:
        gamma -= 1e-9
        if gamma <= 0.0:
            return _infeasible(rb.gamma, cb.gamma)
        split = PowerSplit.from_gamma_n(gamma)
        try:
            errs = analytical_error_pair(link_k, link_n, split, mods, L)
        except DegenerateConstellationError:
            return _infeasible(rb.gamma, cb.gamma)

    r_k = float(rate_nonsic(link_k.snr(), split))
    r_n = float(rate_sic(link_n.snr(), split))
    if (r_k < r_t_tilde - RATE_SLACK or r_n < r_t_tilde - RATE_SLACK
            or errs.p_nonsic_as_sic > p_t + ERROR_SLACK
            or errs.p_sic_as_nonsic > p_t + ERROR_SLACK):
        return _infeasible(rb.gamma, cb.gamma)
    gain = float(gain_lower_bound(link_k.snr(), link_n.snr(), split, p_t))
    return AllocationResult(split=split, gamma_r=rb.gamma, gamma_p=cb.gamma,
                            binding=binding, lower_bound_gain=gain)
