"""User selection for the shared downlink: a case-directed walk over the
SNR-ordered user list, plus two fixed-rank baselines."""
from __future__ import annotations

from dataclasses import dataclass

from .optimizer import AllocationResult, Binding, allocate


@dataclass(frozen=True)
class SchedulingOutcome:
    """Selected pair, its power split, and a trace of the walk.

    The strongest user always takes the SIC role (position 1).  For an
    infeasible drop `nonsic_user` and `split` are None and the gain is 0.
    `iterations` counts the distinct feasible candidates examined;
    `case_trace` records one (case, accepted) pair per walk decision.
    """

    sic_user: int
    nonsic_user: int | None
    split: object
    lower_bound_gain: float
    feasible: bool
    iterations: int
    case_trace: tuple


def _growth_condition(gamma_n: float, p_t: float, snr_k: float) -> bool:
    # the total-gain lower bound is non-decreasing in the non-SIC user's
    # SNR up to this threshold
    threshold = (1.0 - 2.0 * gamma_n - 2.0 * p_t + 2.0 * gamma_n * p_t) / gamma_n
    return threshold >= snr_k


def classify_case(alloc: AllocationResult, snr_k: float, p_t: float) -> int:
    """Scheduling case of a feasible allocation.

    Cases 1 and 2 are rate-bound (a stronger candidate relaxes the
    boundary), 3 and 4 classifier-bound (a weaker candidate does).  The
    odd cases are the ones where the gain still grows with the candidate's
    SNR at the current split.
    """
    if not alloc.feasible:
        raise ValueError("cannot classify an infeasible allocation")
    cond = _growth_condition(alloc.split.gamma_n, p_t, snr_k)
    if alloc.binding is Binding.RATE_CONSTRAINT:
        return 1 if cond else 2
    return 3 if not cond else 4


def _infeasible_outcome(examined: int) -> SchedulingOutcome:
    return SchedulingOutcome(sic_user=1, nonsic_user=None, split=None,
                             lower_bound_gain=0.0, feasible=False,
                             iterations=examined, case_trace=())


def schedule_proposed(drop, mods, L, r_t, p_t, start_k: int | None = None,
                      eps: float = 1e-4, cache: dict | None = None) -> SchedulingOutcome:
    """Iterative pair selection: walk the SNR-ordered list from start_k.

    Rate-bound cases step toward stronger users, classifier-bound cases
    toward weaker ones; infeasible candidates are stepped over.  A move is
    accepted outright when the case analysis guarantees improvement (cases
    1 and 3 with a non-shrinking power fraction), otherwise exactly when
    the candidate's gain is strictly larger.  The walk stops at the list
    boundary, at the first rejection, or when it folds back onto an
    already examined candidate.
    """
    K = len(drop.links)
    if K < 2:
        raise ValueError(f"need at least 2 users, got {K}")
    if start_k is None:
        start_k = max(2, (K + 1) // 2)
    if not 2 <= start_k <= K:
        raise ValueError(f"start_k must be in [2, {K}], got {start_k}")
    if cache is None:
        cache = {}
    link_n = drop.links[0]

    def alloc_at(k: int) -> AllocationResult:
        if k not in cache:
            cache[k] = allocate(drop.links[k - 1], link_n, mods, L, r_t, p_t, eps)
        return cache[k]

    k_star = None
    for k in sorted(range(2, K + 1), key=lambda j: (abs(j - start_k), j)):
        if alloc_at(k).feasible:
            k_star = k
            break
    if k_star is None:
        return _infeasible_outcome(examined=K - 1)

    trace = []
    visited = {k_star}
    while True:
        current = alloc_at(k_star)
        case = classify_case(current, drop.links[k_star - 1].snr(), p_t)
        step = -1 if case in (1, 2) else 1
        k_prime = k_star + step
        while 2 <= k_prime <= K and not alloc_at(k_prime).feasible:
            k_prime += step
        if not 2 <= k_prime <= K:
            break
        candidate = alloc_at(k_prime)
        better = candidate.lower_bound_gain > current.lower_bound_gain
        if k_prime in visited:
            # the walk reversed onto ground already covered; take the better
            # of the two and stop
            trace.append((case, better))
            if better:
                k_star = k_prime
            break
        visited.add(k_prime)
        guaranteed = (case in (1, 3)
                      and candidate.split.gamma_n >= current.split.gamma_n)
        if guaranteed or better:
            trace.append((case, True))
            k_star = k_prime
            continue
        trace.append((case, False))
        break

    best = alloc_at(k_star)
    return SchedulingOutcome(sic_user=1, nonsic_user=k_star, split=best.split,
                             lower_bound_gain=best.lower_bound_gain,
                             feasible=True, iterations=len(visited),
                             case_trace=tuple(trace))


def _schedule_by_rank(drop, mods, L, r_t, p_t, eps, cache, candidates) -> SchedulingOutcome:
    if len(drop.links) < 2:
        raise ValueError(f"need at least 2 users, got {len(drop.links)}")
    if cache is None:
        cache = {}
    link_n = drop.links[0]
    examined = 0
    for k in candidates:
        examined += 1
        if k not in cache:
            cache[k] = allocate(drop.links[k - 1], link_n, mods, L, r_t, p_t, eps)
        result = cache[k]
        if result.feasible:
            return SchedulingOutcome(sic_user=1, nonsic_user=k,
                                     split=result.split,
                                     lower_bound_gain=result.lower_bound_gain,
                                     feasible=True, iterations=examined,
                                     case_trace=())
    return _infeasible_outcome(examined)


def schedule_strongest_strongest(drop, mods, L, r_t, p_t, eps: float = 1e-4,
                                 cache: dict | None = None) -> SchedulingOutcome:
    """Baseline: pair the strongest user with the strongest feasible
    non-SIC candidate."""
    return _schedule_by_rank(drop, mods, L, r_t, p_t, eps, cache,
                             range(2, len(drop.links) + 1))


def schedule_strongest_weakest(drop, mods, L, r_t, p_t, eps: float = 1e-4,
                               cache: dict | None = None) -> SchedulingOutcome:
    """Baseline: pair the strongest user with the weakest feasible
    non-SIC candidate."""
    return _schedule_by_rank(drop, mods, L, r_t, p_t, eps, cache,
                             range(len(drop.links), 1, -1))
