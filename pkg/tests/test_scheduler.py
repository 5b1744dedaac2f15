import math

import pytest

from nomablind.channel import LinkState, UserDrop, drop_users
from nomablind.optimizer import AllocationResult, Binding, allocate
from nomablind.rates import PowerSplit
from nomablind.scheduler import (SchedulingOutcome, _growth_condition,
                                 classify_case, schedule_proposed,
                                 schedule_strongest_strongest,
                                 schedule_strongest_weakest)


def fake_alloc(binding, gamma_n=0.1, gain=0.5):
    return AllocationResult(split=PowerSplit.from_gamma_n(gamma_n),
                            gamma_r=gamma_n, gamma_p=gamma_n,
                            binding=binding, lower_bound_gain=gain)


class TestCaseClassification:
    # gamma_n=0.1, p_t=0.01 puts the growth threshold at 7.82, so an snr
    # of 5 sits below it and 10 above
    def test_growth_condition_threshold(self):
        assert _growth_condition(0.1, 0.01, 5.0)
        assert not _growth_condition(0.1, 0.01, 10.0)
        assert _growth_condition(0.1, 0.01, 7.82) == (7.82 <= 7.82)

    @pytest.mark.parametrize("binding, snr_k, expected", [
        (Binding.RATE_CONSTRAINT, 5.0, 1),
        (Binding.RATE_CONSTRAINT, 10.0, 2),
        (Binding.CLASSIFIER_CONSTRAINT, 10.0, 3),
        (Binding.CLASSIFIER_CONSTRAINT, 5.0, 4),
    ])
    def test_four_cases(self, binding, snr_k, expected):
        assert classify_case(fake_alloc(binding), snr_k, 0.01) == expected

    def test_rejects_infeasible(self):
        bad = AllocationResult(split=None, gamma_r=0.0, gamma_p=math.nan,
                               binding=Binding.INFEASIBLE,
                               lower_bound_gain=-math.inf)
        with pytest.raises(ValueError, match="infeasible"):
            classify_case(bad, 10.0, 0.01)


def two_user_drop(snr_k_db, snr_n_db):
    nv = 1.0
    ln = LinkState(h=math.sqrt(10.0 ** (snr_n_db / 10.0)), d=1.0, noise_var=nv)
    lk = LinkState(h=math.sqrt(10.0 ** (snr_k_db / 10.0)), d=2.0, noise_var=nv)
    return UserDrop(links=(ln, lk), seed=0)


class TestProposedScheduler:
    def test_two_users_feasible(self):
        drop = two_user_drop(8.0, 28.0)
        out = schedule_proposed(drop, (4, 16), 1, 0.8, 0.1)
        assert out.feasible
        assert out.sic_user == 1
        assert out.nonsic_user == 2
        assert out.iterations == 1
        assert out.split.gamma_n > 0

    def test_two_users_infeasible(self):
        drop = two_user_drop(-20.0, 28.0)
        out = schedule_proposed(drop, (4, 16), 1, 2.0, 0.01)
        assert not out.feasible
        assert out.nonsic_user is None
        assert out.split is None
        assert out.lower_bound_gain == 0.0

    def test_start_k_validation(self):
        drop = drop_users(5, 12.0, 1e-2, seed=7)
        with pytest.raises(ValueError, match="start_k"):
            schedule_proposed(drop, (4, 16), 1, 0.8, 0.05, start_k=1)
        with pytest.raises(ValueError, match="start_k"):
            schedule_proposed(drop, (4, 16), 1, 0.8, 0.05, start_k=6)

    def test_single_user_rejected(self):
        drop = UserDrop(links=(LinkState(1.0, 1.0, 0.01),), seed=0)
        with pytest.raises(ValueError, match="at least 2"):
            schedule_proposed(drop, (4, 16), 1, 0.8, 0.05)

    def test_case_trace_shape(self):
        drop = drop_users(6, 12.0, 10.0 ** (-2.5), seed=11)
        out = schedule_proposed(drop, (4, 4), 1, 0.8, 0.05)
        for case, accepted in out.case_trace:
            assert case in (1, 2, 3, 4)
            assert isinstance(accepted, bool)
        if out.feasible:
            assert out.iterations >= 1

    @pytest.mark.parametrize("count, seed, mods", [
        (3, 101, (4, 4)), (3, 102, (4, 4)), (3, 103, (4, 16)),
        (4, 104, (4, 4)), (4, 105, (4, 4)), (4, 106, (4, 16)),
        (5, 107, (4, 4)), (5, 108, (4, 4)), (5, 109, (4, 16)),
        (5, 110, (4, 4)), (4, 111, (4, 4)), (3, 112, (4, 4)),
    ])
    def test_never_beats_brute_force(self, count, seed, mods):
        drop = drop_users(count, 12.0, 10.0 ** (-2.5), seed=seed)
        cache = {}
        out = schedule_proposed(drop, mods, 1, 0.8, 0.05, cache=cache)
        best = -math.inf
        any_feasible = False
        for k in range(2, count + 1):
            if k not in cache:
                cache[k] = allocate(drop.links[k - 1], drop.links[0],
                                    mods, 1, 0.8, 0.05)
            if cache[k].feasible:
                any_feasible = True
                best = max(best, cache[k].lower_bound_gain)
        assert out.feasible == any_feasible
        if any_feasible:
            assert out.lower_bound_gain <= best + 1e-12

    def test_walk_skips_infeasible_candidates(self):
        # middle user far too weak to serve: the walk must hop over it
        nv = 1.0
        links = (LinkState(h=30.0, d=1.0, noise_var=nv),
                 LinkState(h=3.0, d=2.0, noise_var=nv),
                 LinkState(h=1e-4, d=8.0, noise_var=nv),
                 LinkState(h=2.0, d=9.0, noise_var=nv))
        drop = UserDrop(links=links, seed=0)
        out = schedule_proposed(drop, (4, 16), 1, 0.8, 0.1, start_k=3)
        assert out.feasible
        assert out.nonsic_user in (2, 4)


class TestBaselines:
    def test_rank_order_of_picks(self):
        drop = drop_users(6, 12.0, 10.0 ** (-2.5), seed=31)
        cache = {}
        ss = schedule_strongest_strongest(drop, (4, 4), 1, 0.8, 0.05,
                                          cache=cache)
        sw = schedule_strongest_weakest(drop, (4, 4), 1, 0.8, 0.05,
                                        cache=cache)
        feasible = [k for k in range(2, 7)
                    if allocate(drop.links[k - 1], drop.links[0], (4, 4), 1,
                                0.8, 0.05).feasible]
        if feasible:
            assert ss.feasible and ss.nonsic_user == min(feasible)
            assert sw.feasible and sw.nonsic_user == max(feasible)
        else:
            assert not ss.feasible and not sw.feasible

    def test_examined_counts(self):
        drop = two_user_drop(8.0, 28.0)
        ss = schedule_strongest_strongest(drop, (4, 16), 1, 0.8, 0.1)
        sw = schedule_strongest_weakest(drop, (4, 16), 1, 0.8, 0.1)
        assert ss.iterations == 1
        assert sw.iterations == 1
        assert ss.nonsic_user == sw.nonsic_user == 2

    def test_infeasible_drop(self):
        drop = two_user_drop(-20.0, 28.0)
        ss = schedule_strongest_strongest(drop, (4, 16), 1, 2.0, 0.01)
        assert not ss.feasible
        assert ss.iterations == 1
        assert ss.case_trace == ()


class TestCacheSharing:
    def test_shared_cache_changes_nothing(self):
        drop = drop_users(5, 12.0, 10.0 ** (-2.5), seed=53)
        shared = {}
        a1 = schedule_proposed(drop, (4, 4), 1, 0.8, 0.05, cache=shared)
        b1 = schedule_strongest_strongest(drop, (4, 4), 1, 0.8, 0.05,
                                          cache=shared)
        c1 = schedule_strongest_weakest(drop, (4, 4), 1, 0.8, 0.05,
                                        cache=shared)
        a2 = schedule_proposed(drop, (4, 4), 1, 0.8, 0.05)
        b2 = schedule_strongest_strongest(drop, (4, 4), 1, 0.8, 0.05)
        c2 = schedule_strongest_weakest(drop, (4, 4), 1, 0.8, 0.05)
        assert (a1.nonsic_user, a1.lower_bound_gain) == \
            (a2.nonsic_user, a2.lower_bound_gain)
        assert (b1.nonsic_user, b1.lower_bound_gain) == \
            (b2.nonsic_user, b2.lower_bound_gain)
        assert (c1.nonsic_user, c1.lower_bound_gain) == \
            (c2.nonsic_user, c2.lower_bound_gain)
        assert set(shared) <= set(range(2, 6))
