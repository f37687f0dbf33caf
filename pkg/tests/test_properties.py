"""Algebraic laws checked on generated inputs."""
import random

from hypothesis import HealthCheck, given, settings, strategies as st

from dagwitt.acceptance import random_drw_form, random_frobenius, random_mw_form, random_poly, random_witt
from dagwitt.comparison import WittLift, t_f_on_forms, witt_lift_apply
from dagwitt.dagger import DaggerSeries, mw_d
from dagwitt.drw.rewrite import drw_normalize, random_tree
from dagwitt.mpoly import MPoly, parse_poly
from dagwitt.witt import frobenius_via_ghost, ghost, growth_profile, lift, teichmuller, witt_F, witt_V

seeds = st.integers(min_value=0, max_value=2**32 - 1)
cfg = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@cfg
@given(seeds)
def test_witt_ring_laws(seed):
    rng = random.Random(seed)
    a, b, c = (random_witt(rng, 3, 3, 2, 3) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@cfg
@given(seeds)
def test_ghost_is_additive_and_multiplicative(seed):
    rng = random.Random(seed)
    a, b = random_witt(rng, 3, 2, 1, 3), random_witt(rng, 3, 2, 1, 3)
    ga, gb = ghost(lift(a, 2), 2), ghost(lift(b, 2), 2)
    # level n of the ghost map only depends on the components modulo p^(n+1)
    for n, (x, y, s_, m) in enumerate(zip(ga, gb, ghost(lift(a + b, 2), 2), ghost(lift(a * b, 2), 2))):
        assert (s_ - x - y).with_precision(n + 1).is_zero()
        assert (m - x * y).with_precision(n + 1).is_zero()


@cfg
@given(seeds)
def test_FV_is_p_and_F_teichmuller(seed):
    rng = random.Random(seed)
    a = random_witt(rng, 5, 3, 1, 3)
    pa = a + a + a + a + a
    assert witt_F(witt_V(a)) == pa.truncate(2)
    f = random_poly(rng, 1, 5, 1, 3)
    assert witt_F(teichmuller(f, 3)) == teichmuller(f ** 5, 2)
    assert witt_F(a) == frobenius_via_ghost(a)


@cfg
@given(seeds)
def test_drw_identities(seed):
    rng = random.Random(seed)
    p, N = 3, 3
    w = random_drw_form(rng, p, N, 2)
    assert w.d().d().is_zero()
    assert w.F().d() == w.d().F().scale(p)
    assert w.d().V() == w.V().d().scale(p)
    assert w.V().d().F() == w.d().restrict(N - 1)


@cfg
@given(seeds)
def test_t_f_ring_hom_and_chain_map(seed):
    rng = random.Random(seed)
    F = random_frobenius(rng, 3, 3, 1)
    L = WittLift(F)
    a = DaggerSeries(random_poly(rng, 1, 3, 3, 4))
    b = DaggerSeries(random_poly(rng, 1, 3, 3, 4))
    assert witt_lift_apply(L, a * b) == witt_lift_apply(L, a) * witt_lift_apply(L, b)
    w = random_mw_form(rng, 3, 3, 1, 0)
    assert t_f_on_forms(L, mw_d(w)) == t_f_on_forms(L, w).d()


@cfg
@given(seeds, st.integers(min_value=4, max_value=14))
def test_rewrite_confluence(seed, size):
    rng = random.Random(seed)
    t = random_tree(rng, 2, size)
    assert drw_normalize(t, 3, 3, 2, "eager") == drw_normalize(t, 3, 3, 2, "rewrite")


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(-20, 20)), max_size=6))
def test_poly_text_round_trip(pairs):
    f = MPoly({(e,): c for e, c in pairs}, 1) if len({e for e, _ in pairs}) == len(pairs) else MPoly({}, 1)
    assert parse_poly(f.to_text(), 1) == f


@cfg
@given(seeds)
def test_growth_slope_of_products(seed):
    rng = random.Random(seed)
    a, b = random_witt(rng, 3, 3, 1, 4), random_witt(rng, 3, 3, 1, 4)
    ca, cb = growth_profile(a).slope, growth_profile(b).slope
    assert growth_profile(a * b).slope <= 3 * (ca + cb)
