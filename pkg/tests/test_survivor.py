import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bsurv.critical import tau
from bsurv.errors import DomainError
from bsurv.expansions import root_bracket_prefix
from bsurv.sequences import PeriodicSeq
from bsurv.survivor import (
    bifurcation_member,
    build_automaton,
    dim_survivor,
    entropy,
    gamma_growth,
    isolated_construction,
    isolated_test,
    word_count,
    word_counts,
)
from bsurv.words import is_lyndon

from oracles import (
    GOLDEN,
    beta_orbit_member,
    random_bound_pairs,
    subshift_counts_stable,
)

P = PeriodicSeq.parse


@pytest.mark.parametrize("D", [1, 2, 3])
def test_full_shift(D):
    aut = build_automaton(PeriodicSeq((), (0,)), PeriodicSeq((), (D,)), D)
    assert word_counts(aut, 8) == [(D + 1) ** n for n in range(1, 9)]
    assert abs(entropy(aut).value - math.log(D + 1)) < 1e-12


def test_golden_mean_type():
    aut = build_automaton(P(":01"), P(":1"), 1)
    assert word_counts(aut, 5)[:3] == [2, 3, 5]


def test_gamma_01_two_words():
    aut = build_automaton(P(":01"), P(":10"), 1)
    assert word_counts(aut, 30) == [2] * 30


def test_word_count_big_integers():
    aut = build_automaton(PeriodicSeq((), (0,)), PeriodicSeq((), (1,)), 1)
    assert word_count(aut, 200) == 2 ** 200


def test_counts_match_brute_force():
    for a, b, D in random_bound_pairs(7, 6, max_count=600):
        ref = subshift_counts_stable(a, b, D, 12)
        got = word_counts(build_automaton(PeriodicSeq(*a), PeriodicSeq(*b), D), 12)
        assert got == ref


def test_bounds_validated():
    with pytest.raises(DomainError):
        build_automaton(P(":1"), P(":01"), 1)
    with pytest.raises(DomainError):
        build_automaton(P(":0"), P(":2"), 1)


def test_dim_examples():
    r = dim_survivor(2, 0)
    assert r.value == 1.0 and r.dim_lo <= 1 <= r.dim_hi
    r = dim_survivor(2, Fraction(1, 3))
    ref = math.log(GOLDEN) / math.log(2)
    assert abs(r.value - ref) < 1e-6 and r.dim_lo - 1e-9 <= ref <= r.dim_hi + 1e-9


def test_dim_zero_for_large_holes():
    # only 1^inf survives once the hole reaches 1/2 at beta = 2
    for t in [Fraction(1, 2), P("1:0"), P(":1")]:
        r = dim_survivor(2, t)
        assert r.dim_hi == 0.0 and r.entropy_hi == 0.0


def test_dim_monotone_in_t():
    for beta in ["2", "2.2", "1.7", "3"]:
        prev_hi = None
        for i in range(0, 30):
            r = dim_survivor(beta, Fraction(i, 40))
            if prev_hi is not None:
                assert r.dim_lo <= prev_hi + 1e-9
            prev_hi = r.dim_hi


@pytest.mark.parametrize("beta", ["2.2", "1.7"])
def test_threshold_at_tau(beta):
    t = tau(beta).value.mid
    d = Fraction(1, 1000)
    below = dim_survivor(beta, t - d)
    above = dim_survivor(beta, t + d)
    assert below.dim_lo > 0.1
    assert above.entropy_hi == 0.0


def test_gamma_growth():
    g = gamma_growth("01", 30)
    assert g.counts == [2] * 30 and g.verdict == "polynomial"
    g = gamma_growth("001", 20)
    assert g.verdict == "polynomial"
    g = gamma_growth("1", 10)
    assert g.counts == [1] * 10


def test_gamma_growth_matches_brute_force():
    for S in [(0, 0, 1), (0, 1, 1), (0, 0, 1, 0, 1)]:
        L = max(S[i:] + S[:i] for i in range(len(S)))
        ref = subshift_counts_stable(((), S), ((), L), 1, 12)
        assert gamma_growth(S, 12).counts == ref


def test_bifurcation_examples():
    v = bifurcation_member(2, Fraction(2, 5))
    assert not v.member and v.witness == 3
    assert bifurcation_member("2.3", 0).member
    v = bifurcation_member("2.3", P(":1"), horizon=10 ** 4)
    assert v.member


@settings(max_examples=200, deadline=None)
@given(st.integers(11, 40), st.integers(1, 99))
def test_bifurcation_matches_orbit_oracle(p10, t100):
    beta = Fraction(p10, 10)
    t = Fraction(t100, 100)
    got = bifurcation_member(beta, t, horizon=200)
    ok, wit = beta_orbit_member(p10, 10, t100, 100, 200)
    assert got.member == ok
    if not ok:
        assert got.witness == wit


@pytest.mark.parametrize("S,beta,expect", [("1", "2.3", True), ("1", "2.7", False), ("01", "1.7", True)])
def test_isolated_test(S, beta, expect):
    assert isolated_test(S, beta) == expect


def test_isolated_test_rejects_non_lyndon():
    with pytest.raises(DomainError):
        isolated_test("10", "2.3")


def _growing_zero_runs(m_max=12):
    pre = []
    for m in range(1, m_max + 1):
        pre += [1] + [0] * m
    return root_bracket_prefix(pre, 1, Fraction(1, 2 ** 400))


def test_isolated_construction():
    beta = _growing_zero_runs()
    pts = isolated_construction(beta, 3, digits=300)
    assert len(pts) >= 3
    ts = [float(p.t.mid) for p in pts]
    assert all(a > b for a, b in zip(ts, ts[1:]))
    for p in pts:
        assert is_lyndon(p.s) and p.in_interval and p.member


def test_isolated_construction_partial_when_runs_bounded():
    # alpha(2) = 1^inf has no zero runs
    assert isolated_construction(2, 3) == []
