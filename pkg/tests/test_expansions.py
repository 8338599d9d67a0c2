import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bsurv.errors import DomainError, PrecisionError, Undecided
from bsurv.expansions import (
    BetaEnclosure,
    alpha,
    alpha_inverse,
    alpha_seq,
    eval_pi,
    eval_prefix,
    greedy_digits,
    greedy_seq,
    is_admissible,
    is_alpha_sequence,
    parse_beta,
    parse_real,
    phi_map,
    psi_inverse,
    psi_map,
    quasi_greedy_digits,
)
from bsurv.intervals import endpoints, ell_seq, r_seq
from bsurv.sequences import PeriodicSeq, lex_cmp

from oracles import GOLDEN, root_float

P = PeriodicSeq.parse


def close(b: BetaEnclosure, x: float, tol=1e-12):
    return float(b.lo) - tol <= x <= float(b.hi) + tol


def test_parse_real_exact():
    assert parse_real("2.2") == Fraction(11, 5)
    assert parse_real("11/5") == Fraction(11, 5)
    assert parse_real("1e-3") == Fraction(1, 1000)


def test_parse_beta_forms():
    assert parse_beta("2").defining == P(":1")
    b = parse_beta("seq::10")
    assert close(b, GOLDEN)
    with pytest.raises(DomainError):
        parse_beta("1")


def test_eval_pi_examples():
    assert eval_pi(2, P(":1")).lo == 1
    for k in range(1, 8):
        assert eval_pi(k + 1, PeriodicSeq((), (k,))).lo == 1
    g = alpha_inverse(P(":10"))
    v = eval_pi(g, P(":10"))
    assert v.lo <= 1 <= v.hi and v.width < 1e-15


def test_eval_prefix_tail_bound():
    b = BetaEnclosure.exact(Fraction(3, 2))
    x = Fraction(2, 7)
    digits = greedy_digits(x, b, 80)
    enc = eval_prefix(b, digits)
    assert enc.lo <= x <= enc.hi
    assert enc.tail == Fraction(1) / (Fraction(3, 2) ** 80 * Fraction(1, 2))


def test_greedy_examples():
    assert greedy_seq(Fraction(1, 2), 2) == P("1:0")
    for b in ["1.3", "2.5", "7/3", "3"]:
        beta = parse_beta(b)
        assert greedy_seq(1 / beta.lo, beta) == P("1:0")
    with pytest.raises(DomainError):
        greedy_digits(Fraction(1), 2, 3)


def test_greedy_undecided_on_wide_enclosure():
    beta = BetaEnclosure(Fraction(19, 10), Fraction(21, 10))
    with pytest.raises(Undecided) as e:
        greedy_digits(Fraction(1, 2), beta, 5)
    assert e.value.index == 0


def test_alpha_examples():
    assert alpha_seq(2) == P(":1")
    for k in range(1, 6):
        br = endpoints((k,)).beta_r
        assert br.defining == PeriodicSeq((k + 1,), (k,))
        bs = endpoints((k,)).beta_star
        if k >= 1:
            assert bs.defining == PeriodicSeq((k + 1, k - 1), (k,))


def test_alpha_inverse_closed_forms():
    assert close(alpha_inverse(P(":21")), 1 + math.sqrt(3))
    assert alpha_inverse(P(":1")).lo == 2
    for k in range(1, 8):
        b = alpha_inverse(PeriodicSeq((k + 1,), (1,)))
        assert close(b, (k + 2 + math.sqrt(k * k + 4)) / 2)
        assert b.width <= Fraction(1, 2 ** 64)


def test_alpha_inverse_rejects():
    for bad in [":01", "1:0", "1:2", ":0"]:
        with pytest.raises(DomainError):
            alpha_inverse(P(bad))


def _admissible_sequences(max_digit=2, max_pre=2, max_per=4):
    out = set()
    for a in range(max_pre + 1):
        for b in range(1, max_per + 1):
            for pre in itertools.product(range(max_digit + 1), repeat=a):
                for per in itertools.product(range(max_digit + 1), repeat=b):
                    s = PeriodicSeq(pre, per)
                    if is_alpha_sequence(s):
                        out.add(s)
    return sorted(out, key=lambda s: s.prefix(40))


def test_alpha_inverse_matches_float_oracle():
    for s in _admissible_sequences()[::3]:
        k = s[0]
        ref = root_float(s.pre, s.per, float(k), float(k + 1))
        assert close(alpha_inverse(s), ref, 1e-12)


def test_alpha_inverse_order_isomorphism():
    seqs = _admissible_sequences()
    assert len(seqs) >= 100
    bases = [alpha_inverse(s) for s in seqs]
    for (u, bu), (v, bv) in zip(zip(seqs, bases), zip(seqs[1:], bases[1:])):
        assert lex_cmp(u, v) < 0
        assert bu.hi < bv.lo


def test_alpha_round_trip_on_rational_bases():
    for b in ["1.5", "1.7", "2.2", "2.5", "3.1", "17/7"]:
        beta = parse_beta(b)
        a = alpha(beta, 60)
        enc = eval_prefix(beta, a)
        assert enc.lo <= 1 <= enc.hi
        # no shift exceeds alpha on the computed digits
        for n in range(1, 30):
            assert tuple(a[n:n + 30]) <= tuple(a[:30])


def test_admissibility_examples():
    assert is_admissible(P("1:0"), 2, strict=True)
    g = alpha_inverse(P(":10"))
    assert not is_admissible(P(":10"), g, strict=True)
    assert is_admissible(P(":10"), g, strict=False)
    assert is_admissible(P("01:0"), Fraction(17, 10), strict=True)


def test_phi_map():
    g = alpha_inverse(P(":10"))
    assert close(phi_map(g), 1 + math.sqrt(3))
    assert phi_map(2).lo == 3
    for k in range(1, 5):
        lo = (k + 2 + math.sqrt(k * k + 4)) / 2
        for frac in ["0.1", "0.5", "0.9"]:
            beta = Fraction(k) + parse_real(frac)
            img = phi_map(parse_beta(beta), truncate=True)
            assert lo < float(img.lo) and float(img.hi) <= k + 2


def test_phi_map_needs_consent():
    with pytest.raises(PrecisionError):
        phi_map(parse_beta("1.5"))


def test_psi_map_endpoints():
    S = (1,)
    assert lex_cmp(psi_map(S, endpoints((0, 1)).beta_l).defining, ell_seq((0, 2))) == 0
    assert lex_cmp(psi_map(S, endpoints((0, 1)).beta_r).defining, r_seq((0, 2))) == 0
    for S in [(1,), (0, 1), (1, 2)]:
        assert psi_map(S, 2).defining == r_seq(S)


def test_psi_round_trip():
    for S in [(1,), (0, 1), (0, 0, 1)]:
        for bh in ["1.5", "1.9", "1.3"]:
            beta_hat = parse_beta(bh)
            img = psi_map(S, beta_hat, digits=200)
            back = psi_inverse(S, img, digits=400)
            assert back.lo - Fraction(1, 10 ** 12) <= beta_hat.lo <= back.hi + Fraction(1, 10 ** 12)


def test_psi_inverse_outside_range():
    with pytest.raises(DomainError):
        psi_inverse((1,), parse_beta("2.2"))


bases = st.fractions(min_value=Fraction(11, 10), max_value=Fraction(9, 2), max_denominator=50)
points = st.fractions(min_value=0, max_value=Fraction(99, 100), max_denominator=200)


@settings(max_examples=1000, deadline=None)
@given(bases, points)
def test_greedy_digits_reproduce_value(b, x):
    beta = BetaEnclosure.exact(b)
    d = greedy_digits(x, beta, 50)
    enc = eval_prefix(beta, d)
    assert enc.lo <= x <= enc.hi
    assert max(d, default=0) <= beta.max_digit


@settings(max_examples=400, deadline=None)
@given(bases, st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=200))
def test_greedy_vs_quasi_greedy(b, x):
    beta = BetaEnclosure.exact(b)
    g = greedy_seq(x, beta, max_steps=60)  # terminating expansions hit 0 early
    q = quasi_greedy_digits(x, beta, 40)
    gd = greedy_digits(x, beta, 40)
    if g is not None and g.ends_in_zeros():
        head = list(g.pre[:-1]) + [g.pre[-1] - 1]
        expected = head + alpha(beta, 40)
        assert q == expected[:40]
    else:
        assert q == gd


@settings(max_examples=300, deadline=None)
@given(bases)
def test_alpha_shift_bound(b):
    beta = BetaEnclosure.exact(b)
    a = alpha(beta, 80)
    for n in range(1, 40):
        assert tuple(a[n:n + 40]) <= tuple(a[:40])
