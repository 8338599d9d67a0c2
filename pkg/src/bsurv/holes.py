"""The times-k map with k-1 translated holes and its link to beta survivor sets.

For 0 < a < 1/k < b < a + 1/k the holes are (a + j/k, b + j/k), j = 0..k-2.
Writing a = (0 a_2 a_3 ...)_k and b = (1 b_2 b_3 ...)_k, the survivor set
is coded by sequences whose every shift lies in one of

    [0^inf, 0 a'],  [j b', j a'] (j = 1..k-2),  [(k-1) b', (k-1)^inf]

with a' = a_2 a_3 ... and b' = b_2 b_3 ....  Up to finite prefixes this is
the subshift Sigma(b', a') of sequences with b' <= sigma^n(z) <= a'.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .expansions import (
    DEFAULT_EPS,
    BetaEnclosure,
    ValueEnclosure,
    alpha_inverse,
    eval_pi,
    greedy_seq,
    is_alpha_sequence,
    parse_real,
    series_value,
)
from .sequences import PeriodicSeq, lex_cmp
from .survivor import (
    SubshiftAutomaton,
    _build,
    build_automaton,
    dim_survivor,
    entropy,
    word_counts,
)


class DegenerateWarning(UserWarning):
    """a_2 <= b_2: the survivor set is countable."""


def _digits_and_value(x, k: int):
    if isinstance(x, PeriodicSeq):
        if x.max_digit() > k - 1:
            raise DomainError(f"{x} has digits above {k - 1}")
        return x, series_value(Fraction(k), x)
    x = parse_real(x)
    if not 0 <= x < 1:
        raise DomainError("hole endpoints must lie in [0, 1)")
    return greedy_seq(x, BetaEnclosure.exact(k)), x


@dataclass(frozen=True)
class HoleSystem:
    """Holes (a + j/k, b + j/k) for the map x -> kx mod 1.

    ``a`` and ``b`` are exact rationals, or base-k digit streams given as
    PeriodicSeq (needed when the intended expansion is not the greedy one).
    """

    k: int
    a: object
    b: object

    def __post_init__(self):
        k = self.k
        if not isinstance(k, int) or k < 2:
            raise DomainError("k must be an integer at least 2")
        ad, a = _digits_and_value(self.a, k)
        bd, b = _digits_and_value(self.b, k)
        if not (0 < a < Fraction(1, k) < b < a + Fraction(1, k)):
            raise DomainError("need 0 < a < 1/k < b < a + 1/k")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a_digits", ad)
        object.__setattr__(self, "b_digits", bd)
        if self.degenerate:
            warnings.warn("a_2 <= b_2: the survivor set is countable", DegenerateWarning, stacklevel=2)

    @property
    def a_prime(self) -> PeriodicSeq:
        return self.a_digits.shift(1)

    @property
    def b_prime(self) -> PeriodicSeq:
        return self.b_digits.shift(1)

    @property
    def degenerate(self) -> bool:
        return self.a_digits[1] <= self.b_digits[1]

    def holes(self):
        k = self.k
        return [(self.a + Fraction(j, k), self.b + Fraction(j, k)) for j in range(k - 1)]


def omega_automaton(h: HoleSystem) -> SubshiftAutomaton:
    """Automaton for the coding of the survivor set of the times-k map."""
    k = h.k
    # digit x constrains the following suffix: >= b' unless x = 0, <= a' unless x = k-1
    return _build(h.b_prime, h.a_prime, k - 1, False, lambda x: (x >= 1, x <= k - 2))


def sigma_automaton(h: HoleSystem) -> SubshiftAutomaton:
    return build_automaton(h.b_prime, h.a_prime, h.k - 1)


def _extreme(aut: SubshiftAutomaton, pick) -> PeriodicSeq:
    # follow the min (or max) digit; the walk is determined by the state, so it cycles
    seen = {}
    out = []
    s = 0
    while s not in seen:
        seen[s] = len(out)
        x = pick(aut.trans[s])
        out.append(x)
        s = aut.trans[s][x]
    i = seen[s]
    return PeriodicSeq(tuple(out[:i]), tuple(out[i:]))


def normalize_bounds(b_prime, a_prime, D: int, check_len: int = 30):
    """``(min Sigma, max Sigma, same)`` for Sigma = Sigma(b', a') over digits 0..D.

    ``same`` reports whether Sigma(b'', a'') has the same word counts as
    Sigma(b', a') up to length ``check_len``.
    """
    aut = build_automaton(b_prime, a_prime, D)
    if aut.is_empty():
        raise DomainError("the subshift is empty")
    b2 = _extreme(aut, min)
    a2 = _extreme(aut, max)
    aut2 = build_automaton(b2, a2, D)
    same = word_counts(aut, check_len) == word_counts(aut2, check_len)
    return b2, a2, same


@dataclass
class BridgeResult:
    beta: Optional[BetaEnclosure]
    t: Optional[ValueEnclosure]
    t_expansion: Optional[PeriodicSeq]
    adjusted: bool
    a2: Optional[PeriodicSeq]
    b2: Optional[PeriodicSeq]
    h_omega: float
    h_sigma: float
    h_sigma2: float
    dim_omega: float
    dim_survivor: object
    agree: bool
    countable: bool = False

    def to_dict(self):
        ds = self.dim_survivor
        return {
            "beta": self.beta.pair() if self.beta else None,
            "t": self.t.pair() if self.t else None,
            "t_expansion": str(self.t_expansion) if self.t_expansion else None,
            "greedy_adjusted": self.adjusted,
            "a_pp": str(self.a2) if self.a2 else None,
            "b_pp": str(self.b2) if self.b2 else None,
            "entropy_omega": [self.h_omega, self.h_omega],
            "entropy_sigma": [self.h_sigma, self.h_sigma],
            "entropy_sigma_normalized": [self.h_sigma2, self.h_sigma2],
            "dim_omega": [self.dim_omega, self.dim_omega],
            "dim_sigma": [self.h_sigma / math.log(self._k), self.h_sigma / math.log(self._k)],
            "dim_survivor": [ds.dim_lo, ds.dim_hi] if ds else [0.0, 0.0],
            "agree": self.agree,
            "countable": self.countable,
        }


def bridge(h: HoleSystem, eps=DEFAULT_EPS, tol: float = 1e-6) -> BridgeResult:
    """The base beta and point t whose survivor set matches the hole system.

    ``a''`` becomes alpha(beta).  ``b''`` is used as b(t, beta) unless some
    shift of it equals ``a''``, in which case the greedy form ``b'''`` is
    used.  ``agree`` checks that the entropies of Omega and Sigma(b'', a'')
    match and that dim_survivor(beta, t) * log(beta) encloses them.
    """
    k = h.k
    h_omega = entropy(omega_automaton(h)).value
    if h.degenerate or sigma_automaton(h).is_empty():
        res = BridgeResult(None, None, None, False, None, None, h_omega, 0.0, 0.0,
                           h_omega / math.log(k), None, h_omega <= tol, countable=True)
        res._k = k
        return res
    h_sigma = entropy(sigma_automaton(h)).value
    b2, a2, _ = normalize_bounds(h.b_prime, h.a_prime, k - 1)
    h_sigma2 = entropy(build_automaton(b2, a2, k - 1)).value
    if not is_alpha_sequence(a2):
        raise DomainError(f"{a2} is not an expansion of 1")
    beta = alpha_inverse(a2, eps)
    tx = b2
    adjusted = False
    for n in range(1, b2.span + 1):
        if lex_cmp(b2, a2) != 0 and lex_cmp(b2.shift(n), a2) == 0:
            w = b2.prefix(n)
            tx = PeriodicSeq(w[:-1] + (w[-1] + 1,), (0,))
            adjusted = True
            break
    t = eval_pi(beta, tx, check_alphabet=False)
    ds = dim_survivor(beta, tx)
    log_lo, log_hi = beta.log_bounds()
    h_lo, h_hi = ds.dim_lo * log_lo, ds.dim_hi * log_hi
    agree = (abs(h_omega - h_sigma2) <= tol and abs(h_omega - h_sigma) <= tol
             and h_lo - tol <= h_omega <= h_hi + tol)
    # b'' = a'' leaves a single periodic orbit (and t = 1 sits outside [0, 1))
    single = lex_cmp(b2, a2) == 0
    res = BridgeResult(beta, t, tx, adjusted, a2, b2, h_omega, h_sigma, h_sigma2,
                       h_omega / math.log(k), ds, agree, countable=single)
    res._k = k
    return res
