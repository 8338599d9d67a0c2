"""Endpoints of basic and Farey intervals and the classification of bases.

For a word S the expansions

    alpha(beta_l)    = L(S)^inf
    alpha(beta_star) = L(S)+ S- L(S)^inf
    alpha(beta_r)    = L(S)+ S^inf

define three bases; I^S = [beta_l, beta_star] is the basic interval and
J^S = [beta_l, beta_r] the Farey (or Lyndon) interval.  A base is located
by walking the Farey mediant tree, first among the extended Farey words and
then, inside J^S \\ I^S, among the words S . r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional

from .errors import BoundaryFlag, DomainError
from .expansions import (
    DEFAULT_EPS,
    BetaEnclosure,
    alpha_inverse,
    compare_root,
    eval_pi,
    parse_beta,
)
from .sequences import PeriodicSeq, Word, as_word, format_word
from .substitution import bullet, lambda_decompose
from .words import is_lyndon_e, largest_cyclic, theta, word_minus, word_plus

DEFAULT_DEPTH = 8
DEFAULT_CAP = 40


def ell_seq(S) -> PeriodicSeq:
    return PeriodicSeq((), largest_cyclic(as_word(S)))


def star_seq(S) -> PeriodicSeq:
    S = as_word(S)
    L = largest_cyclic(S)
    return PeriodicSeq(word_plus(L) + word_minus(S), L)


def r_seq(S) -> PeriodicSeq:
    S = as_word(S)
    return PeriodicSeq(word_plus(largest_cyclic(S)), S)


@dataclass(frozen=True)
class IntervalTriple:
    S: Word
    beta_l: BetaEnclosure
    beta_star: BetaEnclosure
    beta_r: BetaEnclosure

    def basic(self):
        return (self.beta_l, self.beta_star)

    def farey(self):
        return (self.beta_l, self.beta_r)


@lru_cache(maxsize=16384)
def _endpoints(S: Word, eps: Fraction) -> IntervalTriple:
    return IntervalTriple(
        S,
        alpha_inverse(ell_seq(S), eps),
        alpha_inverse(star_seq(S), eps),
        alpha_inverse(r_seq(S), eps),
    )


def endpoints(S, eps=DEFAULT_EPS, validate: bool = True) -> IntervalTriple:
    """Certified enclosures of beta_l, beta_star and beta_r for S in Lambda_e."""
    S = as_word(S)
    if validate:
        lambda_decompose(S)
    return _endpoints(S, Fraction(eps))


@lru_cache(maxsize=16384)
def lyndon_interval(S, eps=DEFAULT_EPS):
    """``(beta_l, beta_r)`` for any Lyndon word S other than 0."""
    S = as_word(S)
    if not is_lyndon_e(S):
        raise DomainError(f"{format_word(S)} is not a Lyndon word")
    return alpha_inverse(ell_seq(S), eps), alpha_inverse(r_seq(S), eps)


# classification -------------------------------------------------------------

@dataclass
class Classification:
    """Where a base sits in the decomposition of (1, inf).

    ``verdict`` is one of BasicInterval, RelativeExceptional,
    ExceptionalCandidate, RenormalizableCandidate.  ``S`` is the product of
    the ``coding`` words.  ``exact`` is False for candidate verdicts that
    only reflect an exhausted search.
    """

    verdict: str
    S: Optional[Word] = None
    coding: List[Word] = field(default_factory=list)
    exact: bool = True
    at_left_endpoint: bool = False
    at_right_endpoint: bool = False
    boundary_flag: bool = False
    depth: int = DEFAULT_DEPTH
    cap: int = DEFAULT_CAP
    certificates: List[dict] = field(default_factory=list)

    def to_dict(self, beta: Optional[BetaEnclosure] = None) -> dict:
        certs = []
        for c in self.certificates:
            item = {"endpoint": c["endpoint"], "seq": str(c["seq"]), "relation": c["relation"]}
            if beta is not None:
                try:
                    item["value_at_beta"] = eval_pi(beta, c["seq"], check_alphabet=False).pair()
                except Exception:  # pragma: no cover - diagnostic only
                    item["value_at_beta"] = None
            certs.append(item)
        return {
            "verdict": self.verdict,
            "S": format_word(self.S) if self.S is not None else None,
            "coding": [format_word(w) for w in self.coding],
            "exact": self.exact,
            "at_left_endpoint": self.at_left_endpoint,
            "at_right_endpoint": self.at_right_endpoint,
            "boundary_flag": self.boundary_flag,
            "depth": self.depth,
            "cap": self.cap,
            "certificates": certs,
        }


_REL = {-1: "<", 0: "=", 1: ">"}


def _cmp(beta, seq, certs, name):
    c = compare_root(beta, seq)
    certs.append({"endpoint": name, "seq": seq, "relation": _REL[c]})
    return c


def _integer_part(beta: BetaEnclosure) -> int:
    """``k`` with beta in (k, k+1]."""
    if beta.defining is not None:
        return beta.defining[0]
    k_lo = math.ceil(beta.lo) - 1
    k_hi = math.ceil(beta.hi) - 1
    if k_lo != k_hi:
        raise BoundaryFlag("base enclosure contains an integer")
    return k_lo


def _walk(beta, word_of, cap, certs):
    # Stern-Brocot descent over binary Farey words; returns (word, c_l, c_r) or None
    left, right = (0,), (1,)
    while True:
        mid = left + right
        if len(mid) > cap:
            return None
        W = word_of(mid)
        cl = _cmp(beta, ell_seq(W), certs, f"beta_l[{format_word(W)}]")
        if cl < 0:
            right = mid
            continue
        cr = _cmp(beta, r_seq(W), certs, f"beta_r[{format_word(W)}]")
        if cr > 0:
            left = mid
            continue
        return mid, W, cl, cr


def locate_farey_interval(beta, cap: int = DEFAULT_CAP, certs=None):
    """The extended Farey word s with beta in J^s, or None if |s| would exceed cap.

    Returns ``(s, c_l, c_r)`` with the signs of beta - beta_l and beta - beta_r.
    """
    beta = parse_beta(beta)
    certs = [] if certs is None else certs
    k = _integer_part(beta)
    top = (k,)
    cl = _cmp(beta, ell_seq(top), certs, f"beta_l[{format_word(top)}]")
    if cl >= 0:
        cr = _cmp(beta, r_seq(top), certs, f"beta_r[{format_word(top)}]")
        return top, cl, cr
    if k >= 2:
        low = (k - 1,)
        cr = _cmp(beta, r_seq(low), certs, f"beta_r[{format_word(low)}]")
        if cr <= 0:
            return low, 1, cr
    found = _walk(beta, lambda w: theta(w, k - 1), cap, certs)
    if found is None:
        return None
    _, W, cl, cr = found
    return W, cl, cr


def classify(beta, depth: int = DEFAULT_DEPTH, cap: int = DEFAULT_CAP) -> Classification:
    """Classify beta by nested Farey intervals up to ``depth`` coding words.

    Component words are limited to length ``cap``.
    """
    beta = parse_beta(beta)
    certs: List[dict] = []
    out = Classification("ExceptionalCandidate", depth=depth, cap=cap, certificates=certs)
    try:
        got = locate_farey_interval(beta, cap, certs)
    except BoundaryFlag:
        out.exact = False
        out.boundary_flag = True
        return out
    if got is None:
        out.exact = False
        return out
    S, cl, cr = got
    coding = [S]
    out.S, out.coding = S, coding
    while True:
        try:
            cs = _cmp(beta, star_seq(S), certs, f"beta_star[{format_word(S)}]")
        except BoundaryFlag:
            out.verdict = "RenormalizableCandidate"
            out.exact = False
            out.boundary_flag = True
            return out
        if cs <= 0:
            out.verdict = "BasicInterval"
            out.at_left_endpoint = cl == 0
            out.at_right_endpoint = cs == 0
            return out
        if cr == 0:
            out.verdict = "RelativeExceptional"
            out.at_right_endpoint = True
            return out
        if len(coding) >= depth:
            out.verdict = "RenormalizableCandidate"
            out.exact = False
            return out
        try:
            found = _walk(beta, lambda r, S=S: bullet(S, r), cap, certs)
        except BoundaryFlag:
            out.verdict = "RenormalizableCandidate"
            out.exact = False
            out.boundary_flag = True
            return out
        if found is None:
            out.verdict = "RelativeExceptional"
            out.exact = False
            return out
        r, S, cl, cr = found
        coding.append(r)
        out.S = S


def check_kstar_bounds(k: int, eps=DEFAULT_EPS):
    """Check k+2-2/(k+2) < beta_star^(k) < k+2 and the cubic
    beta^3 - (k+2) beta^2 + 2 beta - 1 at the enclosure.

    Returns (lower_ok, upper_ok, residual, enclosure).
    """
    if k < 2:
        raise DomainError("k must be at least 2")
    b = endpoints((k,), eps).beta_star
    lower_ok = b.lo > Fraction(k + 2) - Fraction(2, k + 2)
    upper_ok = b.hi < k + 2
    f = lambda x: x ** 3 - (k + 2) * x ** 2 + 2 * x - 1
    flo, fhi = f(b.lo), f(b.hi)
    sign_change = (flo <= 0 <= fhi) or (fhi <= 0 <= flo)
    residual = float(max(abs(flo), abs(fhi))) if sign_change else math.inf
    return lower_ok, upper_ok, residual, b


def cubic_at(k: int, x) -> Fraction:
    x = Fraction(x)
    return x ** 3 - (k + 2) * x ** 2 + 2 * x - 1
