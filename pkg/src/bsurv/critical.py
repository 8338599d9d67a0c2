"""The critical value tau(beta), jump sizes, Komornik-Loreti constants and
grid sweeps of tau.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import DomainError, ParseError, PrecisionError
from .expansions import (
    DEFAULT_EPS,
    BetaEnclosure,
    ValueEnclosure,
    alpha_prefix,
    eval_pi,
    eval_prefix,
    parse_beta,
    parse_real,
    root_bracket_prefix,
)
from .intervals import DEFAULT_CAP, DEFAULT_DEPTH, Classification, classify, endpoints
from .sequences import PeriodicSeq, Word, as_word, format_word
from .substitution import phi_apply, phi_parse_prefix
from .words import largest_cyclic, theta, word_minus

DEFAULT_TOL = Fraction(1, 10 ** 12)


@dataclass
class TauResult:
    value: ValueEnclosure
    case: str
    S: Optional[Word]
    coding: List[Word]
    expansion: object = None
    conditional: bool = False
    bracket: Optional[ValueEnclosure] = None
    classification: Optional[Classification] = None

    def to_dict(self, beta=None) -> dict:
        exp = self.expansion
        if isinstance(exp, PeriodicSeq):
            exp = str(exp)
        elif exp is not None:
            exp = format_word(exp) + "..."
        return {
            "value_lo": self.value.pair()[0],
            "value_hi": self.value.pair()[1],
            "case": self.case,
            "S": format_word(self.S) if self.S is not None else None,
            "coding": [format_word(w) for w in self.coding],
            "conditional": self.conditional,
            "bracket": self.bracket.pair() if self.bracket is not None else None,
            "expansion": exp,
            "classification": self.classification.to_dict(beta) if self.classification else None,
        }


def basic_seq(S) -> PeriodicSeq:
    """``S- L(S)^inf``, the greedy expansion of tau on I^S."""
    S = as_word(S)
    return PeriodicSeq(word_minus(S), largest_cyclic(S))


def lemma_bracket(beta: BetaEnclosure, S) -> ValueEnclosure:
    """``[(S- L(S)^inf)_beta, (S 0^inf)_beta]``, valid for beta in J^S."""
    S = as_word(S)
    lo = eval_pi(beta, basic_seq(S), check_alphabet=False)
    hi = eval_pi(beta, PeriodicSeq.terminating(S), check_alphabet=False)
    return ValueEnclosure(lo.lo, hi.hi, "truncated")


def one_minus_inverse(beta: BetaEnclosure) -> ValueEnclosure:
    return ValueEnclosure(1 - 1 / beta.lo, 1 - 1 / beta.hi)


def _relative_exceptional_value(beta, S, tol):
    # value of Phi_S(0 a2 a3 ...) where a = alpha(Psi_S^-1(beta)), from a digit prefix
    S = as_word(S)
    D = beta.max_digit
    b = float(beta.lo)
    need = math.log(D / ((b - 1) * float(tol))) / math.log(b)
    n_src = max(4, math.ceil(need / len(S)) + 2)
    digits = alpha_prefix(beta, n_src * len(S))
    hat = phi_parse_prefix(S, digits)
    if len(hat) < 2:
        raise PrecisionError("alpha(beta) prefix too short")
    image = phi_apply(S, (0,) + tuple(hat[1:]))
    return eval_prefix(beta, image, D), image


def tau(beta, depth: int = DEFAULT_DEPTH, cap: int = DEFAULT_CAP, tol=DEFAULT_TOL) -> TauResult:
    """Certified enclosure of the critical value, dispatched on the classification."""
    beta = parse_beta(beta)
    tol = parse_real(tol)
    cl = classify(beta, depth, cap)
    S = cl.S
    res = None
    if cl.verdict == "BasicInterval":
        seq = basic_seq(S)
        value = eval_pi(beta, seq, check_alphabet=False)
        case = "BasicInterval"
        if cl.at_left_endpoint:
            case = "ELocus"
            value = value.intersect(one_minus_inverse(beta))
        res = TauResult(value, case, S, cl.coding, seq)
    elif cl.verdict == "RelativeExceptional":
        bracket = lemma_bracket(beta, S)
        if cl.at_right_endpoint:
            seq = PeriodicSeq.terminating(S)
            res = TauResult(eval_pi(beta, seq, check_alphabet=False), "RelativeExceptional",
                            S, cl.coding, seq, bracket=bracket)
        else:
            try:
                value, image = _relative_exceptional_value(beta, S, tol)
                value = value.intersect(bracket)
                res = TauResult(value, "RelativeExceptional", S, cl.coding, image,
                                conditional=True, bracket=bracket)
            except (ParseError, PrecisionError, DomainError):
                res = TauResult(bracket, "BracketOnly", S, cl.coding, None,
                                conditional=True, bracket=bracket)
    elif cl.verdict == "RenormalizableCandidate":
        bracket = lemma_bracket(beta, S)
        case = "RenormalizableLimit" if bracket.width <= tol else "BracketOnly"
        res = TauResult(bracket, case, S, cl.coding, None, conditional=not cl.exact, bracket=bracket)
    else:
        top = one_minus_inverse(beta)
        bracket = ValueEnclosure(Fraction(0), top.hi, "truncated")
        res = TauResult(top, "ELocus", None, [], None, conditional=True, bracket=bracket)
    res.classification = cl
    return res


def jump_at(S, eps=DEFAULT_EPS) -> Tuple[ValueEnclosure, ValueEnclosure, BetaEnclosure]:
    """``((S^inf)_beta_r, (S 0^inf)_beta_r, beta_r)``: right limit and value of tau at beta_r^S."""
    S = as_word(S)
    br = endpoints(S, eps).beta_r
    limit = eval_pi(br, PeriodicSeq.periodic(S), check_alphabet=False)
    value = eval_pi(br, PeriodicSeq.terminating(S), check_alphabet=False)
    if not limit.lo > value.hi:
        raise PrecisionError("jump not certified at this precision")
    return limit, value, br


# Komornik-Loreti constants -----------------------------------------------------

def thue_morse(n: int) -> List[int]:
    """``lambda_0 ... lambda_{n-1}``: parity of the binary digit sum."""
    return [bin(i).count("1") & 1 for i in range(n)]


def kl_alpha_prefix(m: int, n: int) -> Tuple[int, ...]:
    """First ``n`` digits of alpha(beta_m)."""
    if m < 1:
        raise DomainError("m must be positive")
    base = tuple(thue_morse(n + 1)[1:])
    if m % 2 == 0:
        base = phi_apply((1,), base)
    k = (m + 1) // 2
    return theta(base, k - 1)


def kl_head(m: int) -> Word:
    """First coding word: (k-1)k for m = 2k-1 and k for m = 2k."""
    k = (m + 1) // 2
    return (k - 1, k) if m % 2 else (k,)


def komornik_loreti(m: int, digits: int = 256, eps=None):
    """Enclosure of beta_m from a prefix of alpha(beta_m), with tau from
    ``m / (beta_m - 1) - 1``.

    Returns ``(beta_m, tau_m, s_1, alpha_prefix)``.
    """
    pre = kl_alpha_prefix(m, digits)
    if eps is None:
        # no point bisecting below the truncation error
        eps = Fraction(1, 2 ** max(64, int(digits * math.log2(max(pre[0], 1) + 0.5))))
    beta = root_bracket_prefix(pre, pre[0], eps)
    t = ValueEnclosure(Fraction(m) / (beta.hi - 1) - 1, Fraction(m) / (beta.lo - 1) - 1)
    return beta, t, kl_head(m), pre


# sweeps ---------------------------------------------------------------------

CASE_BRACKET = "BracketOnly"


def _row(args):
    beta, depth, cap, tol = args
    b = BetaEnclosure.exact(beta)
    try:
        r = tau(b, depth, cap, tol)
        case = r.case
        if r.conditional:
            case += "?"
        coding = ".".join(format_word(w) for w in r.coding)
        return (beta, r.value.lo, r.value.hi, case, coding, r.S)
    except Exception as exc:  # recorded per row, sweep continues
        return (beta, None, None, "Error:" + type(exc).__name__, "", None)


def staircase(beta_from, beta_to, step, depth: int = DEFAULT_DEPTH, cap: int = DEFAULT_CAP,
              tol=DEFAULT_TOL, jobs: int = 1):
    """tau on the grid from, from+step, ..., <= to.

    Rows are ``(beta, tau_lo, tau_hi, case, coding, S)`` with exact rationals.
    A trailing ``?`` on the case marks values that rest on an exhausted search.
    """
    a, b, h = parse_real(beta_from), parse_real(beta_to), parse_real(step)
    if not (1 < a < b) or h <= 0:
        raise DomainError("need 1 < from < to and step > 0")
    n = int((b - a) / h)
    grid = [a + i * h for i in range(n + 1)]
    tol = parse_real(tol)
    tasks = [(x, depth, cap, tol) for x in grid]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_row, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))
    else:
        rows = [_row(t) for t in tasks]
    return rows


def check_staircase(rows):
    """Monotone-decreasing and strict-convexity checks inside each basic interval.

    Consecutive rows with case BasicInterval and the same S form a run;
    differences are bounded with the enclosure endpoints.  Returns a dict
    with counts and the list of failing beta values.
    """
    failures = []
    runs = 0
    checked = 0
    i = 0
    while i < len(rows):
        j = i
        if rows[i][3] == "BasicInterval":
            while j + 1 < len(rows) and rows[j + 1][3] == "BasicInterval" and rows[j + 1][5] == rows[i][5]:
                j += 1
            runs += 1
            for k in range(i, j):
                checked += 1
                if not rows[k + 1][2] < rows[k][1]:
                    failures.append(("monotone", rows[k + 1][0]))
            for k in range(i + 1, j):
                lo2 = rows[k + 1][1] - 2 * rows[k][2] + rows[k - 1][1]
                if not lo2 > 0:
                    failures.append(("convex", rows[k][0]))
        i = j + 1
    resolved = sum(1 for r in rows if r[3] and not r[3].endswith("?")
                   and r[3] != CASE_BRACKET and not r[3].startswith("Error"))
    return {"runs": runs, "pairs": checked, "failures": failures,
            "resolved": resolved, "total": len(rows)}


def default_jobs() -> int:
    return max(1, min(8, os.cpu_count() or 1))
