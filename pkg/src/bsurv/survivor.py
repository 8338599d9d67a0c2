"""Symbolic survivor sets, their word counts and entropy, and tests on the
bifurcation set.

The survivor subshift for a hole [0, t) in base beta is the set of digit
sequences z with b(t, beta) <= sigma^n(z) <= alpha(beta) for all n.  For
eventually periodic bounds it is recognised by a finite automaton whose
states record which suffixes of the word read so far still agree with a
prefix of a bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DomainError, Undecided
from .expansions import (
    BetaEnclosure,
    ValueEnclosure,
    alpha_prefix,
    alpha_seq,
    compare_root,
    eval_pi,
    greedy_digits,
    greedy_seq,
    parse_beta,
    parse_real,
)
from .intervals import ell_seq, r_seq
from .sequences import PeriodicSeq, Word, as_seq, as_word, format_word, lex_cmp
from .words import is_lyndon, is_lyndon_e, largest_cyclic, smallest_cyclic, word_minus


@dataclass
class SubshiftAutomaton:
    """Deterministic, trim automaton; every state is accepting.

    ``trans[i]`` maps a digit to the next state index; state 0 is the start.
    """

    D: int
    trans: List[Dict[int, int]]
    keys: list = field(default_factory=list, repr=False)

    @property
    def n_states(self) -> int:
        return len(self.trans)

    def matrix(self) -> np.ndarray:
        n = self.n_states
        A = np.zeros((n, n))
        for i, row in enumerate(self.trans):
            for j in row.values():
                A[i, j] += 1
        return A

    def accepts(self, word) -> bool:
        s = 0
        for x in word:
            nxt = self.trans[s].get(x) if s is not None else None
            if nxt is None:
                return False
            s = nxt
        return True

    def is_empty(self) -> bool:
        return self.n_states == 0


def _fold(seq: PeriodicSeq):
    m, span = len(seq.pre), seq.span
    return lambda i: i + 1 if i + 1 < span else m


def _build(lower: Optional[PeriodicSeq], upper: Optional[PeriodicSeq], D: int,
           start_now: bool, after: Callable[[int], Tuple[bool, bool]]):
    lo_next = _fold(lower) if lower is not None else None
    up_next = _fold(upper) if upper is not None else None

    def step(state, x):
        L, U = state
        if start_now:
            L = L | {0} if lower is not None else L
            U = U | {0} if upper is not None else U
        nL, nU = set(), set()
        for i in L:
            c = lower[i]
            if x < c:
                return None
            if x == c:
                nL.add(lo_next(i))
        for i in U:
            c = upper[i]
            if x > c:
                return None
            if x == c:
                nU.add(up_next(i))
        add_lo, add_up = after(x)
        if add_lo and lower is not None:
            nL.add(0)
        if add_up and upper is not None:
            nU.add(0)
        return (frozenset(nL), frozenset(nU))

    start = (frozenset(), frozenset())
    index = {start: 0}
    keys = [start]
    trans: List[Dict[int, int]] = [{}]
    todo = [start]
    while todo:
        st = todo.pop()
        i = index[st]
        for x in range(D + 1):
            nx = step(st, x)
            if nx is None:
                continue
            if nx not in index:
                index[nx] = len(keys)
                keys.append(nx)
                trans.append({})
                todo.append(nx)
            trans[i][x] = index[nx]
    return _trim(D, trans, keys)


def _trim(D, trans, keys) -> SubshiftAutomaton:
    # drop states without an infinite continuation, then unreachable ones
    alive = set(range(len(trans)))
    changed = True
    while changed:
        changed = False
        for i in list(alive):
            if not any(j in alive for j in trans[i].values()):
                alive.discard(i)
                changed = True
    if 0 not in alive:
        return SubshiftAutomaton(D, [], [])
    order = [0]
    seen = {0}
    k = 0
    while k < len(order):
        for j in trans[order[k]].values():
            if j in alive and j not in seen:
                seen.add(j)
                order.append(j)
        k += 1
    new = {old: n for n, old in enumerate(order)}
    out = [{x: new[j] for x, j in sorted(trans[old].items()) if j in new} for old in order]
    return SubshiftAutomaton(D, out, [keys[o] for o in order])


def build_automaton(c, d, D: int, allow_equal: bool = True) -> SubshiftAutomaton:
    """Automaton for ``{z : c <= sigma^n(z) <= d for all n}`` over digits 0..D."""
    c, d = as_seq(c), as_seq(d)
    if max(c.max_digit(), d.max_digit()) > D:
        raise DomainError("bound digits exceed the alphabet")
    cmp = lex_cmp(c, d)
    if cmp > 0 or (cmp == 0 and not allow_equal):
        raise DomainError(f"lower bound {c} is not below upper bound {d}")
    return _build(c, d, D, True, lambda x: (False, False))


def word_count(aut: SubshiftAutomaton, n: int) -> int:
    """Number of admissible words of length n (exact integer)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if aut.is_empty():
        return 0
    vec = {0: 1}
    for _ in range(n):
        nxt: Dict[int, int] = {}
        for s, cnt in vec.items():
            for j in aut.trans[s].values():
                nxt[j] = nxt.get(j, 0) + cnt
        vec = nxt
    return sum(vec.values())


def word_counts(aut: SubshiftAutomaton, n_max: int) -> List[int]:
    out = []
    if aut.is_empty():
        return [0] * n_max
    vec = {0: 1}
    for _ in range(n_max):
        nxt: Dict[int, int] = {}
        for s, cnt in vec.items():
            for j in aut.trans[s].values():
                nxt[j] = nxt.get(j, 0) + cnt
        vec = nxt
        out.append(sum(vec.values()))
    return out


@dataclass
class EntropyEstimate:
    value: float
    method: str
    radius: float
    residual: float
    n_range: Optional[Tuple[int, int]] = None


def _perron(A: np.ndarray, tol=1e-12, max_iter=100000):
    # spectral radius of an irreducible nonnegative matrix
    n = A.shape[0]
    if n == 1:
        return float(A[0, 0]), 0.0
    ev = np.linalg.eigvals(A)
    rho = float(max(abs(ev)))
    # confirm with a few power steps on A + I, which is primitive
    B = A + np.eye(n)
    v = np.ones(n)
    lam = 0.0
    for _ in range(max_iter):
        w = B @ v
        new = float(w.max())
        w /= new
        if abs(new - lam) < tol * max(1.0, new) and np.allclose(w, v, atol=tol):
            lam = new
            break
        v, lam = w, new
    residual = abs((lam - 1.0) - rho)
    return rho, residual


def entropy(aut: SubshiftAutomaton) -> EntropyEstimate:
    """``log`` of the spectral radius, taken as the max over strongly connected parts."""
    if aut.is_empty():
        return EntropyEstimate(0.0, "empty", 0.0, 0.0)
    A = aut.matrix()
    n_comp, labels = connected_components(csr_matrix(A), directed=True, connection="strong")
    rho, res = 0.0, 0.0
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        sub = A[np.ix_(idx, idx)]
        if sub.sum() == 0:
            continue
        if np.all(sub.sum(axis=1) == 1):
            r, e = 1.0, 0.0  # a single cycle
        else:
            r, e = _perron(sub)
        if r > rho:
            rho, res = r, e
    h = math.log(rho) if rho > 1 else 0.0
    return EntropyEstimate(max(h, 0.0), "exact-spectral", rho, res)


@dataclass
class DimResult:
    dim_lo: float
    dim_hi: float
    entropy_lo: float
    entropy_hi: float
    method: str
    lower: object = None
    upper: object = None
    value: Optional[float] = None

    def to_dict(self):
        return {"entropy": [self.entropy_lo, self.entropy_hi], "dim": [self.dim_lo, self.dim_hi],
                "value": self.value,
                "method": self.method,
                "lower_bound_seq": str(self.lower) if self.lower is not None else None,
                "upper_bound_seq": str(self.upper) if self.upper is not None else None}


def _dim_from(h_lo, h_hi, beta: BetaEnclosure, slack=1e-12):
    log_lo, log_hi = beta.log_bounds()
    return max(0.0, (h_lo - slack) / log_hi), (h_hi + slack) / log_lo


def greedy_expansion(t, beta) -> Optional[PeriodicSeq]:
    if isinstance(t, PeriodicSeq):
        return t
    return greedy_seq(t, beta)


def dim_survivor(beta, t, n_max: int = 40) -> DimResult:
    """Hausdorff dimension of the survivor set, ``h_top / log beta``.

    ``t`` is a rational in [0, 1) or its greedy expansion as a PeriodicSeq.
    Exact spectral entropy is used when b(t, beta) and alpha(beta) are both
    eventually periodic.  Otherwise both sequences are cut after ``n_max``
    digits and padded with 0s or maximal digits, which sandwiches the
    subshift between two computable ones.
    """
    beta = parse_beta(beta)
    D = beta.max_digit
    c = greedy_expansion(t, beta)
    d = alpha_seq(beta, max_steps=512)
    if c is not None and d is not None:
        if lex_cmp(c, d) > 0:
            return DimResult(0.0, 0.0, 0.0, 0.0, "empty", c, d)
        h = entropy(build_automaton(c, d, D))
        slack = 1e-12 + h.residual
        lo, hi = _dim_from(h.value, h.value, beta, slack)
        if h.value == 0.0:
            lo, hi = 0.0, 0.0
        value = h.value / math.log(float(beta.mid))
        return DimResult(lo, hi, h.value, h.value, "exact-spectral", c, d, value)
    cd = list(c.prefix(n_max)) if c is not None else greedy_digits(parse_real(t), beta, n_max)
    dd = list(d.prefix(n_max)) if d is not None else alpha_prefix(beta, n_max)
    m = min(len(cd), len(dd))
    cd, dd = tuple(cd[:m]), tuple(dd[:m])
    c_lo, c_hi = PeriodicSeq(cd, (0,)), PeriodicSeq(cd, (D,))
    d_lo, d_hi = PeriodicSeq(dd, (0,)), PeriodicSeq(dd, (D,))
    h_hi = entropy(build_automaton(c_lo, d_hi, D)).value
    if lex_cmp(c_hi, d_lo) <= 0:
        h_lo = entropy(build_automaton(c_hi, d_lo, D)).value
    else:
        h_lo = 0.0
    lo, hi = _dim_from(h_lo, h_hi, beta)
    return DimResult(lo, hi, h_lo, h_hi, f"truncated-sandwich(n={m})", cd, dd)


@dataclass
class GrowthTable:
    S: Word
    counts: List[int]
    radius: float
    slope: float
    verdict: str


def gamma_growth(S, n_max: int = 30) -> GrowthTable:
    """Word counts of ``{z : S^inf <= sigma^n(z) <= L(S)^inf}``.

    ``polynomial`` is reported when the spectral radius is 1 (up to 1e-9);
    ``slope`` is the least-squares exponent of log N_n against log n.
    """
    S = as_word(S)
    if not is_lyndon_e(S):
        raise DomainError("S must be Lyndon")
    lower = PeriodicSeq.periodic(S)
    upper = PeriodicSeq.periodic(largest_cyclic(S))
    aut = build_automaton(lower, upper, max(S))
    counts = word_counts(aut, n_max)
    rho = entropy(aut).radius
    half = max(1, n_max // 2)
    xs = np.log(np.arange(half, n_max + 1))
    ys = np.log(np.array(counts[half - 1:], dtype=float))
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(xs) > 1 else 0.0
    verdict = "polynomial" if rho <= 1 + 1e-9 else "exponential-warning"
    return GrowthTable(S, counts, rho, slope, verdict)


# bifurcation set ---------------------------------------------------------------

@dataclass
class BifurcationVerdict:
    member: bool
    witness: Optional[int]
    horizon: int
    periodic: bool = False
    method: str = "orbit"

    def to_dict(self):
        return {"member": self.member, "witness": self.witness, "horizon": self.horizon,
                "periodic": self.periodic, "method": self.method}


def bifurcation_member(beta, t, horizon: int = 10 ** 4) -> BifurcationVerdict:
    """Test ``T_beta^n(t) >= t`` for ``0 <= n <= horizon``.

    Rational base and point: exact orbit, with Brent cycle detection (a
    repeated orbit point settles all later n).  ``t`` given as its greedy
    expansion: ``sigma^n(b) >= b`` is checked symbolically, which is
    equivalent because greedy expansions preserve order.  Otherwise the
    orbit is followed in interval arithmetic and Undecided is raised when a
    digit or comparison cannot be settled.
    """
    beta = parse_beta(beta)
    if isinstance(t, PeriodicSeq):
        for n in range(1, t.span):
            if lex_cmp(t.shift(n), t) < 0:
                return BifurcationVerdict(False, n, horizon, True, "symbolic")
        return BifurcationVerdict(True, None, horizon, True, "symbolic")
    if isinstance(t, ValueEnclosure) and t.lo == t.hi:
        t = t.lo
    if not isinstance(t, ValueEnclosure):
        t = parse_real(t)
        if not (0 <= t < 1):
            raise DomainError("t must lie in [0, 1)")
        if beta.is_point:
            b = beta.lo
            x = t
            saved, power, lam = x, 1, 0
            for n in range(1, horizon + 1):
                y = b * x
                x = y - math.floor(y)
                if x < t:
                    return BifurcationVerdict(False, n, horizon)
                lam += 1
                if x == saved:
                    return BifurcationVerdict(True, None, horizon, True)
                if lam == power:
                    saved, power, lam = x, power * 2, 0
            return BifurcationVerdict(True, None, horizon)
        t = ValueEnclosure(t, t)
    lo, hi = t.lo, t.hi
    tl, th = t.lo, t.hi
    for n in range(1, horizon + 1):
        ylo, yhi = beta.lo * lo, beta.hi * hi
        d = math.floor(ylo)
        if math.floor(yhi) != d:
            raise Undecided(f"orbit digit {n} undecided", index=n)
        lo, hi = ylo - d, yhi - d
        if hi < tl:
            return BifurcationVerdict(False, n, horizon, method="interval")
        if lo < th:
            raise Undecided(f"comparison at step {n} undecided", index=n)
    return BifurcationVerdict(True, None, horizon, method="interval")


def isolated_test(S, beta) -> bool:
    """Whether ``(S^inf)_beta`` is isolated in the bifurcation set: beta in (beta_l^S, beta_r^S]."""
    S = as_word(S)
    if not is_lyndon_e(S):
        raise DomainError(f"{format_word(S)} is not Lyndon")
    beta = parse_beta(beta)
    c_l = compare_root(beta, ell_seq(S))
    c_r = compare_root(beta, r_seq(S))
    return c_l > 0 and c_r <= 0


def _zero_blocks(digits: Sequence[int]):
    # split into (b_i, m_i) with b_i zero-free and m_i >= 1; the final run may be cut off
    out = []
    i, n = 0, len(digits)
    while i < n:
        j = i
        while j < n and digits[j] != 0:
            j += 1
        k = j
        while k < n and digits[k] == 0:
            k += 1
        if k == n:
            break  # last zero run incomplete
        out.append((tuple(digits[i:j]), k - j))
        i = k
    return out


@dataclass
class IsolatedPoint:
    s: Word
    t: ValueEnclosure
    in_interval: bool
    member: Optional[bool] = None


def isolated_construction(beta, count: int = 3, digits: int = 4096,
                          horizon: int = 10 ** 4, verify: bool = True) -> List[IsolatedPoint]:
    """Isolated points of the bifurcation set tending to 0, built from the
    record-length zero runs of alpha(beta).

    At each record index i_k the word ``b_1 0^{m_1} ... b_{i_k}-`` is
    rotated to its smallest rotation s_k, and ``t_k = (s_k^inf)_beta``.
    Returns fewer than ``count`` points if the digit horizon runs out.
    """
    beta = parse_beta(beta)
    a = alpha_prefix(beta, digits)
    blocks = _zero_blocks(a)
    if not blocks:
        return []
    out: List[IsolatedPoint] = []
    best = blocks[0][1]
    head: List[int] = list(blocks[0][0]) + [0] * blocks[0][1]
    for b_i, m_i in blocks[1:]:
        if m_i > best:
            ak = tuple(head) + word_minus(b_i)
            s = smallest_cyclic(ak)
            t = eval_pi(beta, PeriodicSeq.periodic(s), check_alphabet=False)
            ok = isolated_test(s, beta) if is_lyndon(s) else False
            pt = IsolatedPoint(s, t, ok)
            if verify:
                arg = t.lo if t.lo == t.hi else PeriodicSeq.periodic(s)
                pt.member = bifurcation_member(beta, arg, horizon).member
            out.append(pt)
            best = m_i
            if len(out) >= count:
                break
        head.extend(b_i)
        head.extend([0] * m_i)
    return out
