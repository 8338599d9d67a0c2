"""Series values, greedy and quasi-greedy digits, and certified inversion of
``beta -> alpha(beta)``.

All arithmetic is exact rational arithmetic.  A base is held as a rational
interval, optionally together with the eventually periodic sequence
``alpha(beta)`` that defines it exactly.  Values of digit series are
rational intervals as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence

from .errors import BoundaryFlag, DomainError, ParseError, PrecisionError, ResourceError, Undecided
from .sequences import PeriodicSeq, as_seq, as_word, lex_cmp
from .words import theta

DEFAULT_EPS = Fraction(1, 2 ** 64)
MAX_BISECTION_STEPS = 10 ** 6


def parse_real(text) -> Fraction:
    """Exact rational from ``"2.2"``, ``"11/5"``, ``"1e-3"`` or a number."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def float_down(x: Fraction) -> float:
    f = float(x)
    if Fraction(f) > x:
        f = math.nextafter(f, -math.inf)
    return f


def float_up(x: Fraction) -> float:
    f = float(x)
    if Fraction(f) < x:
        f = math.nextafter(f, math.inf)
    return f


@dataclass(frozen=True)
class ValueEnclosure:
    lo: Fraction
    hi: Fraction
    tag: str = "exact"
    tail: Fraction = Fraction(0)

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @classmethod
    def point(cls, x) -> "ValueEnclosure":
        x = parse_real(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        x = parse_real(x)
        return self.lo <= x <= self.hi

    def __float__(self):
        return float(self.mid)

    def pair(self):
        return [float_down(self.lo), float_up(self.hi)]

    def intersect(self, other: "ValueEnclosure") -> "ValueEnclosure":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise PrecisionError("disjoint enclosures")
        tag = "exact" if self.tag == other.tag == "exact" else "truncated"
        return ValueEnclosure(lo, hi, tag)


@dataclass(frozen=True)
class BetaEnclosure:
    """A base ``beta > 1`` known to lie in ``[lo, hi]``.

    ``defining`` is ``alpha(beta)`` when it is known exactly.
    """

    lo: Fraction
    hi: Fraction
    defining: Optional[PeriodicSeq] = None
    eps: Fraction = field(default=DEFAULT_EPS, compare=False)

    def __post_init__(self):
        if not (1 < self.lo <= self.hi):
            raise DomainError(f"need 1 < lo <= hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x) -> "BetaEnclosure":
        x = parse_real(x)
        if x <= 1:
            raise DomainError("base must exceed 1")
        defining = None
        if x.denominator == 1:
            defining = PeriodicSeq((), (int(x) - 1,))
        return cls(x, x, defining)

    @classmethod
    def from_seq(cls, seq, eps=DEFAULT_EPS) -> "BetaEnclosure":
        return alpha_inverse(seq, eps)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.mid)

    def __contains__(self, x) -> bool:
        x = parse_real(x)
        return self.lo <= x <= self.hi

    def pair(self):
        return [float_down(self.lo), float_up(self.hi)]

    @property
    def max_digit(self) -> int:
        """Largest digit of the alphabet {0, ..., ceil(beta) - 1}."""
        return math.ceil(self.hi) - 1

    def log_bounds(self):
        return math.log(float_down(self.lo)), math.log(float_up(self.hi))


def parse_beta(text, eps=DEFAULT_EPS) -> BetaEnclosure:
    """``"2.2"``, ``"11/5"`` or ``"seq:<pre>:<per>"`` (the root of (seq)_beta = 1)."""
    if isinstance(text, BetaEnclosure):
        return text
    if isinstance(text, PeriodicSeq):
        return beta_from_expansion(text, eps)
    s = str(text).strip()
    if s.startswith("seq:"):
        return beta_from_expansion(PeriodicSeq.parse(s[4:]), eps)
    return BetaEnclosure.exact(parse_real(s))


# series values ---------------------------------------------------------------

def _series_num_den(p: int, q: int, pre: Sequence[int], per: Sequence[int]):
    # value at beta = p/q as N/D with D > 0, integer arithmetic only
    A, qm = 0, 1
    for c in pre:
        qm *= q
        A = A * p + c * qm
    B, qn = 0, 1
    for c in per:
        qn *= q
        B = B * p + c * qn
    pn = p ** len(per)
    pm = p ** len(pre)
    gap = pn - qn
    return A * gap + qm * B, pm * gap


def series_value(beta: Fraction, seq: PeriodicSeq) -> Fraction:
    """Exact ``sum c_i beta^-i`` for rational ``beta > 1``."""
    N, D = _series_num_den(beta.numerator, beta.denominator, seq.pre, seq.per)
    return Fraction(N, D)


def series_sign(beta: Fraction, seq: PeriodicSeq) -> int:
    """Sign of ``(seq)_beta - 1``."""
    N, D = _series_num_den(beta.numerator, beta.denominator, seq.pre, seq.per)
    return (N > D) - (N < D)


def eval_pi(beta, seq, check_alphabet: bool = True) -> ValueEnclosure:
    """Enclosure of ``(seq)_beta``; the series decreases in beta."""
    beta = parse_beta(beta)
    seq = as_seq(seq)
    if check_alphabet and seq.max_digit() > beta.max_digit:
        raise DomainError(f"digit {seq.max_digit()} outside alphabet of base {float(beta)}")
    if beta.is_point:
        v = series_value(beta.lo, seq)
        return ValueEnclosure(v, v)
    return ValueEnclosure(series_value(beta.hi, seq), series_value(beta.lo, seq))


def eval_prefix(beta, digits: Sequence[int], max_digit: Optional[int] = None) -> ValueEnclosure:
    """Enclosure of a series known only through a finite prefix."""
    beta = parse_beta(beta)
    digits = tuple(digits)
    D = beta.max_digit if max_digit is None else max_digit
    head = eval_pi(beta, PeriodicSeq.terminating(digits), check_alphabet=False)
    lo_b = beta.lo
    tail = Fraction(D) / (lo_b ** len(digits) * (lo_b - 1))
    return ValueEnclosure(head.lo, head.hi + tail, "truncated", tail)


# inverting alpha -------------------------------------------------------------

def is_alpha_sequence(seq) -> bool:
    """First digit >= 1, not ending in 0^inf, and every shift is <= seq."""
    seq = as_seq(seq)
    if seq[0] < 1 or seq.ends_in_zeros():
        return False
    return all(lex_cmp(seq.shift(n), seq) <= 0 for n in range(1, seq.span))


@lru_cache(maxsize=65536)
def _alpha_form(seq: PeriodicSeq) -> bool:
    return is_alpha_sequence(seq)


def _bisect(sign_at, lo: Fraction, hi: Fraction, eps: Fraction):
    # sign_at is nonincreasing, positive at lo, nonpositive at hi
    steps = 0
    while hi - lo > eps:
        steps += 1
        if steps > MAX_BISECTION_STEPS:
            raise ResourceError("bisection did not converge")
        mid = (lo + hi) / 2
        s = sign_at(mid)
        if s == 0:
            return mid, mid
        if s > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _snap(sign_at, lo, hi):
    # recognise exactly rational roots with small denominators
    for den in (1, 2, 3, 4, 5, 6, 8, 10, 12, 16):
        c = Fraction(round((lo + hi) / 2 * den), den)
        if lo <= c <= hi and sign_at(c) == 0:
            return c
    return None


def root_of(seq, eps=DEFAULT_EPS, lo=None, hi=None):
    """Bracket the root of ``(seq)_beta = 1`` to width ``eps``; returns (lo, hi)."""
    seq = as_seq(seq)
    if seq.max_digit() == 0:
        raise DomainError("zero sequence has no root")
    sign_at = lambda b: series_sign(b, seq)
    if lo is None:
        lo = Fraction(max(1, seq[0]))
        if lo == 1:
            lo = Fraction(1) + Fraction(1, 2 ** 8)
            while sign_at(lo) <= 0:
                lo = 1 + (lo - 1) / 16
    if hi is None:
        hi = Fraction(seq.max_digit() + 1)
    if sign_at(hi) == 0:
        return hi, hi
    if sign_at(lo) == 0:
        return lo, lo
    if not (sign_at(lo) > 0 > sign_at(hi)):
        raise DomainError(f"no sign change for {seq} on [{float(lo)}, {float(hi)}]")
    lo, hi = _bisect(sign_at, lo, hi, eps)
    if lo != hi:
        c = _snap(sign_at, lo, hi)
        if c is not None:
            return c, c
    return lo, hi


def alpha_inverse(seq, eps=DEFAULT_EPS) -> BetaEnclosure:
    """The base whose quasi-greedy expansion of 1 is ``seq``."""
    seq = as_seq(seq)
    if not is_alpha_sequence(seq):
        raise DomainError(f"{seq} is not the quasi-greedy expansion of 1 in any base")
    k = seq[0]
    lo, hi = root_of(seq, eps, Fraction(k), Fraction(k + 1))
    if k == 1 and lo <= 1:
        raise DomainError("root at 1")
    return BetaEnclosure(lo, hi, seq, eps)


def beta_from_expansion(seq, eps=DEFAULT_EPS) -> BetaEnclosure:
    """Base defined by ``(seq)_beta = 1`` for any expansion of 1.

    A finite greedy expansion ``w 0^inf`` is converted to ``(w-)^inf``.
    When ``seq`` is not an expansion produced by the greedy algorithm the
    enclosure is still returned, without a defining sequence.
    """
    seq = as_seq(seq)
    if seq.ends_in_zeros() and seq.pre:
        w = seq.pre
        cand = PeriodicSeq((), w[:-1] + (w[-1] - 1,))
        if is_alpha_sequence(cand):
            return alpha_inverse(cand, eps)
    if is_alpha_sequence(seq):
        return alpha_inverse(seq, eps)
    lo, hi = root_of(seq, eps)
    return BetaEnclosure(lo, hi, None, eps)


def root_bracket_prefix(prefix: Sequence[int], max_digit: int, eps=DEFAULT_EPS,
                        defining=None) -> BetaEnclosure:
    """Enclose the root of ``(x)_beta = 1`` for any ``x`` starting with ``prefix``
    whose later digits lie in ``0..max_digit``."""
    prefix = tuple(prefix)
    low_seq = PeriodicSeq.terminating(prefix)
    high_seq = PeriodicSeq(prefix, (max_digit,))
    lo1, _ = root_of(low_seq, eps)
    _, hi2 = root_of(high_seq, eps)
    return BetaEnclosure(lo1, hi2, defining, eps)


def compare_root(beta: BetaEnclosure, seq) -> int:
    """Sign of ``beta - root`` where ``(seq)_root = 1``.

    Uses the defining sequence when both sides are quasi-greedy expansions
    of 1 (order of bases equals lexicographic order of those expansions),
    exact evaluation for rational bases, and the enclosure otherwise.
    Raises BoundaryFlag when the enclosure cannot decide.
    """
    seq = as_seq(seq)
    if beta.defining is not None and _alpha_form(seq):
        return lex_cmp(beta.defining, seq)
    s_hi = series_sign(beta.hi, seq)
    if beta.is_point:
        return -s_hi
    if s_hi > 0:
        return -1
    s_lo = series_sign(beta.lo, seq)
    if s_lo < 0:
        return 1
    raise BoundaryFlag(f"base enclosure straddles the root of {seq}")


def compare_bases(a: BetaEnclosure, b: BetaEnclosure) -> int:
    if a.defining is not None and b.defining is not None:
        return lex_cmp(a.defining, b.defining)
    if b.defining is not None:
        return compare_root(a, b.defining)
    if a.defining is not None:
        return -compare_root(b, a.defining)
    if a.hi < b.lo:
        return -1
    if a.lo > b.hi:
        return 1
    if a.is_point and b.is_point:
        return 0
    raise BoundaryFlag("overlapping base enclosures")


# digit generation -----------------------------------------------------------------

def _as_value(x) -> ValueEnclosure:
    if isinstance(x, ValueEnclosure):
        return x
    return ValueEnclosure.point(x)


def greedy_digits(x, beta, n: int) -> List[int]:
    """First ``n`` digits of the greedy expansion ``b(x, beta)`` of ``x`` in [0, 1)."""
    beta = parse_beta(beta)
    v = _as_value(x)
    lo, hi = v.lo, v.hi
    if lo < 0 or hi >= 1:
        raise DomainError("greedy expansion needs x in [0, 1)")
    out = []
    for i in range(n):
        ylo, yhi = beta.lo * lo, beta.hi * hi
        d = math.floor(ylo)
        if math.floor(yhi) != d:
            raise Undecided(f"digit {i} undecided", index=i)
        out.append(d)
        lo, hi = ylo - d, yhi - d
    return out


def quasi_greedy_digits(x, beta, n: int) -> List[int]:
    """First ``n`` digits of the quasi-greedy expansion ``a(x, beta)``, x in (0, 1]."""
    beta = parse_beta(beta)
    v = _as_value(x)
    lo, hi = v.lo, v.hi
    if lo <= 0 or hi > 1:
        raise DomainError("quasi-greedy expansion needs x in (0, 1]")
    out = []
    for i in range(n):
        ylo, yhi = beta.lo * lo, beta.hi * hi
        d = math.ceil(ylo) - 1
        if math.ceil(yhi) - 1 != d:
            raise Undecided(f"digit {i} undecided", index=i)
        out.append(d)
        lo, hi = ylo - d, yhi - d
    return out


def alpha(beta, n: int) -> List[int]:
    """First ``n`` digits of ``alpha(beta) = a(1, beta)``."""
    beta = parse_beta(beta)
    if beta.defining is not None:
        return list(beta.defining.prefix(n))
    return quasi_greedy_digits(Fraction(1), beta, n)


def alpha_prefix(beta, n: int) -> List[int]:
    """As many digits of ``alpha(beta)`` as the enclosure decides, up to ``n``."""
    try:
        return alpha(beta, n)
    except Undecided as exc:
        return alpha(beta, exc.index)


def _cycle_digits(step, x0, max_steps):
    seen = {}
    out = []
    x = x0
    for i in range(max_steps):
        if x in seen:
            k = seen[x]
            return PeriodicSeq(tuple(out[:k]), tuple(out[k:]))
        seen[x] = i
        d, x = step(x)
        out.append(d)
    return None


def greedy_seq(t, beta, max_steps: int = 4096) -> Optional[PeriodicSeq]:
    """``b(t, beta)`` as an exact eventually periodic sequence, or None if no
    cycle shows up within ``max_steps`` (typical for non-integer bases)."""
    beta = parse_beta(beta)
    t = parse_real(t)
    if not beta.is_point:
        return None
    if not (0 <= t < 1):
        raise DomainError("t must lie in [0, 1)")
    b = beta.lo

    def step(x):
        y = b * x
        d = math.floor(y)
        return d, y - d

    return _cycle_digits(step, t, max_steps)


def alpha_seq(beta, max_steps: int = 4096) -> Optional[PeriodicSeq]:
    """``alpha(beta)`` as an exact eventually periodic sequence when available."""
    beta = parse_beta(beta)
    if beta.defining is not None:
        return beta.defining
    if not beta.is_point:
        return None
    b = beta.lo

    def step(x):
        y = b * x
        d = math.ceil(y) - 1
        return d, y - d

    return _cycle_digits(step, Fraction(1), max_steps)


def is_admissible(z, beta, horizon: int = 10 ** 4, strict: bool = True, digits: int = 512) -> bool:
    """Check ``sigma^n(z) < alpha(beta)`` (strict) or ``<=`` for n below ``horizon``.

    Strict admissibility characterises greedy expansions, the non-strict
    form quasi-greedy ones.  Exact when both sequences are eventually
    periodic; otherwise prefixes are compared and Undecided is raised if a
    comparison is not settled inside the available digits.
    """
    beta = parse_beta(beta)
    a = alpha_seq(beta, max_steps=512)
    if isinstance(z, PeriodicSeq) and a is not None:
        for n in range(min(horizon, z.span)):
            c = lex_cmp(z.shift(n), a)
            if c > 0 or (strict and c == 0):
                return False
        return True
    a_digits = alpha_prefix(beta, digits)
    if isinstance(z, PeriodicSeq):
        zd = z.prefix(horizon + len(a_digits))
        count = min(horizon, z.span)
    else:
        zd = tuple(z)
        count = min(horizon, len(zd))
    m = len(a_digits)
    for n in range(count):
        window = tuple(zd[n:n + m])
        ref = tuple(a_digits[:len(window)])
        if window > ref:
            return False
        if window < ref:
            continue
        if len(window) < m or m < digits:
            raise Undecided(f"shift {n} agrees with alpha on all known digits", index=n)
        raise Undecided(f"shift {n} agrees with alpha on {m} digits", index=n)
    return True


# maps on bases ---------------------------------------------------------------------

def _image_root(image_prefix: Sequence[int], max_digit: int, eps) -> BetaEnclosure:
    return root_bracket_prefix(image_prefix, max_digit, eps)


def phi_map(beta, eps=DEFAULT_EPS, truncate: bool = False, digits: int = 256) -> BetaEnclosure:
    """``alpha^-1(theta(alpha(beta)))``, which moves (k, k+1] into (k+1, k+2]."""
    beta = parse_beta(beta, eps)
    a = alpha_seq(beta)
    if a is not None:
        return alpha_inverse(theta(a), eps)
    if not truncate:
        raise PrecisionError("alpha(beta) is not known to be periodic; pass truncate=True")
    pre = theta(tuple(alpha_prefix(beta, digits)))
    return _image_root(pre, pre[0], eps)


def psi_map(S, beta_hat, eps=DEFAULT_EPS, digits: int = 256) -> BetaEnclosure:
    """``alpha^-1(Phi_S(alpha(beta_hat)))`` for ``beta_hat`` in (1, 2]."""
    from .substitution import phi_apply

    S = as_word(S)
    beta_hat = parse_beta(beta_hat, eps)
    if not (beta_hat.lo > 1 and beta_hat.hi <= 2):
        raise DomainError("psi_map needs a base in (1, 2]")
    a = alpha_seq(beta_hat)
    if a is not None:
        return alpha_inverse(phi_apply(S, a), eps)
    hat = tuple(alpha_prefix(beta_hat, digits))
    image = phi_apply(S, hat)
    return _image_root(image, max(image), eps)


def psi_inverse(S, beta, eps=DEFAULT_EPS, digits: int = 4096) -> BetaEnclosure:
    """``alpha^-1(Phi_S^-1(alpha(beta)))``; DomainError outside the range of psi_map."""
    from .substitution import phi_parse, phi_parse_prefix

    S = as_word(S)
    beta = parse_beta(beta, eps)
    a = alpha_seq(beta, max_steps=512)
    try:
        if a is not None:
            return alpha_inverse(phi_parse(S, a), eps)
        hat = phi_parse_prefix(S, alpha_prefix(beta, digits))
    except ParseError as exc:
        raise DomainError(f"base is outside the range of psi_{S}: {exc}") from exc
    if not hat:
        raise PrecisionError("not enough digits of alpha(beta) to invert")
    return root_bracket_prefix(hat, 1, eps)
