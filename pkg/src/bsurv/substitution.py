"""The block substitution ``Phi_s``, the bullet product and its inverse parser.

``Phi_s`` replaces each binary digit by one of four blocks built from a
Lyndon word ``s``.  The block depends on the digit and on its predecessor:

    prev  cur   block
     0     0    L(s)
     0     1    L(s)+
     1     1    s
     1     0    s-

The first digit is treated as if preceded by its complement, so a leading
0 gives ``s-`` and a leading 1 gives ``L(s)+``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple, Union

from .errors import DomainError, ParseError, ResourceError
from .sequences import PeriodicSeq, Word, as_word
from .words import (
    farey_words,
    is_extended_farey,
    is_farey,
    is_lyndon,
    is_lyndon_e,
    largest_cyclic,
    theta,
    word_minus,
    word_plus,
)

LAMBDA_LEN_CAP = 64


@dataclass(frozen=True)
class BlockAlphabet:
    s: Word
    s_minus: Word
    L_s: Word
    L_s_plus: Word

    @classmethod
    def of(cls, s) -> "BlockAlphabet":
        return _blocks(as_word(s))

    def block(self, prev: int, cur: int) -> Word:
        if prev == 0:
            return self.L_s if cur == 0 else self.L_s_plus
        return self.s if cur == 1 else self.s_minus


@lru_cache(maxsize=4096)
def _blocks(s: Word) -> BlockAlphabet:
    if not is_lyndon_e(s):
        raise DomainError(f"{s} is not a Lyndon word other than 0")
    L = largest_cyclic(s)
    return BlockAlphabet(s, word_minus(s), L, word_plus(L))


def _check_binary(w):
    if any(d not in (0, 1) for d in w):
        raise DomainError("substitution argument must be binary")


def _apply_word(B: BlockAlphabet, r: Word, prev: int) -> Tuple[Word, int]:
    out: List[int] = []
    for d in r:
        out.extend(B.block(prev, d))
        prev = d
    return tuple(out), prev


def phi_apply(s, r) -> Union[Word, PeriodicSeq]:
    """Image of a binary word or eventually periodic sequence under Phi_s."""
    B = BlockAlphabet.of(s)
    if isinstance(r, PeriodicSeq):
        _check_binary(r.pre + r.per)
        start = 1 - r[0]
        head, prev = _apply_word(B, r.pre, start)
        first, prev = _apply_word(B, r.per, prev)
        # from the second repetition on, each period starts after its own last digit
        steady, _ = _apply_word(B, r.per, r.per[-1])
        return PeriodicSeq(head + first, steady)
    r = as_word(r)
    if not r:
        raise DomainError("empty argument")
    _check_binary(r)
    out, _ = _apply_word(B, r, 1 - r[0])
    return out


def phi_apply_runs(s, leading: int, runs) -> Union[Word, PeriodicSeq]:
    """Phi_s on a run-length form; the last run may be ``float('inf')``."""
    runs = list(runs)
    if leading not in (0, 1) or not runs:
        raise DomainError("bad run-length form")
    digits: List[int] = []
    d = leading
    for i, k in enumerate(runs):
        if k == float("inf"):
            if i != len(runs) - 1:
                raise DomainError("only the final run may be infinite")
            return phi_apply(s, PeriodicSeq(tuple(digits), (d,)))
        if int(k) < 1:
            raise DomainError("runs must be positive")
        digits.extend([d] * int(k))
        d = 1 - d
    return phi_apply(s, tuple(digits))


def bullet(s, r) -> Word:
    """``s . r = Phi_s(r)`` for ``s`` Lyndon (not 0) and ``r`` binary Lyndon, |r| >= 2."""
    s, r = as_word(s), as_word(r)
    if not is_lyndon_e(s):
        raise DomainError(f"left operand {s} is not in L_e")
    if len(r) < 2 or any(d not in (0, 1) for d in r) or not is_lyndon(r):
        raise DomainError(f"right operand {r} is not a binary Lyndon word of length >= 2")
    return phi_apply(s, r)


def bullet_chain(words) -> Word:
    words = [as_word(w) for w in words]
    if not words:
        raise DomainError("empty chain")
    acc = words[-1]
    for w in reversed(words[:-1]):
        acc = bullet(w, acc) if len(acc) >= 2 else phi_apply(w, acc)
    return acc


# inverse parser -------------------------------------------------------------

def _choices(B: BlockAlphabet, prev):
    # (block, emitted binary digit) pairs leaving a graph node
    if prev is None:
        return ((B.s_minus, 0), (B.L_s_plus, 1))
    if prev == 0:
        return ((B.L_s, 0), (B.L_s_plus, 1))
    return ((B.s, 1), (B.s_minus, 0))


def _match(B, prev, chunk, pos):
    for block, digit in _choices(B, prev):
        if chunk == block:
            return digit
    raise ParseError(f"no block matches at position {pos}", position=pos)


def phi_parse(s, x) -> Union[Word, PeriodicSeq]:
    """The unique binary preimage of ``x`` under Phi_s.

    Walks the block graph from its start node, reading ``|s|`` digits per
    step.  For an eventually periodic ``x`` the walk is stopped as soon as
    a (phase in x, previous digit) pair repeats, which yields the preimage
    in eventually periodic form.
    """
    B = BlockAlphabet.of(s)
    m = len(B.s)
    if isinstance(x, PeriodicSeq):
        pre_len, per_len = len(x.pre), len(x.per)
        out: List[int] = []
        seen: Dict[tuple, int] = {}
        prev = None
        pos = 0
        while True:
            if pos >= pre_len:
                key = ((pos - pre_len) % per_len, prev)
                if key in seen:
                    k = seen[key]
                    return PeriodicSeq(tuple(out[:k]), tuple(out[k:]))
                seen[key] = len(out)
            chunk = tuple(x[pos + i] for i in range(m))
            d = _match(B, prev, chunk, pos)
            out.append(d)
            prev = d
            pos += m
    x = as_word(x)
    if len(x) % m:
        raise ParseError(f"length {len(x)} is not a multiple of {m}", position=len(x) - len(x) % m)
    out = []
    prev = None
    for pos in range(0, len(x), m):
        d = _match(B, prev, x[pos:pos + m], pos)
        out.append(d)
        prev = d
    return tuple(out)


def phi_parse_prefix(s, digits) -> Word:
    """Parse as many whole blocks of a finite prefix as possible."""
    B = BlockAlphabet.of(s)
    m = len(B.s)
    digits = tuple(digits)
    n = len(digits) - len(digits) % m
    return phi_parse(s, digits[:n]) if n else ()


# Lambda sets ------------------------------------------------------------------

def extended_farey_words(max_len: int, max_digit: int) -> List[Word]:
    out = [(k,) for k in range(1, max_digit + 1)]
    for w in farey_words(max_len):
        for k in range(0, max_digit):
            out.append(theta(w, k))
    return out


def lambda_enumerate(max_len: int, max_digit: int = 1, cap: int = LAMBDA_LEN_CAP) -> List[Word]:
    """All ``s_1 . s_2 ... s_m`` with s_1 in F_e, the rest in F, of length <= max_len.

    Digits are bounded by ``max_digit``.  Result is sorted and deduplicated.
    """
    if max_len > cap:
        raise ResourceError(f"max_len {max_len} exceeds cap {cap}")
    F = farey_words(max_len)
    found = set(extended_farey_words(max_len, max_digit))
    frontier = list(found)
    while frontier:
        nxt = []
        for S in frontier:
            for r in F:
                if len(S) * len(r) > max_len:
                    continue
                W = bullet(S, r)
                if max(W) <= max_digit and W not in found:
                    found.add(W)
                    nxt.append(W)
        frontier = nxt
    return sorted(found)


def lambda_decompose(S) -> List[Word]:
    """Split ``S`` as ``s_1 . s_2 ... s_m`` (s_1 in F_e, others in F).

    Raises DomainError if ``S`` is not of that form.
    """
    S = as_word(S)
    out = _decompose(S, extended=True)
    if out is None:
        raise DomainError(f"{S} is not a product of Farey words")
    return out


def is_lambda_e(S) -> bool:
    try:
        lambda_decompose(S)
        return True
    except DomainError:
        return False


@lru_cache(maxsize=8192)
def _decompose(S: Word, extended: bool):
    if (is_extended_farey(S) if extended else is_farey(S)):
        return [S]
    n = len(S)
    for m in range(1, n // 2 + 1):
        if n % m:
            continue
        head = word_plus(S[:m])
        if not (is_extended_farey(head) if extended else is_farey(head)):
            continue
        try:
            R = phi_parse(head, S)
        except (ParseError, DomainError):
            continue
        if phi_apply(head, R) != S:
            continue
        rest = _decompose(R, False)
        if rest is not None:
            return [head] + rest
    return None
