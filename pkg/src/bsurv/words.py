"""Combinatorics of finite words: increments, rotations, the digit shift,
Lyndon and Farey predicates, the Farey tree and the L/M/R factorization.

Words are tuples of nonnegative integers.  Lexicographic order on tuples
of equal length is the built-in tuple order.
"""
from __future__ import annotations

from functools import lru_cache
from typing import List, Optional

from .errors import DomainError, ParseError, ResourceError
from .sequences import PeriodicSeq, Word, as_word

FAREY_LEVEL_CAP = 24


def word_plus(w) -> Word:
    w = as_word(w)
    if not w:
        raise DomainError("empty word")
    return w[:-1] + (w[-1] + 1,)


def word_minus(w) -> Word:
    w = as_word(w)
    if not w:
        raise DomainError("empty word")
    if w[-1] == 0:
        raise DomainError(f"cannot decrement {w}: last digit is 0")
    return w[:-1] + (w[-1] - 1,)


def rotations(w) -> List[Word]:
    w = as_word(w)
    return [w[i:] + w[:i] for i in range(len(w))]


def largest_cyclic(w) -> Word:
    """Lexicographically largest cyclic permutation."""
    return max(rotations(w))


def smallest_cyclic(w) -> Word:
    return min(rotations(w))


def cyclic_shift(w) -> Word:
    """``w_2 ... w_n w_1``."""
    w = as_word(w)
    return w[1:] + w[:1]


def theta(x, k: int = 1):
    """Add ``k`` to every digit of a word or an eventually periodic sequence."""
    if isinstance(x, PeriodicSeq):
        return PeriodicSeq(theta(x.pre, k), theta(x.per, k))
    w = as_word(x)
    out = tuple(d + k for d in w)
    if any(d < 0 for d in out):
        raise DomainError("negative digit after shift")
    return out


def is_primitive(w) -> bool:
    w = as_word(w)
    n = len(w)
    return all(w != w[p:] + w[:p] for p in range(1, n) if n % p == 0)


def is_lyndon(w) -> bool:
    """Aperiodic and strictly smaller than each of its other rotations."""
    w = as_word(w)
    if not w:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def is_lyndon_e(w) -> bool:
    """Lyndon words other than the single letter 0."""
    w = as_word(w)
    return is_lyndon(w) and w != (0,)


def is_palindrome(w) -> bool:
    w = as_word(w)
    return w == w[::-1]


def is_palindrome_minus(w) -> bool:
    return is_palindrome(word_minus(w))


# Farey words ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _farey_level(n: int):
    if n == 0:
        return ((0,), (1,))
    prev = _farey_level(n - 1)
    out = [prev[0]]
    for left, right in zip(prev, prev[1:]):
        out.append(left + right)
        out.append(right)
    return tuple(out)


def farey_level(n: int, cap: int = FAREY_LEVEL_CAP) -> List[Word]:
    """The ordered list F_n; consecutive words get their concatenation inserted."""
    if n < 0:
        raise DomainError("level must be nonnegative")
    if n > cap:
        raise ResourceError(f"Farey level {n} exceeds cap {cap}")
    return list(_farey_level(n))


def farey_words(max_len: int) -> List[Word]:
    """All Farey words of length 2..max_len in increasing order."""

    out: List[Word] = []

    def walk(left: Word, right: Word):
        # in-order traversal of the mediant tree, pruned by length
        mid = left + right
        if len(mid) > max_len:
            return
        walk(left, mid)
        out.append(mid)
        walk(mid, right)

    walk((0,), (1,))
    return out


# L/M/R substitutions --------------------------------------------------------

_SUBS = {
    "L": {0: (0,), 1: (1, 0)},
    "M": {0: (0, 1), 1: (1, 0)},
    "R": {0: (0, 1), 1: (1,)},
}


def apply_lmr(phi: str, w) -> Word:
    """Apply the composition ``phi`` (leftmost letter applied last)."""
    w = as_word(w)
    for letter in reversed(phi):
        table = _SUBS[letter]
        w = tuple(d for c in w for d in table[c])
    return w


def _invert(letter: str, u: Word) -> Optional[Word]:
    out = []
    i, n = 0, len(u)
    if letter == "M":
        if n % 2:
            return None
        for i in range(0, n, 2):
            pair = u[i:i + 2]
            if pair == (0, 1):
                out.append(0)
            elif pair == (1, 0):
                out.append(1)
            else:
                return None
        return tuple(out)
    while i < n:
        if letter == "L":
            if u[i] == 0:
                out.append(0)
                i += 1
            elif u[i:i + 2] == (1, 0):
                out.append(1)
                i += 2
            else:
                return None
        else:
            if u[i] == 1:
                out.append(1)
                i += 1
            elif u[i:i + 2] == (0, 1):
                out.append(0)
                i += 2
            else:
                return None
    return tuple(out)


def _desubstitute(u: Word) -> Optional[str]:
    # phi(1) = u with phi a nonempty {L,R,M}-word ending in M
    stack = [(u, "")]
    seen = set()
    while stack:
        cur, path = stack.pop()
        for letter in "MRL":
            v = _invert(letter, cur)
            if v is None or not v:
                continue
            if letter == "M" and v == (1,):
                return path + "M"
            if len(v) < len(cur) and (v, path + letter) not in seen:
                seen.add((v, path + letter))
                stack.append((v, path + letter))
    return None


def lmr_decompose(w) -> str:
    """Return ``phi`` over {L,M,R}, ending in M, with cyclic_shift(phi(1)) = w.

    Farey words have exactly one M; products of k Farey words under the
    bullet operation have k.  Raises ParseError when no such ``phi`` exists.
    """
    w = as_word(w)
    if not w or any(d not in (0, 1) for d in w):
        raise ParseError("L/M/R factorization needs a binary word")
    u = w[-1:] + w[:-1]
    phi = _desubstitute(u)
    if phi is None:
        raise ParseError(f"{w} has no L/M/R factorization")
    zero_image = apply_lmr(phi, (0,))
    if cyclic_shift(zero_image) != largest_cyclic(w):
        raise ParseError(f"{w}: factorization {phi} does not reproduce L(w)")
    return phi


def is_farey(w) -> bool:
    """Membership in F (binary Farey words of length at least 2)."""
    w = as_word(w)
    if len(w) < 2 or any(d not in (0, 1) for d in w):
        return False
    try:
        return lmr_decompose(w).count("M") == 1
    except ParseError:
        return False


def is_extended_farey(w) -> bool:
    """Membership in F_e: digit shifts of Farey words and of the letter 1."""
    w = as_word(w)
    if not w:
        return False
    if len(w) == 1:
        return w[0] >= 1
    lo = min(w)
    return is_farey(theta(w, -lo))


def farey_shift(w) -> int:
    """The ``k`` with ``w = theta^k(v)`` for ``v`` in F or v = 1."""
    w = as_word(w)
    if not is_extended_farey(w):
        raise DomainError(f"{w} is not an extended Farey word")
    return w[0] - 1 if len(w) == 1 else min(w)
