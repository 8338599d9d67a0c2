"""Finite words as digit tuples and eventually periodic digit sequences."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple, Union

from .errors import DomainError, ParseError

Word = Tuple[int, ...]


def as_word(w) -> Word:
    """Coerce a string, list or tuple of digits to a word tuple."""
    if isinstance(w, str):
        return parse_word(w)
    t = tuple(int(d) for d in w)
    if any(d < 0 for d in t):
        raise DomainError("digits must be nonnegative")
    return t


def parse_word(text: str) -> Word:
    """Parse ``"0110"`` or ``"10,11,9"`` into a word."""
    text = text.strip()
    if not text:
        return ()
    try:
        if "," in text:
            digits = tuple(int(p) for p in text.split(","))
        else:
            digits = tuple(int(ch) for ch in text)
    except ValueError as exc:
        raise ParseError(f"bad word {text!r}") from exc
    if any(d < 0 for d in digits):
        raise ParseError(f"negative digit in {text!r}")
    return digits


def format_word(w: Sequence[int]) -> str:
    if any(d > 9 for d in w):
        return ",".join(str(d) for d in w)
    return "".join(str(d) for d in w)


def _primitive_root(w: Word) -> Word:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


@dataclass(frozen=True)
class PeriodicSeq:
    """The infinite sequence ``pre per per per ...`` in canonical form.

    The period is primitive and the preperiod is as short as possible, so
    two instances are equal exactly when they denote the same sequence.
    """

    pre: Word
    per: Word

    def __post_init__(self):
        pre = as_word(self.pre)
        per = as_word(self.per)
        if not per:
            raise DomainError("period must be nonempty")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            per = (pre[-1],) + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    # construction -------------------------------------------------------
    @classmethod
    def periodic(cls, w) -> "PeriodicSeq":
        return cls((), as_word(w))

    @classmethod
    def terminating(cls, w) -> "PeriodicSeq":
        """The word ``w`` followed by ``0^inf``."""
        return cls(as_word(w), (0,))

    @classmethod
    def parse(cls, text: str) -> "PeriodicSeq":
        """Parse ``"pre:per"``; ``":1"`` is ``1^inf`` and ``"2:10"`` is ``2(10)^inf``."""
        if ":" not in text:
            raise ParseError(f"expected 'pre:per', got {text!r}")
        pre, per = text.split(":", 1)
        per_w = parse_word(per)
        if not per_w:
            raise ParseError("empty period")
        return cls(parse_word(pre), per_w)

    def __str__(self) -> str:
        return f"{format_word(self.pre)}:{format_word(self.per)}"

    # access -------------------------------------------------------------
    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        m = len(self.pre)
        if i < m:
            return self.pre[i]
        return self.per[(i - m) % len(self.per)]

    def __iter__(self) -> Iterator[int]:
        yield from self.pre
        while True:
            yield from self.per

    def prefix(self, n: int) -> Word:
        m = len(self.pre)
        if n <= m:
            return self.pre[:n]
        q, r = divmod(n - m, len(self.per))
        return self.pre + self.per * q + self.per[:r]

    def shift(self, n: int = 1) -> "PeriodicSeq":
        m = len(self.pre)
        if n <= m:
            return PeriodicSeq(self.pre[n:], self.per)
        r = (n - m) % len(self.per)
        return PeriodicSeq((), self.per[r:] + self.per[:r])

    @property
    def span(self) -> int:
        """Length of preperiod plus period."""
        return len(self.pre) + len(self.per)

    def max_digit(self) -> int:
        return max(self.pre + self.per)

    def ends_in_zeros(self) -> bool:
        return self.per == (0,)

    def distinct_shifts(self):
        """All shifts ``sigma^n`` for n below ``span``; later shifts repeat."""
        return [self.shift(n) for n in range(self.span)]


SeqLike = Union[PeriodicSeq, Sequence[int]]


def as_seq(x) -> PeriodicSeq:
    """Words are read as followed by ``0^inf``."""
    if isinstance(x, PeriodicSeq):
        return x
    if isinstance(x, str):
        if ":" in x:
            return PeriodicSeq.parse(x)
        return PeriodicSeq.terminating(parse_word(x))
    return PeriodicSeq.terminating(as_word(x))


def lex_cmp(a: SeqLike, b: SeqLike) -> int:
    """Three-way lexicographic comparison of infinite sequences.

    Finite words are padded with ``0^inf``.  Two eventually periodic
    sequences that agree on ``max pre + |per_a| + |per_b|`` digits agree
    everywhere, so that many digits decide the comparison.
    """
    a = as_seq(a)
    b = as_seq(b)
    n = max(len(a.pre), len(b.pre)) + len(a.per) + len(b.per)
    pa, pb = a.prefix(n), b.prefix(n)
    return (pa > pb) - (pa < pb)


def prefix_cmp(w: Sequence[int], x: SeqLike) -> int:
    """Compare a finite word against the same-length prefix of ``x``."""
    w = tuple(w)
    p = as_seq(x).prefix(len(w)) if not isinstance(x, tuple) else x[: len(w)]
    return (w > p) - (w < p)
