"""Words in a free group of finite rank.

A word is a tuple of nonzero ints: letter ``i > 0`` is the i-th free
generator and ``-i`` its inverse.  The text form uses ``a``..``z`` for
generators 1..26 and ``A``..``Z`` for their inverses; whitespace is
ignored and ``1`` denotes the empty word.  No ``^-1`` style syntax.
"""

from __future__ import annotations

from random import Random

from .errors import DomainError, ParseError

Word = tuple[int, ...]

_LOWER = "abcdefghijklmnopqrstuvwxyz"
_UPPER = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def parse(text: str, rank: int | None = None) -> Word:
    """Parse a word from text, optionally enforcing the ambient rank."""
    stripped = "".join(text.split())
    if stripped == "1":
        return ()
    letters = []
    for ch in stripped:
        if ch in _LOWER:
            letters.append(_LOWER.index(ch) + 1)
        elif ch in _UPPER:
            letters.append(-(_UPPER.index(ch) + 1))
        else:
            raise ParseError(f"bad character {ch!r} in word {text!r}")
    if rank is not None:
        for x in letters:
            if abs(x) > rank:
                raise ParseError(f"letter {fmt((x,))!r} exceeds rank {rank}")
    return tuple(letters)


def fmt(word: Word) -> str:
    if not word:
        return "1"
    out = []
    for x in word:
        if x == 0 or abs(x) > 26:
            raise DomainError(f"letter {x} has no text form")
        out.append(_LOWER[x - 1] if x > 0 else _UPPER[-x - 1])
    return "".join(out)


def free_reduce(word) -> Word:
    """Delete adjacent inverse pairs until none remain."""
    stack: list[int] = []
    for x in word:
        if x == 0:
            raise DomainError("0 is not a letter")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def inverse(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def concat(*parts: Word) -> Word:
    joined: list[int] = []
    for p in parts:
        joined.extend(p)
    return free_reduce(joined)


def conjugate(word: Word, by: Word) -> Word:
    """g w g^-1 for g = ``by``."""
    return concat(by, word, inverse(by))


def random_reduced(rng: Random, rank: int, length: int) -> Word:
    """Uniformly random freely reduced word of exactly the given length."""
    if rank < 1:
        raise DomainError("rank must be at least 1")
    letters = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    out: list[int] = []
    while len(out) < length:
        x = rng.choice(letters)
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)
