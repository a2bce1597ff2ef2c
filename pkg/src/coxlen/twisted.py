"""Twisted palindromes s_1...s_k . s . s_-k...s_-1 and their middle-letter property.

Each flanking pair (left, right) satisfies one of

* ``"reverse"``: right is left read backwards;
* ``"swap"``: left alternates two letters, has length >= 2, and right is the
  letter-swapped left (odd length) or left itself (even length).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import Word
from .reflength import universal_reflection_length

REVERSE = "reverse"
SWAP = "swap"

_MASK = (1 << 64) - 1


class LCG64:
    """x <- 6364136223846793005 * x + 1442695040888963407 (mod 2**64).

    Draws use the top 32 bits, so sequences are reproducible in any language.
    """

    A = 6364136223846793005
    C = 1442695040888963407

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next32(self) -> int:
        self.state = (self.A * self.state + self.C) & _MASK
        return self.state >> 32

    def below(self, n: int) -> int:
        return self.next32() % n


def pair_condition(left: Word, right: Word) -> Optional[str]:
    if len(left) != len(right) or not left:
        return None
    if tuple(reversed(left)) == tuple(right):
        return REVERSE
    letters = set(left)
    if len(left) >= 2 and len(letters) == 2 and _alternates(left):
        a, b = left[0], left[1]
        if len(left) % 2:
            swapped = tuple(b if x == a else a for x in left)
            if tuple(right) == swapped:
                return SWAP
        elif tuple(right) == tuple(left):
            return SWAP
    return None


def _alternates(w: Word) -> bool:
    return all(w[i] == w[i % 2] for i in range(len(w)))


@dataclass
class TwistedPalindrome:
    center: int
    pairs: list = field(default_factory=list)  # outermost first: (left, right, condition)

    def word(self) -> Word:
        left = tuple(x for lft, _, _ in self.pairs for x in lft)
        right = tuple(x for _, rgt, _ in reversed(self.pairs) for x in rgt)
        return left + (self.center,) + right

    def center_index(self) -> int:
        return sum(len(lft) for lft, _, _ in self.pairs)

    def validate(self) -> bool:
        return all(pair_condition(lft, rgt) == cond for lft, rgt, cond in self.pairs)


def is_twisted_palindrome(w: Word) -> Optional[TwistedPalindrome]:
    """Greedy outside-in decomposition; None when the greedy strategy fails.

    At each step the longest reversed pair is tried first, then the longest
    swapped pair.
    """
    w = tuple(w)
    if not w or len(w) % 2 == 0:
        return None
    mid = len(w) // 2
    pairs = []
    a = 0
    while a < mid:
        h = mid - a
        end = len(w) - a
        found = None
        for length in range(h, 0, -1):
            left, right = w[a:a + length], w[end - length:end]
            if pair_condition(left, right) == REVERSE:
                found = (left, right, REVERSE)
                break
        if found is None:
            for length in range(h, 1, -1):
                left, right = w[a:a + length], w[end - length:end]
                if pair_condition(left, right) == SWAP:
                    found = (left, right, SWAP)
                    break
        if found is None:
            return None
        pairs.append(found)
        a += len(found[0])
    return TwistedPalindrome(w[mid], pairs)


def verify_middle_deletion(tp: TwistedPalindrome) -> bool:
    if not tp.validate():
        raise ValueError("not a valid twisted palindrome decomposition")
    w = tp.word()
    c = tp.center_index()
    return universal_reflection_length(w[:c] + w[c + 1:]) == universal_reflection_length(w) - 1


def _random_pair(rng: LCG64, n: int):
    if rng.below(2) == 0:
        length = 1 + rng.below(3)
        left = [1 + rng.below(n)]
        while len(left) < length:
            x = 1 + rng.below(n - 1)
            left.append(x if x < left[-1] else x + 1)  # no equal neighbours
        left = tuple(left)
        return left, left[::-1], REVERSE
    a = 1 + rng.below(n)
    b = 1 + rng.below(n - 1)
    b = b if b < a else b + 1
    length = 2 + rng.below(3)
    left = tuple(a if i % 2 == 0 else b for i in range(length))
    right = tuple(b if x == a else a for x in left) if length % 2 else left
    return left, right, SWAP


def generate_twisted_palindromes(n: int, depth: int, seed: int, count: int = 1) -> list:
    """``count`` words with exactly ``depth`` flanking pairs, drawn from one LCG stream.

    Per pair: one draw picks the condition (even: reverse, odd: swap). A
    reverse pair draws a length in 1..3 and then letters with no two equal
    neighbours; a swap pair draws letters a != b and a length in 2..4.
    The centre letter is drawn last. Words that are not freely reduced are
    discarded and redrawn from the same stream.
    """
    return [tp.word() for tp in generate_decomposed(n, depth, seed, count)]


def generate_decomposed(n: int, depth: int, seed: int, count: int = 1) -> list:
    """Same stream as generate_twisted_palindromes, keeping the decompositions."""
    if n < 2 or depth < 0:
        raise ValueError("need n >= 2 and depth >= 0")
    rng = LCG64(seed)
    out = []
    while len(out) < count:
        pairs = [_random_pair(rng, n) for _ in range(depth)]
        tp = TwistedPalindrome(1 + rng.below(n), pairs)
        w = tp.word()
        if all(w[i] != w[i + 1] for i in range(len(w) - 1)):
            out.append(tp)
    return out
