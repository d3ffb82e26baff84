"""The walk alphabet and elementary functions on words.

A letter over the alphabet of dimension ``n`` is a nonzero integer ``x`` with
``abs(x) <= n``: ``+i`` is the unit step along axis ``i`` and ``-i`` the step
back.  A word is a tuple of letters and describes a walk in ``Z^n`` starting
at the origin.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import DimensionError

Letter = int
Word = tuple


def letters(n: int) -> list[int]:
    """All letters of dimension ``n`` in the canonical (integer) order."""
    return sorted([i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)])


def check_word(w: Sequence[int], n: int) -> None:
    for x in w:
        if x == 0 or abs(x) > n:
            raise DimensionError(f"letter {x} is not in the alphabet of dimension {n}")


def word_dim(w: Sequence[int]) -> int:
    """Smallest dimension that contains every letter of ``w``."""
    return max((abs(x) for x in w), default=0)


def parse_word(text: str) -> Word:
    """Parse the text form, e.g. ``"1 -1 2"``.  An empty string is the empty word."""
    out = tuple(int(tok) for tok in text.split())
    if any(x == 0 for x in out):
        raise ValueError("0 is not a letter")
    return out


def format_word(w: Sequence[int]) -> str:
    return " ".join(str(x) for x in w)


def phi(w: Sequence[int], n: int | None = None) -> tuple[int, ...]:
    """Displacement of the walk ``w`` as an integer vector of length ``n``."""
    if n is None:
        n = word_dim(w)
    check_word(w, n)
    v = [0] * n
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def _require_dim1(w: Sequence[int]) -> None:
    if any(abs(x) != 1 for x in w):
        raise DimensionError("operation is only defined on one-dimensional words")


def prefix_values(w: Sequence[int]) -> list[int]:
    """Heights of the one-dimensional walk after each prefix, starting with 0."""
    _require_dim1(w)
    out = [0]
    for x in w:
        out.append(out[-1] + x)
    return out


def drop(w: Sequence[int]) -> int:
    """Lowest height reached by a one-dimensional walk (always ``<= 0``)."""
    return min(prefix_values(w))


def mu(w: Sequence[int]) -> int:
    """Largest height reached before the walk first goes below zero."""
    best = 0
    for h in prefix_values(w):
        if h < 0:
            break
        best = max(best, h)
    return best


def bar(w: Sequence[int]) -> Word:
    return tuple(-x for x in w)


def rev(w: Sequence[int]) -> Word:
    return tuple(reversed(w))


def revbar(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def lambda_(i: int, w: Sequence[int], n: int | None = None) -> Word:
    """Project ``w`` onto axis ``i``, renaming the surviving letters to axis 1."""
    if n is None:
        n = max(word_dim(w), i)
    if not 1 <= i <= n:
        raise DimensionError(f"axis {i} out of range for dimension {n}")
    check_word(w, n)
    return tuple(1 if x > 0 else -1 for x in w if abs(x) == i)


def in_Zn(w: Sequence[int], n: int | None = None) -> bool:
    return not any(phi(w, n))


def in_Cn(w: Sequence[int], n: int | None = None) -> bool:
    """Every coordinate of the walk stays non-negative."""
    if n is None:
        n = word_dim(w)
    check_word(w, n)
    height = [0] * (n + 1)
    for x in w:
        height[abs(x)] += 1 if x > 0 else -1
        if height[abs(x)] < 0:
            return False
    return True


def in_Dn(w: Sequence[int], n: int | None = None) -> bool:
    return in_Zn(w, n) and in_Cn(w, n)


def scalar_walk(w: Sequence[int], u: Sequence[int]) -> list[int]:
    """Values of ``<phi(prefix), u>`` for every prefix, starting with 0."""
    out = [0]
    for x in w:
        c = u[abs(x) - 1]
        out.append(out[-1] + (c if x > 0 else -c))
    return out


def min_infix(values: Sequence[int]) -> int:
    """Smallest ``values[j] - values[i]`` with ``i <= j`` (0 for the empty infix)."""
    best = 0
    running_max = values[0]
    for v in values:
        running_max = max(running_max, v)
        best = min(best, v - running_max)
    return best


def word_for_vector(v: Sequence[int]) -> Word:
    """The word ``a_1^{v_1} ... a_n^{v_n}`` (negative entries use barred letters)."""
    out: list[int] = []
    for i, c in enumerate(v, start=1):
        out.extend([i if c > 0 else -i] * abs(c))
    return tuple(out)


def parikh(w: Iterable[int]) -> dict[int, int]:
    """Letter counts of ``w`` keyed by signed letter."""
    counts: dict[int, int] = {}
    for x in w:
        counts[x] = counts.get(x, 0) + 1
    return counts


def all_words(n: int, max_len: int, min_len: int = 0) -> Iterator[Word]:
    """Every word over dimension ``n`` with length in ``[min_len, max_len]``, shortest first."""
    alphabet = letters(n)
    for length in range(min_len, max_len + 1):
        yield from product(alphabet, repeat=length)
