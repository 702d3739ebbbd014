"""Words in the Artin generators of the braid group B_n.

A braid is stored as a plain word: letter ``k`` stands for sigma_|k| raised to
sign(k). Products read left to right, so in ``compose(a, b)`` the braid ``a`` is
performed first. Equality of braids is decided through the faithful right
action on the free group (see :mod:`monodromy.free_group`).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise ValueError(f"a braid needs at least one strand, got {self.strands}")
        letters = tuple(int(k) for k in self.letters)
        for k in letters:
            if k == 0 or abs(k) >= self.strands:
                raise ValueError(f"letter {k} is not a generator of B_{self.strands}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return compose(self, other)

    def __str__(self) -> str:
        return " ".join(str(k) for k in self.letters)


@dataclass(frozen=True)
class Permutation:
    """Permutation of {1..n}; ``images[i-1]`` is the image of ``i``.

    For a braid, the image of ``i`` is the end position of the strand that
    starts at position ``i``.
    """

    degree: int
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, self.degree + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{self.degree}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(n, tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def then(self, other: "Permutation") -> "Permutation":
        """Apply ``self`` first, then ``other``."""
        return Permutation(self.degree, tuple(other(self(i)) for i in range(1, self.degree + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(self.degree, tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cycle.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cycle))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))


def _check_same(a: BraidWord, b: BraidWord) -> None:
    if a.strands != b.strands:
        raise ValueError(f"strand mismatch: B_{a.strands} vs B_{b.strands}")


def identity(n: int) -> BraidWord:
    return BraidWord(n, ())


def compose(a: BraidWord, b: BraidWord) -> BraidWord:
    _check_same(a, b)
    return BraidWord(a.strands, a.letters + b.letters)


def product(words: Iterable[BraidWord], n: int) -> BraidWord:
    letters: list[int] = []
    for w in words:
        if w.strands != n:
            raise ValueError(f"strand mismatch: B_{w.strands} vs B_{n}")
        letters.extend(w.letters)
    return BraidWord(n, tuple(letters))


def inverse(a: BraidWord) -> BraidWord:
    return BraidWord(a.strands, tuple(-k for k in reversed(a.letters)))


def free_reduce(a: BraidWord) -> BraidWord:
    """Cancel adjacent pairs ``k, -k``; the braid is unchanged."""
    stack: list[int] = []
    for k in a.letters:
        if stack and stack[-1] == -k:
            stack.pop()
        else:
            stack.append(k)
    return BraidWord(a.strands, tuple(stack))


def permutation_of(a: BraidWord) -> Permutation:
    position = list(range(a.strands + 1))  # position[i]: where the strand starting at i is now
    where = list(range(a.strands + 1))  # where[p]: which strand sits at position p
    for k in a.letters:
        i = abs(k)
        s, t = where[i], where[i + 1]
        where[i], where[i + 1] = t, s
        position[s], position[t] = i + 1, i
    return Permutation(a.strands, tuple(position[1:]))


def full_twist(n: int) -> BraidWord:
    if n < 1:
        raise ValueError("n must be positive")
    return BraidWord(n, tuple(range(1, n)) * n)


def half_twist(n: int) -> BraidWord:
    """Garside element: sigma_1 (sigma_2 sigma_1) ... (sigma_{n-1} ... sigma_1)."""
    letters: list[int] = []
    for j in range(1, n):
        letters.extend(range(j, 0, -1))
    return BraidWord(n, tuple(letters))


def exponent_sum(a: BraidWord) -> int:
    return sum(1 if k > 0 else -1 for k in a.letters)


def conjugate(a: BraidWord, g: BraidWord) -> BraidWord:
    """Return ``g * a * g^-1``."""
    _check_same(a, g)
    return BraidWord(a.strands, g.letters + a.letters + inverse(g).letters)


def canonical_form(a: BraidWord) -> tuple:
    """Opaque complete invariant: the images of the free generators under ``a``."""
    from .free_group import action_images

    return action_images(a.strands, a.letters)


def braid_equal(a: BraidWord, b: BraidWord) -> bool:
    _check_same(a, b)
    if exponent_sum(a) != exponent_sum(b):
        return False
    return canonical_form(a) == canonical_form(b)


def block_embed(parts: Sequence[BraidWord]) -> BraidWord:
    """Place ``parts`` side by side on consecutive strand blocks."""
    n = sum(p.strands for p in parts)
    if n == 0:
        raise ValueError("block_embed needs at least one part")
    letters: list[int] = []
    offset = 0
    for p in parts:
        letters.extend(k + offset if k > 0 else k - offset for k in p.letters)
        offset += p.strands
    return BraidWord(n, tuple(letters))


def shift(a: BraidWord, offset: int, n: int) -> BraidWord:
    """Embed ``a`` into B_n on strands ``offset+1 .. offset+a.strands``."""
    if offset < 0 or offset + a.strands > n:
        raise ValueError(f"block at offset {offset} of width {a.strands} does not fit in B_{n}")
    return BraidWord(n, tuple(k + offset if k > 0 else k - offset for k in a.letters))


def is_syntactically_positive(a: BraidWord) -> bool:
    return all(k > 0 for k in a.letters)


def generators(n: int) -> list[BraidWord]:
    return [BraidWord(n, (i,)) for i in range(1, n)]


def conjugacy_search(a: BraidWord, b: BraidWord, max_len: int) -> Optional[BraidWord]:
    """Bounded search for ``g`` with ``g a g^-1 == b``.

    Returns None when nothing is found within ``max_len`` letters; that means
    "unknown", not "not conjugate", unless a conjugacy invariant already differs.
    """
    _check_same(a, b)
    if exponent_sum(a) != exponent_sum(b):
        return None
    if permutation_of(a).cycle_type() != permutation_of(b).cycle_type():
        return None
    n = a.strands
    target = canonical_form(b)
    start = canonical_form(a)
    if start == target:
        return identity(n)
    # states are conjugates c = g a g^-1, keyed by canonical form; conjugator stored reduced
    seen = {start}
    queue: deque[tuple[BraidWord, tuple[int, ...]]] = deque([(a, ())])
    letters = [k for i in range(1, n) for k in (i, -i)]
    while queue:
        current, g = queue.popleft()
        if len(g) >= max_len:
            continue
        for k in letters:
            if g and g[0] == -k:
                continue
            step = BraidWord(n, (k,))
            nxt = free_reduce(conjugate(current, step))
            key = canonical_form(nxt)
            if key in seen:
                continue
            seen.add(key)
            g2 = (k,) + g
            if key == target:
                return BraidWord(n, g2)
            queue.append((nxt, g2))
    return None


def parse_word(text: str, n: int) -> BraidWord:
    return BraidWord(n, tuple(int(t) for t in text.split()))
