"""Free groups on meridians and the right action of B_n on them.

Letter ``k`` of a free word stands for mu_|k| raised to sign(k). The braid
generator sigma_j acts by

    mu_j     -> mu_j mu_{j+1} mu_j^-1
    mu_{j+1} -> mu_j
    mu_i     -> mu_i              (otherwise)

and a braid word acts letter by letter from left to right, so that
``act(w, a * b) == act(act(w, a), b)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .braid import BraidWord, free_reduce, inverse

Letters = tuple[int, ...]


def reduce_letters(letters: Iterable[int]) -> Letters:
    stack: list[int] = []
    for k in letters:
        if stack and stack[-1] == -k:
            stack.pop()
        else:
            stack.append(k)
    return tuple(stack)


def invert_letters(letters: Sequence[int]) -> Letters:
    return tuple(-k for k in reversed(letters))


def cyclic_reduce_letters(letters: Sequence[int]) -> Letters:
    w = reduce_letters(letters)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


@dataclass(frozen=True)
class FreeWord:
    rank: int
    letters: Letters = ()

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        letters = tuple(int(k) for k in self.letters)
        for k in letters:
            if k == 0 or abs(k) > self.rank:
                raise ValueError(f"letter {k} is not a generator of F_{self.rank}")
        object.__setattr__(self, "letters", reduce_letters(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        return FreeWord(self.rank, self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(self.rank, invert_letters(self.letters))

    def __str__(self) -> str:
        return " ".join(str(k) for k in self.letters)


GeometricTuple = tuple[FreeWord, ...]


def reduce(w: Union[FreeWord, Sequence[int]], rank: Optional[int] = None) -> FreeWord:
    if isinstance(w, FreeWord):
        return FreeWord(w.rank, w.letters)
    letters = tuple(w)
    if rank is None:
        rank = max((abs(k) for k in letters), default=0)
    return FreeWord(rank, letters)


def generator(i: int, rank: int) -> FreeWord:
    return FreeWord(rank, (i,))


def delta_word(n: int) -> FreeWord:
    return FreeWord(n, tuple(range(1, n + 1)))


def standard_tuple(n: int) -> GeometricTuple:
    return tuple(generator(i, n) for i in range(1, n + 1))


def _letter_images(k: int) -> dict[int, Letters]:
    """Substitution table (on signed generators) for one braid letter."""
    j = abs(k)
    if k > 0:
        images = {j: (j, j + 1, -j), j + 1: (j,)}
    else:
        images = {j: (j + 1,), j + 1: (-(j + 1), j, j + 1)}
    for g, img in list(images.items()):
        images[-g] = invert_letters(img)
    return images


def _apply_letter(word: Sequence[int], k: int) -> Letters:
    images = _letter_images(k)
    out: list[int] = []
    for x in word:
        img = images.get(x)
        if img is None:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        else:
            for y in img:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
    return tuple(out)


def act_letters(word: Sequence[int], braid_letters: Sequence[int]) -> Letters:
    w = reduce_letters(word)
    for k in braid_letters:
        w = _apply_letter(w, k)
    return w


def act(w: FreeWord, t: BraidWord) -> FreeWord:
    if w.rank != t.strands:
        raise ValueError(f"rank mismatch: F_{w.rank} vs B_{t.strands}")
    return FreeWord(w.rank, act_letters(w.letters, t.letters))


def act_tuple(ws: Sequence[FreeWord], t: BraidWord) -> GeometricTuple:
    return tuple(act(w, t) for w in ws)


@lru_cache(maxsize=1024)
def action_images(n: int, braid_letters: Letters) -> tuple[Letters, ...]:
    """``act(mu_i, braid)`` for i = 1..n, as letter tuples."""
    images = [(i,) for i in range(1, n + 1)]
    for k in braid_letters:
        images = [_apply_letter(img, k) for img in images]
    return tuple(images)


def is_meridian_of(w: FreeWord) -> Optional[int]:
    core = cyclic_reduce_letters(w.letters)
    if len(core) == 1 and core[0] > 0:
        return core[0]
    return None


def _fold_is_rose(words: Sequence[Letters], n: int) -> bool:
    """Stallings folding: do ``words`` generate all of F_n?"""
    parent: list[int] = [0]
    adj: list[dict[int, int]] = [{}]
    pending: list[tuple[int, int]] = []

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def new_vertex() -> int:
        parent.append(len(parent))
        adj.append({})
        return len(parent) - 1

    def link(u: int, lab: int, v: int) -> None:
        for a, l, b in ((u, lab, v), (v, -lab, u)):
            a = find(a)
            old = adj[a].get(l)
            if old is None:
                adj[a][l] = b
            elif find(old) != find(b):
                pending.append((old, b))

    def merge_pending() -> None:
        while pending:
            a, b = pending.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if len(adj[a]) < len(adj[b]):
                a, b = b, a
            parent[b] = a
            moved, adj[b] = adj[b], {}
            for lab, w in moved.items():
                link(a, lab, w)

    for word in words:
        if not word:
            continue
        u = 0
        for idx, lab in enumerate(word):
            v = 0 if idx == len(word) - 1 else new_vertex()
            link(u, lab, v)
            u = v
        merge_pending()
    roots = {find(v) for v in range(len(parent))}
    if len(roots) != 1:
        return False
    labels = {abs(l) for l in adj[find(0)]}
    return labels == set(range(1, n + 1))


def _nielsen_reduce(entries: list[Letters]) -> list[Letters]:
    """Length-decreasing Nielsen moves until none applies."""
    entries = [reduce_letters(e) for e in entries if reduce_letters(e)]
    improved = True
    while improved:
        improved = False
        for i in range(len(entries)):
            for j in range(len(entries)):
                if i == j:
                    continue
                u, v = entries[i], entries[j]
                for cand in (u + v, u + invert_letters(v), v + u, invert_letters(v) + u):
                    c = reduce_letters(cand)
                    if len(c) < len(u):
                        entries[i] = c
                        improved = True
                        break
                if improved:
                    break
            if improved:
                entries = [e for e in entries if e]
                break
    return entries


def nielsen_is_basis(t: Sequence[FreeWord]) -> bool:
    if not t:
        return True
    n = t[0].rank
    if any(w.rank != n for w in t) or len(t) != n:
        return False
    reduced = _nielsen_reduce([w.letters for w in t])
    if len(reduced) == n and all(len(e) == 1 for e in reduced):
        return sorted(abs(e[0]) for e in reduced) == list(range(1, n + 1))
    # a Nielsen-reduced tuple that is not a permuted generating set can still be
    # short of N2-reduced; folding settles it exactly
    return len(reduced) == n and _fold_is_rose(reduced, n)


def is_geometric(t: Sequence[FreeWord]) -> bool:
    if not t:
        return True
    n = t[0].rank
    if len(t) != n or any(w.rank != n for w in t):
        return False
    indices = [is_meridian_of(w) for w in t]
    if any(i is None for i in indices) or len(set(indices)) != n:
        return False
    prod = reduce_letters(tuple(k for w in t for k in w.letters))
    if prod != delta_word(n).letters:
        return False
    return nielsen_is_basis(t)


def _total_length(entries: Sequence[Letters]) -> int:
    return sum(len(e) for e in entries)


def find_braid(t: Sequence[FreeWord], max_len: int) -> Optional[BraidWord]:
    """Braid ``g`` with ``act(standard_tuple, g) == t``.

    Length-decreasing moves are tried first; if they stall, a breadth-first
    search over braid words of length at most ``max_len`` takes over.
    Returns None if the search bound is exhausted.
    """
    if not t:
        raise ValueError("empty tuple")
    n = t[0].rank
    if not is_geometric(t):
        raise ValueError("tuple is not a geometric basis")
    standard = tuple((i,) for i in range(1, n + 1))
    moves = [k for i in range(1, n) for k in (i, -i)]

    # act(t, h) == standard  <=>  g * h == 1
    current = tuple(w.letters for w in t)
    path: list[int] = []
    while current != standard:
        best = None
        for k in moves:
            nxt = tuple(_apply_letter(e, k) for e in current)
            if best is None or _total_length(nxt) < _total_length(best[1]):
                best = (k, nxt)
        if best is None or _total_length(best[1]) >= _total_length(current):
            break
        path.append(best[0])
        current = best[1]
    if current == standard:
        return free_reduce(inverse(BraidWord(n, tuple(path))))

    start = tuple(w.letters for w in t)
    seen = {start}
    queue: deque[tuple[Letters, tuple[Letters, ...]]] = deque([((), start)])
    while queue:
        h, state = queue.popleft()
        if len(h) >= max_len:
            continue
        for k in moves:
            if h and h[-1] == -k:
                continue
            nxt = tuple(_apply_letter(e, k) for e in state)
            if nxt in seen:
                continue
            seen.add(nxt)
            h2 = h + (k,)
            if nxt == standard:
                return inverse(BraidWord(n, h2))
            queue.append((h2, nxt))
    return None


def parse_word(text: str, rank: int) -> FreeWord:
    return FreeWord(rank, tuple(int(tok) for tok in text.split()))
