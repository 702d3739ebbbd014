"""Braid monodromy factorizations and the Hurwitz action on them."""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .braid import (
    BraidWord,
    Permutation,
    braid_equal,
    canonical_form,
    compose,
    conjugate,
    free_reduce,
    full_twist,
    inverse,
    is_syntactically_positive,
    permutation_of,
    product,
    shift,
)


@dataclass(frozen=True)
class Factorization:
    strands: int
    factors: tuple[BraidWord, ...] = ()

    def __post_init__(self) -> None:
        factors = tuple(self.factors)
        for f in factors:
            if f.strands != self.strands:
                raise ValueError(f"factor on {f.strands} strands in a factorization on {self.strands}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_lists(cls, n: int, words: Sequence[Sequence[int]]) -> "Factorization":
        return cls(n, tuple(BraidWord(n, tuple(w)) for w in words))

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[BraidWord]:
        return iter(self.factors)


@dataclass(frozen=True)
class Block:
    start: int  # 1-based first strand
    width: int
    beta: BraidWord

    def __post_init__(self) -> None:
        if self.start < 1 or self.width < 1:
            raise ValueError("block start and width must be positive")
        if self.beta.strands != self.width:
            raise ValueError(f"beta on {self.beta.strands} strands in a block of width {self.width}")
        if not is_syntactically_positive(self.beta):
            raise ValueError("block braids must be positive words")


@dataclass(frozen=True)
class BlockedPuiseuxFactor:
    alpha: BraidWord
    blocks: tuple[Block, ...]

    def __post_init__(self) -> None:
        blocks = tuple(sorted(self.blocks, key=lambda b: b.start))
        n = self.alpha.strands
        end = 0
        for b in blocks:
            if b.start <= end:
                raise ValueError(f"block starting at strand {b.start} overlaps the previous one")
            end = b.start + b.width - 1
            if end > n:
                raise ValueError(f"block ending at strand {end} exceeds {n} strands")
        object.__setattr__(self, "blocks", blocks)

    def central_braid(self) -> BraidWord:
        n = self.alpha.strands
        return product((shift(b.beta, b.start - 1, n) for b in self.blocks), n)

    def braid(self) -> BraidWord:
        return conjugate(self.central_braid(), self.alpha)


@dataclass(frozen=True)
class PuiseuxFactorization:
    strands: int
    entries: tuple[BlockedPuiseuxFactor, ...] = ()

    def __post_init__(self) -> None:
        for e in self.entries:
            if e.alpha.strands != self.strands:
                raise ValueError("entry strand count mismatch")


def expand(p: PuiseuxFactorization) -> Factorization:
    """Factor i is ``alpha_i * (embedded betas) * alpha_i^-1``."""
    return Factorization(p.strands, tuple(e.braid() for e in p.entries))


def pseudo_coxeter(f: Factorization) -> BraidWord:
    return product(f.factors, f.strands)


def is_projective(f: Factorization) -> bool:
    return braid_equal(pseudo_coxeter(f), full_twist(f.strands))


def _check_index(f: Factorization, i: int) -> None:
    if not 1 <= i < len(f.factors):
        raise IndexError(f"Hurwitz move index {i} out of range 1..{len(f.factors) - 1}")


def hurwitz_move(f: Factorization, i: int) -> Factorization:
    """(.., t_i, t_{i+1}, ..) -> (.., t_i t_{i+1} t_i^-1, t_i, ..)."""
    _check_index(f, i)
    a, b = f.factors[i - 1], f.factors[i]
    factors = list(f.factors)
    factors[i - 1 : i + 1] = [conjugate(b, a), a]
    return Factorization(f.strands, tuple(factors))


def hurwitz_move_inverse(f: Factorization, i: int) -> Factorization:
    """(.., t_i, t_{i+1}, ..) -> (.., t_{i+1}, t_{i+1}^-1 t_i t_{i+1}, ..)."""
    _check_index(f, i)
    a, b = f.factors[i - 1], f.factors[i]
    factors = list(f.factors)
    factors[i - 1 : i + 1] = [b, conjugate(a, inverse(b))]
    return Factorization(f.strands, tuple(factors))


def global_conjugate(f: Factorization, g: BraidWord) -> Factorization:
    return Factorization(f.strands, tuple(conjugate(t, g) for t in f.factors))


def canonical_fingerprint(f: Factorization) -> tuple:
    return tuple(canonical_form(t) for t in f.factors)


@dataclass
class Orbit:
    """Result of a budgeted orbit search; ``states`` keeps discovery order."""

    states: dict = field(default_factory=dict)
    complete: bool = False

    def __len__(self) -> int:
        return len(self.states)

    @property
    def fingerprints(self) -> set:
        return set(self.states)


def hurwitz_orbit(f: Factorization, max_states: int) -> Orbit:
    """Breadth-first closure under Hurwitz moves and their inverses."""
    n = f.strands
    orbit = Orbit()
    start = Factorization(n, tuple(free_reduce(t) for t in f.factors))
    orbit.states[canonical_fingerprint(start)] = start
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for i in range(1, len(current)):
            for move in (hurwitz_move, hurwitz_move_inverse):
                nxt = move(current, i)
                nxt = Factorization(n, tuple(free_reduce(t) for t in nxt.factors))
                key = canonical_fingerprint(nxt)
                if key in orbit.states:
                    continue
                if len(orbit.states) >= max_states:
                    return orbit
                orbit.states[key] = nxt
                queue.append(nxt)
    orbit.complete = True
    return orbit


def _perm_group(perms: Sequence[Permutation], n: int) -> set[tuple[int, ...]]:
    ident = tuple(range(1, n + 1))
    gens = [p.images for p in perms]
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = tuple(s[g[i] - 1] for i in range(n))
                if h not in group:
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    return group


MAX_NAIVE_DEGREE = 9


def perm_monodromy_order(f: Factorization) -> int:
    if f.strands > MAX_NAIVE_DEGREE:
        raise ValueError(f"naive closure supports at most {MAX_NAIVE_DEGREE} strands")
    return len(_perm_group([permutation_of(t) for t in f.factors], f.strands))


def strand_orbits(f: Factorization) -> list[set[int]]:
    n = f.strands
    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in f.factors:
        p = permutation_of(t)
        for i in range(1, n + 1):
            a, b = find(i), find(p(i))
            if a != b:
                parent[b] = a
    groups: dict[int, set[int]] = {}
    for i in range(1, n + 1):
        groups.setdefault(find(i), set()).add(i)
    return sorted(groups.values(), key=min)


def orbit_count_components(f: Factorization) -> int:
    return len(strand_orbits(f))


class Verdict(enum.Enum):
    EQUIVALENT = "equivalent"
    DISTINCT = "distinct"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


def _perm_tuple_orbit(perms: tuple, n: int, max_states: int) -> tuple[set, bool]:
    def mul(p, q):  # p then q
        return tuple(q[p[i] - 1] for i in range(n))

    def inv(p):
        out = [0] * n
        for i, j in enumerate(p, start=1):
            out[j - 1] = i
        return tuple(out)

    seen = {perms}
    queue = deque([perms])
    while queue:
        cur = queue.popleft()
        for i in range(len(cur) - 1):
            a, b = cur[i], cur[i + 1]
            for pair in ((mul(mul(a, b), inv(a)), a), (b, mul(mul(inv(b), a), b))):
                nxt = cur[:i] + pair + cur[i + 2 :]
                if nxt in seen:
                    continue
                if len(seen) >= max_states:
                    return seen, False
                seen.add(nxt)
                queue.append(nxt)
    return seen, True


def _perm_tuples_separate(f1: Factorization, f2: Factorization, max_states: int) -> bool:
    """True if no Hurwitz move plus simultaneous conjugation matches the strand permutations."""
    n = f1.strands
    if n > 6:
        return False
    t1 = tuple(permutation_of(t).images for t in f1.factors)
    t2 = tuple(permutation_of(t).images for t in f2.factors)
    orbit, complete = _perm_tuple_orbit(t1, n, max_states)
    if not complete:
        return False
    for g in itertools.permutations(range(1, n + 1)):
        ginv = [0] * n
        for i, j in enumerate(g, start=1):
            ginv[j - 1] = i
        # g^-1 p g, read left to right
        conj = tuple(tuple(g[p[ginv[i] - 1] - 1] for i in range(n)) for p in t2)
        if conj in orbit:
            return False
    return True


def _conjugators(n: int, max_len: int) -> list[BraidWord]:
    """Braid words up to ``max_len`` letters, one per group element reached."""
    ident = BraidWord(n, ())
    out = [ident]
    seen = {canonical_form(ident)}
    frontier = [ident]
    letters = [k for i in range(1, n) for k in (i, -i)]
    for _ in range(max_len):
        nxt = []
        for g in frontier:
            for k in letters:
                h = free_reduce(compose(g, BraidWord(n, (k,))))
                key = canonical_form(h)
                if key in seen:
                    continue
                seen.add(key)
                out.append(h)
                nxt.append(h)
        frontier = nxt
    return out


def same_orbit(
    f1: Factorization,
    f2: Factorization,
    max_states: int = 1000,
    conj_len: int = 2,
    workers: int = 1,
) -> Verdict:
    """Decide Hurwitz equivalence up to global conjugation, honestly.

    DISTINCT is returned only when an invariant separates the two; a search
    that runs out of budget gives UNKNOWN.
    """
    if f1.strands != f2.strands or len(f1) != len(f2):
        return Verdict.DISTINCT
    targets = {
        canonical_fingerprint(global_conjugate(f2, g)) for g in _conjugators(f2.strands, conj_len)
    }
    orbit = hurwitz_orbit(f1, max_states)
    if targets & orbit.fingerprints:
        return Verdict.EQUIVALENT
    if _perm_tuples_separate(f1, f2, max_states):
        return Verdict.DISTINCT

    from . import presentation as pr

    g1, g2 = pr.zvk_affine(f1), pr.zvk_affine(f2)
    if pr.abelianize(g1) != pr.abelianize(g2):
        return Verdict.DISTINCT
    for target in (pr.symmetric_group(3), pr.symmetric_group(4)):
        for nonabelian in (False, True):
            try:
                c1 = pr.count_homs(g1, target, nonabelian_only=nonabelian, workers=workers)
                c2 = pr.count_homs(g2, target, nonabelian_only=nonabelian, workers=workers)
            except pr.BudgetExceeded:
                continue
            if c1 != c2:
                return Verdict.DISTINCT
    return Verdict.UNKNOWN


def parse(text: str) -> Factorization:
    """Read the ``n <int>`` / ``factor <ints>`` text format."""
    n: Optional[int] = None
    factors: list[BraidWord] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "n":
                if n is not None or len(rest) != 1:
                    raise ValueError("expected a single 'n <int>' line")
                n = int(rest[0])
            elif head == "factor":
                if n is None:
                    raise ValueError("'factor' before 'n'")
                factors.append(BraidWord(n, tuple(int(x) for x in rest)))
            else:
                raise ValueError(f"unknown keyword {head!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if n is None:
        raise ValueError("missing 'n <int>' line")
    return Factorization(n, tuple(factors))


def format_factorization(f: Factorization) -> str:
    lines = [f"n {f.strands}"]
    for t in f.factors:
        lines.append(" ".join(["factor", *map(str, t.letters)]))
    return "\n".join(lines) + "\n"


def parse_puiseux(text: str) -> PuiseuxFactorization:
    """Read ``n <int>``, then per entry ``entry <alpha ints>`` and ``block <start> <width> <beta ints>`` lines."""
    n: Optional[int] = None
    entries: list[tuple[BraidWord, list[Block]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "n":
                if n is not None or len(rest) != 1:
                    raise ValueError("expected a single 'n <int>' line")
                n = int(rest[0])
            elif head == "entry":
                if n is None:
                    raise ValueError("'entry' before 'n'")
                entries.append((BraidWord(n, tuple(int(x) for x in rest)), []))
            elif head == "block":
                if not entries:
                    raise ValueError("'block' before any 'entry'")
                if len(rest) < 2:
                    raise ValueError("expected 'block <start> <width> <beta ints>'")
                start, width = int(rest[0]), int(rest[1])
                entries[-1][1].append(Block(start, width, BraidWord(width, tuple(int(x) for x in rest[2:]))))
            else:
                raise ValueError(f"unknown keyword {head!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if n is None:
        raise ValueError("missing 'n <int>' line")
    return PuiseuxFactorization(n, tuple(BlockedPuiseuxFactor(a, tuple(bs)) for a, bs in entries))


def format_puiseux(p: PuiseuxFactorization) -> str:
    lines = [f"n {p.strands}"]
    for e in p.entries:
        lines.append(" ".join(["entry", *map(str, e.alpha.letters)]))
        for b in e.blocks:
            lines.append(" ".join(["block", str(b.start), str(b.width), *map(str, b.beta.letters)]))
    return "\n".join(lines) + "\n"
