"""Zariski-van Kampen presentations and the invariants computed from them."""

from __future__ import annotations

import itertools
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .braid import inverse
from .factorization import Factorization, PuiseuxFactorization, is_projective
from .free_group import (
    act_letters,
    cyclic_reduce_letters,
    invert_letters,
    reduce_letters,
)

Letters = tuple[int, ...]


@dataclass(frozen=True)
class Presentation:
    generators: int
    relators: tuple[Letters, ...] = ()

    def __post_init__(self) -> None:
        if self.generators < 0:
            raise ValueError("generator count must be nonnegative")
        rels = []
        seen = set()
        for r in self.relators:
            r = reduce_letters(int(k) for k in r)
            for k in r:
                if k == 0 or abs(k) > self.generators:
                    raise ValueError(f"letter {k} outside {self.generators} generators")
            if r and r not in seen:
                seen.add(r)
                rels.append(r)
        object.__setattr__(self, "relators", tuple(rels))

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"rank {self.free_rank} torsion [{', '.join(map(str, self.torsion))}]"


def zvk_affine(f: Factorization, include_last: bool = False) -> Presentation:
    """Relators ``act(mu_i, tau_j) mu_i^-1`` for every factor and i < n."""
    n = f.strands
    top = n if include_last else n - 1
    rels = []
    for t in f.factors:
        for i in range(1, top + 1):
            rels.append(reduce_letters(act_letters((i,), t.letters) + (-i,)))
    return Presentation(n, tuple(rels))


def zvk_projective(f: Factorization, include_last: bool = False) -> Presentation:
    if not is_projective(f):
        warnings.warn("factorization is not projective: its product is not the full twist", stacklevel=2)
    affine = zvk_affine(f, include_last=include_last)
    return Presentation(f.strands, affine.relators + (tuple(range(1, f.strands + 1)),))


def zvk_puiseux(p: PuiseuxFactorization, full_blocks: bool = False) -> Presentation:
    """Relators from the positive blocks, transported by the conjugating braids.

    With ``tau = alpha beta alpha^-1`` the relator for strand ``k`` of a block is
    ``act(act(mu_k, beta) mu_k^-1, alpha^-1)``. The last strand of each block
    is skipped unless ``full_blocks``: the block's product of meridians is
    fixed by beta, so that relator is a consequence of the others.
    """
    n = p.strands
    rels = []
    for entry in p.entries:
        back = inverse(entry.alpha).letters
        for b in entry.blocks:
            stop = b.start + b.width if full_blocks else b.start + b.width - 1
            shifted = tuple(k + b.start - 1 for k in b.beta.letters)
            for k in range(b.start, stop):
                local = reduce_letters(act_letters((k,), shifted) + (-k,))
                rels.append(act_letters(local, back))
    return Presentation(n, tuple(rels))


# --- Tietze moves ---------------------------------------------------------


def _cyclic_key(r: Letters) -> Letters:
    """Representative of ``r`` up to rotation and inversion."""
    best = None
    for w in (r, invert_letters(r)):
        for i in range(len(w)):
            rot = w[i:] + w[:i]
            if best is None or rot < best:
                best = rot
    return best or ()


def _normalize(rels: Sequence[Letters]) -> list[Letters]:
    out = []
    seen = set()
    for r in rels:
        r = cyclic_reduce_letters(r)
        if not r:
            continue
        key = _cyclic_key(r)
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def _eliminate_once(g: int, rels: list[Letters], max_length: int) -> Optional[tuple[int, list[Letters]]]:
    candidates = []
    for idx, r in enumerate(rels):
        for x in {abs(k) for k in r}:
            if sum(1 for k in r if abs(k) == x) == 1:
                candidates.append((len(r), idx, x))
    for _, idx, x in sorted(candidates):
        r = rels[idx]
        pos = next(i for i, k in enumerate(r) if abs(k) == x)
        rot = r[pos:] + r[:pos]
        rest = rot[1:]
        # x^e rest = 1  =>  x = rest^-1 (e = 1) or x = rest (e = -1)
        value = invert_letters(rest) if rot[0] > 0 else rest
        others = [s for j, s in enumerate(rels) if j != idx]
        new = []
        for s in others:
            out: list[int] = []
            for k in s:
                if abs(k) == x:
                    out.extend(value if k > 0 else invert_letters(value))
                else:
                    out.append(k)
            new.append(reduce_letters(out))
        if sum(len(s) for s in new) > max_length:
            continue
        renumber = lambda k: k if abs(k) < x else (k - 1 if k > 0 else k + 1)  # noqa: E731
        new = [tuple(renumber(k) for k in s) for s in new]
        return g - 1, _normalize(new)
    return None


def _find_cyclic(hay: Letters, needle: Letters) -> int:
    """Start of ``needle`` in the cyclic word ``hay``, or -1."""
    m, L = len(hay), len(needle)
    if L == 0 or L > m:
        return -1
    doubled = hay + hay[: L - 1]
    for i in range(m):
        if doubled[i : i + L] == needle:
            return i
    return -1


def _substitute_once(rels: list[Letters]) -> Optional[list[Letters]]:
    order = sorted(range(len(rels)), key=lambda i: len(rels[i]))
    for a in order:
        r = rels[a]
        rotations = []
        for w in (r, invert_letters(r)):
            for i in range(len(w)):
                rotations.append(w[i:] + w[:i])
        for b in order:
            if a == b or len(rels[b]) < len(r):
                continue
            s = rels[b]
            for rot in rotations:
                for L in range(len(r), len(r) // 2, -1):
                    u, v = rot[:L], rot[L:]
                    pos = _find_cyclic(s, u)
                    if pos < 0:
                        continue
                    # u v = 1, so u = v^-1: replace u inside s
                    s_rot = s[pos:] + s[:pos]
                    replaced = reduce_letters(invert_letters(v) + s_rot[L:])
                    replaced = cyclic_reduce_letters(replaced)
                    if len(replaced) < len(s):
                        new = list(rels)
                        new[b] = replaced
                        return _normalize(new)
    return None


def tietze_simplify(p: Presentation, budget: int = 200) -> Presentation:
    """Heuristic Tietze simplification; the result is isomorphic, not minimal."""
    g = p.generators
    rels = _normalize(p.relators)
    cap = max(4 * sum(len(r) for r in rels), 64)
    for _ in range(budget):
        step = _eliminate_once(g, rels, cap)
        if step is not None:
            g, rels = step
            continue
        new = _substitute_once(rels)
        if new is None:
            break
        rels = new
    return Presentation(g, tuple(rels))


# --- abelianization -------------------------------------------------------


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (length min(rows, cols), nonnegative)."""
    A = [[int(x) for x in row] for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag = []
    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return diag + [0] * (min(rows, cols) - t)
            i, j = pivot
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
            p = A[t][t]
            done = True
            for i in range(t + 1, rows):
                q = A[i][t] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]))
    return diag


def relation_matrix(p: Presentation) -> list[list[int]]:
    rows = []
    for r in p.relators:
        row = [0] * p.generators
        for k in r:
            row[abs(k) - 1] += 1 if k > 0 else -1
        rows.append(row)
    return rows


def abelianize(p: Presentation) -> AbelianInvariants:
    rows = relation_matrix(p)
    diag = smith_normal_form(rows) if rows and p.generators else []
    nonzero = [d for d in diag if d]
    return AbelianInvariants(p.generators - len(nonzero), tuple(sorted(d for d in nonzero if d > 1)))


# --- homomorphisms into finite permutation groups ---------------------------


PARALLEL_THRESHOLD = 10**5


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PermutationGroup:
    """Finite permutation group closed from ``generators`` (0-based image tuples)."""

    name: str
    elements: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.elements)


def permutation_group(name: str, gens: Sequence[Sequence[int]]) -> PermutationGroup:
    gens = [tuple(g) for g in gens]
    degree = len(gens[0])
    ident = tuple(range(degree))
    elements = [ident]
    seen = {ident}
    i = 0
    while i < len(elements):
        g = elements[i]
        for s in gens:
            h = tuple(s[x] for x in g)
            if h not in seen:
                seen.add(h)
                elements.append(h)
        i += 1
    return PermutationGroup(name, tuple(sorted(elements)))


def symmetric_group(n: int) -> PermutationGroup:
    if n == 1:
        return permutation_group("S1", [(0,)])
    swap = (1, 0) + tuple(range(2, n))
    cycle = tuple(range(1, n)) + (0,)
    return permutation_group(f"S{n}", [swap, cycle])


def _tables(group: PermutationGroup) -> tuple[list[list[int]], list[int]]:
    index = {g: i for i, g in enumerate(group.elements)}
    mul = [[index[tuple(b[x] for x in a)] for b in group.elements] for a in group.elements]
    ident = index[tuple(range(len(group.elements[0])))]
    inv = [row.index(ident) for row in mul]
    return mul, inv


def _count_from(args) -> int:
    first, g, rels_by_level, mul, inv, nonabelian_only, size = args
    ident = next(i for i in range(size) if all(mul[i][j] == j for j in range(size)))
    assignment = [0] * g
    assignment[0] = first

    def evaluate(r: Letters) -> int:
        x = ident
        for k in r:
            v = assignment[abs(k) - 1]
            x = mul[x][v if k > 0 else inv[v]]
        return x

    def commuting() -> bool:
        vals = set(assignment)
        return all(mul[a][b] == mul[b][a] for a, b in itertools.combinations(vals, 2))

    def rec(level: int) -> int:
        for r in rels_by_level[level]:
            if evaluate(r) != ident:
                return 0
        if level == g - 1:
            if nonabelian_only and commuting():
                return 0
            return 1
        total = 0
        for v in range(size):
            assignment[level + 1] = v
            total += rec(level + 1)
        return total

    return rec(0)


def count_homs(
    p: Presentation,
    target: PermutationGroup,
    nonabelian_only: bool = False,
    max_assignments: int = 10**9,
    workers: int = 1,
) -> int:
    """Number of homomorphisms from ``p`` to ``target`` (optionally with nonabelian image)."""
    g = p.generators
    size = len(target)
    if g == 0:
        return 0 if nonabelian_only else 1
    total_assignments = size**g
    if total_assignments > max_assignments:
        raise BudgetExceeded(f"{size}^{g} assignments exceed the budget {max_assignments}")
    if total_assignments > 10**8:
        warnings.warn(f"enumerating {total_assignments} assignments", stacklevel=2)
    mul, inv = _tables(target)
    rels_by_level: list[list[Letters]] = [[] for _ in range(g)]
    for r in p.relators:
        rels_by_level[max(abs(k) for k in r) - 1].append(r)
    jobs = [(v, g, rels_by_level, mul, inv, nonabelian_only, size) for v in range(size)]
    # below this a process pool costs more than it saves
    if workers > 1 and total_assignments >= PARALLEL_THRESHOLD:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(_count_from, jobs))
    return sum(_count_from(job) for job in jobs)


# --- text format ----------------------------------------------------------


def _sorted_relators(p: Presentation) -> list[Letters]:
    return sorted(p.relators, key=lambda r: (len(r), r))


def format_presentation(p: Presentation) -> str:
    lines = [f"gens {p.generators}"]
    for r in _sorted_relators(p):
        lines.append(" ".join(["rel", *map(str, r)]))
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    g: Optional[int] = None
    rels: list[Letters] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "gens" and len(rest) == 1 and g is None:
                g = int(rest[0])
            elif head == "rel" and g is not None:
                rel = tuple(int(x) for x in rest)
                bad = [k for k in rel if k == 0 or abs(k) > g]
                if bad:
                    raise ValueError(f"letter {bad[0]} outside {g} generators")
                rels.append(rel)
            else:
                raise ValueError(f"unexpected line {line!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if g is None:
        raise ValueError("missing 'gens <int>' line")
    return Presentation(g, tuple(rels))
