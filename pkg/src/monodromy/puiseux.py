"""Local braids of plane curve germs given by truncated Puiseux branches.

A branch of multiplicity ``m`` is ``y = sum a_e x^e`` with rational exponents
whose denominators divide ``m``. Over the circle ``x = r exp(2 pi i s)`` its
``m`` strands are

    y_k(s) = center + sum a_e r^e exp(2 pi i e (s + k)),   k = 0..m-1,

and strand ``k`` ends where strand ``k+1 (mod m)`` starts. The tracker reads
an Artin word off these strands: positions are ordered by real part (ties
broken by imaginary part), and when neighbours at positions i, i+1 swap, the
letter is +i if the strand with the smaller imaginary part is the one moving
right, -i otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .braid import BraidWord, block_embed, conjugacy_search, exponent_sum, permutation_of

Exponent = Union[Fraction, float]
INFINITY = math.inf

# ties in real part are broken by imaginary part: the ordering key is the real
# part of a projection tilted by this much
_TILT = 1e-9
# size of the generic isotopy relative to the smallest strand separation
_PERTURBATION = 1e-3


class TrackingError(RuntimeError):
    pass


@dataclass(frozen=True)
class PuiseuxBranch:
    multiplicity: int
    terms: tuple[tuple[Fraction, complex], ...] = ()

    def __post_init__(self) -> None:
        m = self.multiplicity
        if m < 1:
            raise ValueError("multiplicity must be positive")
        terms = tuple((Fraction(e), complex(a)) for e, a in self.terms)
        for (e, _), (f, _) in zip(terms, terms[1:]):
            if f <= e:
                raise ValueError("exponents must be strictly increasing")
        for e, _ in terms:
            if m % e.denominator:
                raise ValueError(f"exponent {e} has a denominator not dividing {m}")
            if e < 0:
                raise ValueError(f"negative exponent {e}")
        object.__setattr__(self, "terms", terms)
        numerators = [int(e * m) for e, a in terms if a != 0]
        if m > 1 and math.gcd(m, *numerators) != 1:
            warnings.warn(
                f"branch of multiplicity {m} is not in reduced form: its strands coincide",
                stacklevel=3,
            )

    def nonzero_terms(self) -> list[tuple[Fraction, complex]]:
        return [(e, a) for e, a in self.terms if a != 0]


@dataclass(frozen=True)
class LocalCurve:
    branches: tuple[PuiseuxBranch, ...]
    center: complex = 0j

    def __post_init__(self) -> None:
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "center", complex(self.center))
        if not self.branches:
            raise ValueError("a local curve needs at least one branch")

    @property
    def degree(self) -> int:
        return sum(b.multiplicity for b in self.branches)


@dataclass(frozen=True)
class TrackerConfig:
    radius: float = 1.0
    samples: int = 2000
    tolerance: float = 1e-9
    max_refinements: int = 40

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.samples < 64:
            raise ValueError("at least 64 samples per revolution are required")
        if not 0 < self.tolerance < self.radius:
            raise ValueError("tolerance must be positive and smaller than the radius")


# --- exponents --------------------------------------------------------------


def nu_x(terms: Sequence[tuple[Exponent, complex]], tol: float = 0.0) -> Exponent:
    """x-order of a fractional series: least exponent with a nonzero coefficient."""
    orders = [e for e, a in terms if abs(a) > tol]
    return min(orders) if orders else INFINITY


def characteristic_exponents(b: PuiseuxBranch) -> list[Fraction]:
    m = b.multiplicity
    d = m
    out = []
    for e, _ in b.nonzero_terms():
        if d == 1:
            break
        ell = int(e * m)
        if ell % d:
            out.append(e)
            d = math.gcd(d, ell)
    return out


def _coefficient_scale(*branches: PuiseuxBranch) -> float:
    return max((abs(a) for b in branches for _, a in b.terms), default=1.0)


def coincidence_exponent(bj: PuiseuxBranch, bk: PuiseuxBranch, rtol: float = 1e-12) -> Exponent:
    """Maximal order of ``h_j(x^{1/m_j}) - h_k(zeta x^{1/m_k})`` over m_k-th roots zeta."""
    tol = rtol * _coefficient_scale(bj, bk)
    mk = bk.multiplicity
    best: Exponent = -1
    for q in range(mk):
        diff: dict[Fraction, complex] = {}
        for e, a in bj.nonzero_terms():
            diff[e] = diff.get(e, 0) + a
        for e, a in bk.nonzero_terms():
            ell = int(e * mk)
            zeta = complex(np.exp(2j * np.pi * q * ell / mk))
            diff[e] = diff.get(e, 0) - a * zeta
        order = nu_x(sorted(diff.items()), tol)
        if order == INFINITY:
            raise ValueError("branches coincide: identical root sets")
        best = max(best, order)
    return best


def essential_exponents(c: LocalCurve) -> list[set[Fraction]]:
    kept = []
    for j, b in enumerate(c.branches):
        s = set(characteristic_exponents(b))
        for k, other in enumerate(c.branches):
            if k != j:
                s.add(coincidence_exponent(b, other))
        kept.append(s)
    return kept


def essential_truncation(c: LocalCurve) -> LocalCurve:
    """Keep, on each branch, only characteristic and coincidence exponents."""
    kept = essential_exponents(c)
    branches = tuple(
        PuiseuxBranch(b.multiplicity, tuple((e, a) for e, a in b.terms if e in s and a != 0))
        for b, s in zip(c.branches, kept)
    )
    return LocalCurve(branches, c.center)


# --- strands ----------------------------------------------------------------


class _Strands:
    """Vectorised evaluation of all strands, with an optional generic isotopy."""

    def __init__(self, curve: LocalCurve, radius: float):
        self.center = curve.center
        self.pieces = []  # (label offset, m, exponents, scaled coefficients)
        self.labels: list[tuple[int, int]] = []
        for j, b in enumerate(curve.branches):
            terms = b.nonzero_terms()
            exps = np.array([float(e) for e, _ in terms])
            coefs = np.array([a for _, a in terms], dtype=complex) * radius**exps
            self.pieces.append((len(self.labels), b.multiplicity, exps, coefs))
            self.labels.extend((j, k) for k in range(b.multiplicity))
        self.n = len(self.labels)
        idx = np.arange(self.n)
        golden = (math.sqrt(5) - 1) / 2
        self.directions = (0.5 + 0.5 * ((idx * math.sqrt(2)) % 1.0)) * np.exp(2j * np.pi * ((idx * golden) % 1.0))
        self.eta = 0.0

    def exact(self, s: np.ndarray) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.full((len(s), self.n), self.center, dtype=complex)
        for offset, m, exps, coefs in self.pieces:
            if len(exps) == 0:
                continue
            for k in range(m):
                phase = np.exp(2j * np.pi * np.outer(s + k, exps))
                out[:, offset + k] += phase @ coefs
        return out

    def __call__(self, s: np.ndarray) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        z = self.exact(s)
        if self.eta:
            z = z + self.eta * np.outer(np.sin(np.pi * s), self.directions)
        return z

    def successor(self) -> list[int]:
        """Label index reached at s=1 by each label: strand k of a branch becomes k+1."""
        out = []
        for offset, m, _, _ in self.pieces:
            out.extend(offset + (k + 1) % m for k in range(m))
        return out


def _keys(z: np.ndarray) -> np.ndarray:
    return z.real + _TILT * z.imag


def _min_separation(z: np.ndarray) -> float:
    if z.shape[-1] < 2:
        return INFINITY
    diff = np.abs(z[..., :, None] - z[..., None, :])
    n = z.shape[-1]
    diff[..., np.arange(n), np.arange(n)] = np.inf
    return float(diff.min())


@dataclass
class Track:
    word: BraidWord
    start_order: list[int]
    min_separation: float
    refinements: int = 0
    crossings: list[float] = field(default_factory=list)


def track(curve: LocalCurve, cfg: TrackerConfig = TrackerConfig()) -> Track:
    """Follow the strands once around ``|x| = radius`` and record the braid word."""
    strands = _Strands(curve, cfg.radius)
    n = strands.n
    grid = np.linspace(0.0, 1.0, cfg.samples + 1)
    exact = strands.exact(grid)
    if _min_separation(exact[:1]) < cfg.tolerance:
        raise TrackingError("strands collide at s=0: radius outside the stable region or branches not distinct")
    sep = _min_separation(exact)
    if sep < cfg.tolerance:
        raise TrackingError(f"strands come within {sep:.3g} of each other: radius outside the stable region")
    strands.eta = _PERTURBATION * sep if n > 1 else 0.0
    values = strands(grid)
    guard = 0.5 * sep
    letters: list[int] = []
    result = Track(BraidWord(n), list(np.argsort(_keys(values[0]), kind="stable")), sep)

    def crossing(s_a: float, s_b: float, z_a, z_b, pos: int, order_a) -> int:
        a, b = order_a[pos], order_a[pos + 1]
        da = _keys(z_a[a : a + 1])[0] - _keys(z_a[b : b + 1])[0]
        db = _keys(z_b[a : a + 1])[0] - _keys(z_b[b : b + 1])[0]
        t = s_a + (s_b - s_a) * (-da) / (db - da) if db != da else 0.5 * (s_a + s_b)
        z = strands(np.array([t]))[0]
        perp_a = z[a].imag - _TILT * z[a].real
        perp_b = z[b].imag - _TILT * z[b].real
        if abs(perp_a - perp_b) < cfg.tolerance:
            raise TrackingError(f"strands collide near s={t:.6f}")
        result.crossings.append(t)
        return pos + 1 if perp_a < perp_b else -(pos + 1)

    def scan(s_a: float, s_b: float, z_a: np.ndarray, z_b: np.ndarray, depth: int) -> None:
        order_a = np.argsort(_keys(z_a), kind="stable")
        order_b = np.argsort(_keys(z_b), kind="stable")
        moved = float(np.max(np.abs(z_b - z_a)))
        if moved <= guard:
            changed = np.nonzero(order_a != order_b)[0]
            if len(changed) == 0:
                return
            if (
                len(changed) == 2
                and changed[1] == changed[0] + 1
                and order_a[changed[0]] == order_b[changed[1]]
                and order_a[changed[1]] == order_b[changed[0]]
            ):
                letters.append(crossing(s_a, s_b, z_a, z_b, int(changed[0]), order_a))
                return
        if depth >= cfg.max_refinements:
            raise TrackingError(
                f"could not isolate crossings in s in [{s_a:.6g}, {s_b:.6g}] after {depth} refinements"
            )
        result.refinements += 1
        mid = 0.5 * (s_a + s_b)
        z_m = strands(np.array([mid]))[0]
        scan(s_a, mid, z_a, z_m, depth + 1)
        scan(mid, s_b, z_m, z_b, depth + 1)

    for i in range(cfg.samples):
        scan(grid[i], grid[i + 1], values[i], values[i + 1], 0)

    word = BraidWord(n, tuple(letters))
    _check_permutation(word, strands, result.start_order)
    if len(word) % 2 != exponent_sum(word) % 2:
        raise TrackingError("letter count and exponent sum have different parity")
    result.word = word
    return result


def _check_permutation(word: BraidWord, strands: _Strands, start_order: Sequence[int]) -> None:
    position = {label: pos + 1 for pos, label in enumerate(start_order)}
    succ = strands.successor()
    expected = [0] * strands.n
    for label, pos in position.items():
        expected[pos - 1] = position[succ[label]]
    got = list(permutation_of(word).images)
    if got != expected:
        raise TrackingError(f"strand permutation {got} does not match the expected {expected}")


def local_braid(curve: LocalCurve, cfg: TrackerConfig = TrackerConfig()) -> BraidWord:
    return track(curve, cfg).word


@dataclass(frozen=True)
class StabilityCheck:
    word: BraidWord
    half_word: Optional[BraidWord]
    stable: bool
    reason: str = ""


def half_radius_check(curve: LocalCurve, cfg: TrackerConfig = TrackerConfig(), bound: int = 6) -> StabilityCheck:
    """Track at ``cfg.radius`` and at half of it; stable means equal exponent
    sums and a conjugating witness of length at most ``bound``.

    A heuristic: agreement at two radii does not prove the radius is small
    enough, but disagreement does show it is not.
    """
    word = local_braid(curve, cfg)
    try:
        half = local_braid(curve, replace(cfg, radius=cfg.radius / 2))
    except TrackingError as exc:
        return StabilityCheck(word, None, False, f"half radius: {exc}")
    if exponent_sum(half) != exponent_sum(word):
        return StabilityCheck(word, half, False, "exponent sums differ")
    if conjugacy_search(word, half, bound) is None:
        return StabilityCheck(word, half, False, f"no conjugator up to length {bound}")
    return StabilityCheck(word, half, True)


def max_excursion(curve: LocalCurve, cfg: TrackerConfig) -> float:
    strands = _Strands(curve, cfg.radius)
    grid = np.linspace(0.0, 1.0, cfg.samples + 1)
    return float(np.max(np.abs(strands.exact(grid) - curve.center)))


def _lex(z: complex) -> tuple[float, float]:
    return (z.real, z.imag)


def semilocal_braid(curves: Sequence[LocalCurve], cfg: TrackerConfig = TrackerConfig()) -> BraidWord:
    """Local braids of several germs in one fiber, side by side in center order."""
    ordered = sorted(curves, key=lambda c: _lex(c.center))
    centers = [c.center for c in ordered]
    if len(set(centers)) != len(centers):
        raise ValueError("centers must be pairwise distinct")
    if len(ordered) > 1:
        reach = max(max_excursion(c, cfg) for c in ordered)
        gap = min(abs(a - b) for i, a in enumerate(centers) for b in centers[i + 1 :])
        if gap < 4 * reach:
            raise ValueError(
                f"strand clusters overlap: centers {gap:.6g} apart, strands reach {reach:.6g} from their center"
            )
    return block_embed([local_braid(c, cfg) for c in ordered])


# --- model curves and checks ---------------------------------------------------


def quasihomogeneous_curve(n: int, m: int) -> LocalCurve:
    """Branches of ``y^n = x^m``: ``y = exp(2 pi i l / n) x^(m/n)`` for l = 0..gcd(n, m)-1."""
    d = math.gcd(n, m)
    n1, m1 = n // d, m // d
    branches = tuple(
        PuiseuxBranch(n1, ((Fraction(m1, n1), complex(np.exp(2j * np.pi * ell / n))),)) for ell in range(d)
    )
    return LocalCurve(branches)


@dataclass(frozen=True)
class DegreeCheck:
    exponent_sum: int
    milnor: int
    intersection: int


def quasihomogeneous_degree_check(n: int, m: int) -> DegreeCheck:
    """For ``y^n = x^m``: exponent sum = milnor + intersection - 1 = (n-1) m."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    return DegreeCheck(exponent_sum=(n - 1) * m, milnor=(n - 1) * (m - 1), intersection=n)


# --- text format --------------------------------------------------------------


def _fmt(x: float) -> str:
    text = format(x, ".12g")
    return "0" if text == "-0" else text


def parse_curves(text: str) -> list[LocalCurve]:
    """Read ``center`` / ``branch m=`` / ``term`` lines; each ``center`` starts a new germ."""
    curves: list[LocalCurve] = []
    center: Optional[complex] = None
    branches: list[tuple[int, list]] = []

    def flush() -> None:
        if branches:
            curves.append(
                LocalCurve(tuple(PuiseuxBranch(m, tuple(ts)) for m, ts in branches), center or 0j)
            )
        elif center is not None:
            raise ValueError("center without branches")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "center":
                if len(rest) != 2:
                    raise ValueError("expected 'center <re> <im>'")
                flush()
                branches = []
                center = complex(float(rest[0]), float(rest[1]))
            elif head == "branch":
                if len(rest) != 1 or not rest[0].startswith("m="):
                    raise ValueError("expected 'branch m=<int>'")
                m = int(rest[0][2:])
                if m < 1:
                    raise ValueError("multiplicity must be positive")
                branches.append((m, []))
            elif head == "term":
                if not branches:
                    raise ValueError("'term' before any 'branch'")
                if len(rest) != 3:
                    raise ValueError("expected 'term <num>/<den> <re> <im>'")
                m, terms = branches[-1]
                e = Fraction(rest[0])
                if m % e.denominator:
                    raise ValueError(f"exponent {e} has a denominator not dividing {m}")
                if terms and e <= terms[-1][0]:
                    raise ValueError("exponents must be strictly increasing")
                terms.append((e, complex(float(rest[1]), float(rest[2]))))
            else:
                raise ValueError(f"unknown keyword {head!r}")
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    flush()
    if not curves:
        raise ValueError("no branches found")
    return curves


def format_curves(curves: Sequence[LocalCurve]) -> str:
    lines = []
    for c in curves:
        lines.append(f"center {_fmt(c.center.real)} {_fmt(c.center.imag)}")
        for b in c.branches:
            lines.append(f"branch m={b.multiplicity}")
            for e, a in b.terms:
                lines.append(f"term {e.numerator}/{e.denominator} {_fmt(a.real)} {_fmt(a.imag)}")
    return "\n".join(lines) + "\n"
