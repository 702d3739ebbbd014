"""Batch command-line front end.

Every report starts with the canonical echo of its input, followed by a
``---`` line and ``key: value`` results. Exit status is 0 on success, 1 on a
domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import factorization as fz
from . import presentation as pr
from . import puiseux as pu
from .braid import BraidWord, canonical_form, exponent_sum, permutation_of
from .free_group import FreeWord, act

GROUPS = {"s3": 3, "s4": 4, "s5": 5}


class DomainError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    workers: int = 1


def _workers() -> int:
    raw = os.environ.get("MONODROMY_THREADS")
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"MONODROMY_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise DomainError(f"MONODROMY_THREADS must be a positive integer, got {raw!r}")
    return value


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, parser):
    try:
        return parser(_read(path))
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from None


def _letters(w) -> str:
    return " ".join(map(str, w.letters)) if w.letters else "(identity)"


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _perm(w: BraidWord) -> str:
    return " ".join(map(str, permutation_of(w).images))


def _group_source(path: str, projective: bool) -> tuple[str, pr.Presentation]:
    """A factorization file or a presentation file (``gens`` first)."""
    text = _read(path)
    first = next((ln.split("#", 1)[0].split() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), [])
    try:
        if first and first[0] == "gens":
            p = pr.parse_presentation(text)
            return pr.format_presentation(p), p
        f = fz.parse(text)
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from None
    echo = fz.format_factorization(f)
    if projective:
        if not fz.is_projective(f):
            raise DomainError("projective presentation requires pseudo_coxeter == full twist")
        return echo, pr.zvk_projective(f)
    return echo, pr.zvk_affine(f)


# --- verbs ------------------------------------------------------------------


def cmd_verify(args, cfg: RunConfig) -> list[str]:
    f = _load(args.file, fz.parse)
    pc = fz.pseudo_coxeter(f)
    return [
        fz.format_factorization(f) + "---",
        f"strands: {f.strands}",
        f"factors: {len(f)}",
        f"pseudo_coxeter: {_letters(pc)}",
        f"exponent_sum: {exponent_sum(pc)}",
        f"projective: {str(fz.is_projective(f)).lower()}",
        f"monodromy_order: {fz.perm_monodromy_order(f)}",
        f"components: {fz.orbit_count_components(f)}",
    ]


def cmd_group(args, cfg: RunConfig) -> list[str]:
    echo, p = _group_source(args.file, args.projective)
    if args.simplify:
        p = pr.tietze_simplify(p)
    return [
        echo + "---",
        f"kind: {'projective' if args.projective else 'affine'}",
        pr.format_presentation(p).rstrip("\n"),
        f"abelianization: {pr.abelianize(p)}",
    ]


def cmd_abelianize(args, cfg: RunConfig) -> list[str]:
    echo, p = _group_source(args.file, args.projective)
    return [echo + "---", f"abelianization: {pr.abelianize(p)}"]


def cmd_homcount(args, cfg: RunConfig) -> list[str]:
    echo, p = _group_source(args.file, args.projective)
    if args.simplify:
        p = pr.tietze_simplify(p)
    target = pr.symmetric_group(GROUPS[args.into])
    try:
        count = pr.count_homs(p, target, nonabelian_only=args.nonabelian, workers=cfg.workers)
    except pr.BudgetExceeded as exc:
        raise DomainError(str(exc)) from None
    label = "nonabelian_homs" if args.nonabelian else "homs"
    return [echo + "---", f"target: {args.into.upper()}", f"{label}: {count}"]


def cmd_hurwitz_orbit(args, cfg: RunConfig) -> list[str]:
    f = _load(args.file, fz.parse)
    orbit = fz.hurwitz_orbit(f, args.max)
    pcs = {canonical_form(fz.pseudo_coxeter(s)) for s in orbit.states.values()}
    out = [
        fz.format_factorization(f) + "---",
        f"orbit_size: {len(orbit)}",
        f"complete: {str(orbit.complete).lower()}",
        f"pseudo_coxeter_constant: {str(len(pcs) == 1).lower()}",
    ]
    for idx, state in enumerate(orbit.states.values(), start=1):
        out.append(f"state {idx}: " + " | ".join(_letters(t) for t in state.factors))
    return out


def cmd_distinguish(args, cfg: RunConfig) -> list[str]:
    f1 = _load(args.a, fz.parse)
    f2 = _load(args.b, fz.parse)
    out = [fz.format_factorization(f1) + "---", fz.format_factorization(f2) + "---"]
    for name, f in (("A", f1), ("B", f2)):
        out.append(f"{name}.factors: {len(f)}")
        g = pr.zvk_affine(f)
        out.append(f"{name}.abelianization: {pr.abelianize(g)}")
        try:
            homs = pr.count_homs(g, pr.symmetric_group(3), nonabelian_only=True, workers=cfg.workers)
            out.append(f"{name}.nonabelian_homs_S3: {homs}")
        except pr.BudgetExceeded:
            out.append(f"{name}.nonabelian_homs_S3: over budget")
    verdict = fz.same_orbit(f1, f2, max_states=args.max, conj_len=args.conj_len, workers=cfg.workers)
    out.append(f"verdict: {verdict}")
    return out


def _tracker(args) -> pu.TrackerConfig:
    try:
        return pu.TrackerConfig(radius=args.radius, samples=args.samples)
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def cmd_local_braid(args, cfg: RunConfig) -> list[str]:
    curves = _load(args.file, pu.parse_curves)
    if len(curves) != 1:
        raise DomainError(f"local-braid expects one germ, found {len(curves)}; use 'semilocal'")
    cfg = _tracker(args)
    result = pu.track(curves[0], cfg)
    w = result.word
    out = [
        pu.format_curves(curves) + "---",
        f"strands: {w.strands}",
        f"word: {_letters(w)}",
        f"exponent_sum: {exponent_sum(w)}",
        f"permutation: {_perm(w)}",
        f"min_separation: {_fmt(result.min_separation)}",
    ]
    if args.check_stability:
        check = pu.half_radius_check(curves[0], cfg)
        out.append(f"half_radius_stable: {str(check.stable).lower()}")
        if not check.stable:
            out.append(f"half_radius_note: {check.reason}")
    return out


def cmd_semilocal(args, cfg: RunConfig) -> list[str]:
    curves = _load(args.file, pu.parse_curves)
    w = pu.semilocal_braid(curves, _tracker(args))
    return [
        pu.format_curves(curves) + "---",
        f"strands: {w.strands}",
        f"word: {_letters(w)}",
        f"exponent_sum: {exponent_sum(w)}",
        f"permutation: {_perm(w)}",
    ]


def cmd_act(args, cfg: RunConfig) -> list[str]:
    try:
        braid_letters = tuple(int(t) for t in args.braid.split())
        word_letters = tuple(int(t) for t in args.word.split())
        n = args.n or max([abs(k) + 1 for k in braid_letters] + [abs(k) for k in word_letters] + [1])
        b = BraidWord(n, braid_letters)
        w = FreeWord(n, word_letters)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    return [
        f"n {n}",
        f"braid {_letters(b)}",
        f"word {_letters(w)}",
        "---",
        f"image: {_letters(act(w, b))}",
    ]


def cmd_embed(args, cfg: RunConfig) -> list[str]:
    p = _load(args.file, fz.parse_puiseux)
    f = fz.expand(p)
    return [
        fz.format_puiseux(p) + "---",
        fz.format_factorization(f).rstrip("\n"),
        f"exponent_sum: {exponent_sum(fz.pseudo_coxeter(f))}",
        f"presentation_relators: {len(pr.zvk_puiseux(p).relators)}",
    ]


# --- argument parsing ---------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monodromy", description="Braid monodromy computations.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("verify", help="basic data of a factorization")
    p.add_argument("file")
    p.set_defaults(run=cmd_verify)

    for name, func, doc in (
        ("group", cmd_group, "presentation of the fundamental group"),
        ("abelianize", cmd_abelianize, "abelian invariants of the group"),
        ("homcount", cmd_homcount, "count homomorphisms into a symmetric group"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("file")
        kind = p.add_mutually_exclusive_group(required=name == "group")
        kind.add_argument("--affine", action="store_true")
        kind.add_argument("--projective", action="store_true")
        if name != "abelianize":
            p.add_argument("--simplify", action="store_true")
        if name == "homcount":
            p.add_argument("--into", choices=sorted(GROUPS), required=True)
            p.add_argument("--nonabelian", action="store_true")
        p.set_defaults(run=func)

    p = sub.add_parser("hurwitz-orbit", help="bounded Hurwitz orbit enumeration")
    p.add_argument("file")
    p.add_argument("--max", type=_positive, default=1000)
    p.set_defaults(run=cmd_hurwitz_orbit)

    p = sub.add_parser("distinguish", help="test two factorizations for equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--max", type=_positive, default=1000)
    p.add_argument("--conj-len", type=int, default=2)
    p.set_defaults(run=cmd_distinguish)

    for name, func in (("local-braid", cmd_local_braid), ("semilocal", cmd_semilocal)):
        p = sub.add_parser(name, help="braid of a curve germ" if name == "local-braid" else "braid of several germs")
        p.add_argument("file")
        p.add_argument("--radius", type=float, default=1.0)
        p.add_argument("--samples", type=int, default=2000)
        if name == "local-braid":
            p.add_argument("--check-stability", action="store_true", help="re-run at half radius and compare")
        p.set_defaults(run=func)

    p = sub.add_parser("act", help="act by a braid on a free word")
    p.add_argument("--braid", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("-n", type=_positive, default=None, help="number of strands (default: smallest that fits)")
    p.set_defaults(run=cmd_act)

    p = sub.add_parser("embed", help="expand a blocked Puiseux factorization")
    p.add_argument("file")
    p.set_defaults(run=cmd_embed)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(workers=_workers())
        lines = args.run(args, cfg)
    except (DomainError, ValueError, pu.TrackingError, IndexError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    out.write("\n".join(lines) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
