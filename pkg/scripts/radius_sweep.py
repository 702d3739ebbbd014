"""Track a germ at a range of radii and tabulate the resulting braid.

Shows where the tracked braid is stable. The default germ is the branch
y = x^(3/2) + 5x^2 - 2x^(5/2), whose tail dominates for radii near 1.

    python scripts/radius_sweep.py
    python scripts/radius_sweep.py --file tests/fixtures/cusp.txt --radii 1 0.5 0.1
"""

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from monodromy.braid import exponent_sum
from monodromy.puiseux import (
    LocalCurve,
    PuiseuxBranch,
    TrackerConfig,
    TrackingError,
    essential_truncation,
    parse_curves,
    track,
)

DEFAULT = LocalCurve((PuiseuxBranch(2, ((Fraction(3, 2), 1), (Fraction(2), 5), (Fraction(5, 2), -2))),))


@dataclass
class SweepConfig:
    radii: list[float] = field(default_factory=lambda: [1.0, 0.5, 0.2, 0.1, 0.05, 0.01, 0.005])
    samples: int = 2000
    truncate: bool = True


def row(label: str, curve: LocalCurve, radius: float, samples: int) -> str:
    try:
        t = track(curve, TrackerConfig(radius=radius, samples=samples))
    except TrackingError as exc:
        return f"{radius:<8g} {label:<10} failed: {exc}"
    letters = " ".join(map(str, t.word.letters)) or "(identity)"
    return f"{radius:<8g} {label:<10} esum {exponent_sum(t.word):>3}  sep {t.min_separation:.3g}  word {letters}"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--file", help="curve file with a single germ")
    ap.add_argument("--radii", type=float, nargs="+")
    ap.add_argument("--samples", type=int, default=SweepConfig.samples)
    ap.add_argument("--no-truncate", action="store_true")
    args = ap.parse_args()
    cfg = SweepConfig(samples=args.samples, truncate=not args.no_truncate)
    if args.radii:
        cfg.radii = args.radii
    curve = DEFAULT
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            (curve,) = parse_curves(fh.read())
    short = essential_truncation(curve)
    for r in cfg.radii:
        print(row("full", curve, r, cfg.samples))
        if cfg.truncate:
            print(row("truncated", short, r, cfg.samples))


if __name__ == "__main__":
    main()
