"""Rewrite tests/fixtures/golden/*.out from the current CLI.

Only run this after checking that a changed output is intended; the golden
files are what the test suite compares against.
"""

import io
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from cli_cases import CASES, GOLDEN, argv  # noqa: E402

from monodromy.cli import run  # noqa: E402


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name in CASES:
        out = io.StringIO()
        code = run(argv(name), out=out)
        if code:
            raise SystemExit(f"{name}: exit {code}")
        # paths in the echo are never printed, so outputs are location independent
        (GOLDEN / f"{name}.out").write_text(out.getvalue())
        print(f"wrote {name}.out")


if __name__ == "__main__":
    main()
