#!/usr/bin/env python3
"""Print seed-averaged achieved rates from sweep summary CSVs as value-by-scheme tables."""

from __future__ import annotations

import argparse
from pathlib import Path

from mixedpls.harness import read_csv


def table(path: Path) -> str:
    _, t = read_csv(path)
    schemes = list(dict.fromkeys(t.column("scheme")))
    rows: dict[str, dict[str, float]] = {}
    for var, value, scheme, _n, _est, ach in t.rows:
        rows.setdefault(value, {})[scheme] = float(ach)
    var = t.rows[0][0] if t.rows else "?"
    lines = [f"{var:>18} " + " ".join(f"{s:>10}" for s in schemes)]
    for value, by in rows.items():
        lines.append(f"{value:>18} " + " ".join(f"{by.get(s, float('nan')):10.3f}" for s in schemes))
    return "\n".join(lines)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("paths", nargs="*", type=Path)
    ap.add_argument("--dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    paths = args.paths or sorted(args.dir.glob("*.summary.csv"))
    for p in paths:
        print(f"== {p.name} (mean achieved rate, bps/Hz)")
        print(table(p))
        print()


if __name__ == "__main__":
    main()
