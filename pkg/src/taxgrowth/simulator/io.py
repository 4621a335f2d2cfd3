"""CSV export of simulated paths and wealth snapshots.

Floats are written with ``repr``, the shortest string that parses back to the
same double, so files round-trip exactly and are byte-stable across runs.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

from .agents import WealthSnapshot
from .two_sector import TwoSectorPaths


def fmt(x) -> str:
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return repr(float(x))


def write_rows(path, header: Sequence[str], rows: Iterable[Sequence]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return path


def write_paths(paths: TwoSectorPaths, path, index: int = 0):
    """One path as ``time,h,H,delta``."""
    h, H = paths.h[index], paths.H[index]
    rows = ((t, a, b, a - b) for t, a, b in zip(paths.times, h, H))
    return write_rows(path, ("time", "h", "H", "delta"), rows)


def write_snapshots(snapshots: Sequence[WealthSnapshot], wealth_path, public_path):
    """Agent wealths as ``time,agent_id,wealth`` plus ``time,public_wealth``."""

    def agent_rows():
        for snap in snapshots:
            for i, w in enumerate(snap.wealth):
                yield snap.time, i, w

    write_rows(wealth_path, ("time", "agent_id", "wealth"), agent_rows())
    write_rows(public_path, ("time", "public_wealth"), ((s.time, s.public_wealth) for s in snapshots))
    return Path(wealth_path), Path(public_path)
