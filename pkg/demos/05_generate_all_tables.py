"""Generate every study table as CSV (the input the figure renderer consumes).

Equivalent to running the ``rpsmooth`` command once per experiment. With the
default grids this takes a few minutes on a small machine; pass a directory
as the first argument to choose where the CSVs land (default ./tables).
"""

import sys
import time
from pathlib import Path

from rpsmooth.experiments import run_sweep, spec_for

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "tables")
out_dir.mkdir(parents=True, exist_ok=True)

runs = [
    ("ou-delta", {}),
    ("ou-mu", {}),
    ("res-delta", {}),
    ("res-mu", {}),
    ("res-zeta", {}),
    ("res-squeeze", {"l_sq": 0.0, "out_name": "res-squeeze-lossless.csv"}),
    ("res-squeeze", {"l_sq": 0.33, "out_name": "res-squeeze-lossy.csv"}),
    ("res-flux", {}),
    ("mc-validate", {}),
]

for experiment, overrides in runs:
    name = overrides.pop("out_name", f"{experiment}.csv")
    overrides["out"] = str(out_dir / name)
    overrides.setdefault("threads", 2)
    start = time.perf_counter()
    table = run_sweep(spec_for(experiment, overrides))
    bad = sum(1 for r in table.rows if r.get("error"))
    status = "ok" if not bad else f"{bad} failed points"
    print(f"{name:28s} {len(table.rows):4d} rows  {time.perf_counter() - start:6.1f} s  {status}")

print(f"\ntables written to {out_dir.resolve()}")
