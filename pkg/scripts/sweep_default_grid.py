"""Run every suite over the default grid and write one JSON report per point.

    python3 scripts/sweep_default_grid.py --out runs/grid --jobs 4
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from pzigzag.cli import SUITES, run_suite


@dataclass
class SweepConfig:
    ns: tuple = (2, 3)
    ps: tuple = (2, 3)
    lams: tuple = (0, 1)
    suites: tuple = field(default_factory=lambda: SUITES)
    jobs: int = 1
    cache_dir: str | None = None
    out: str = "runs/grid"


def sweep(cfg: SweepConfig) -> list:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for n in cfg.ns:
        for p in cfg.ps:
            for lam in cfg.lams:
                if lam >= p:
                    continue
                for suite in cfg.suites:
                    t0 = time.perf_counter()
                    rep = run_suite(suite, n, p, lam, jobs=cfg.jobs, cache_dir=cfg.cache_dir)
                    secs = time.perf_counter() - t0
                    (out / f"{suite}_n{n}_p{p}_l{lam}.json").write_text(json.dumps(rep, indent=1))
                    rows.append({"suite": suite, "n": n, "p": p, "lambda": lam, "seconds": round(secs, 2),
                                 **rep["summary"]})
                    print(f"{suite:<12} n={n} p={p} lambda={lam}  {rep['summary']}  {secs:.1f}s")
    (out / "summary.json").write_text(json.dumps({"config": asdict(cfg), "rows": rows}, indent=1))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--p", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--lambda", dest="lams", type=int, nargs="+", default=[0, 1])
    ap.add_argument("--suite", nargs="+", default=list(SUITES))
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--cache-dir", default=None)
    ap.add_argument("--out", default="runs/grid")
    a = ap.parse_args()
    rows = sweep(SweepConfig(tuple(a.n), tuple(a.p), tuple(a.lams), tuple(a.suite), a.jobs, a.cache_dir, a.out))
    failed = sum(r["fail"] for r in rows)
    print(f"{len(rows)} runs, {failed} failing checks")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
