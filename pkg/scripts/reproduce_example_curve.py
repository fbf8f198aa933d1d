"""Sweep the noisy double-Bell family and write the bound curves as CSV.

    python scripts/reproduce_example_curve.py --out fig1.csv --steps 1001
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from mpconc.example import DETECTION_THRESHOLD, sweep


@dataclass
class SweepConfig:
    t_min: float = 0.0
    t_max: float = 1.0
    steps: int = 1001
    out: str = "fig1.csv"
    providers: str = "best"
    jobs: int | None = None
    engine: bool = True


def parse_args() -> SweepConfig:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    cfg = SweepConfig()
    ap.add_argument("--from", dest="t_min", type=float, default=cfg.t_min)
    ap.add_argument("--to", dest="t_max", type=float, default=cfg.t_max)
    ap.add_argument("--steps", type=int, default=cfg.steps)
    ap.add_argument("--out", default=cfg.out)
    ap.add_argument("--providers", default=cfg.providers)
    ap.add_argument("--jobs", type=int, default=cfg.jobs)
    ap.add_argument("--no-engine", dest="engine", action="store_false", help="closed forms only (fast)")
    return SweepConfig(**vars(ap.parse_args()))


def main(cfg: SweepConfig) -> None:
    start = time.perf_counter()
    pts = sweep(cfg.t_min, cfg.t_max, cfg.steps, cfg.out, cfg.providers, cfg.jobs, cfg.engine)
    elapsed = time.perf_counter() - start
    detected = [p.t for p in pts if p.bound_sq_paper > 0]
    print(f"wrote {len(pts)} rows to {cfg.out} in {elapsed:.1f}s")
    print(f"detection threshold 1/9 = {DETECTION_THRESHOLD:.6f}; first grid point with a positive curve: "
          f"{min(detected) if detected else 'none'}")
    last = pts[-1]
    print(f"t={last.t:g}: closed-form bound^2 {last.bound_sq_paper:.6f}, "
          f"generic pipeline {last.bound_sq_engine:.6f}, seven-cut bound^2 {last.delta_sq:.6f}")


if __name__ == "__main__":
    main(parse_args())
