"""Noisy double-Bell family rho(t) = (1-t)/16 I + t |psi><psi| and its lower-bound curves.

``|psi> = (|0000> + |0011> + |1100> + |1111>)/2`` is a Bell pair on parties
1,2 times a Bell pair on parties 3,4. The closed forms ``z1..z4`` and the
piecewise ``Z`` are taken as given; the engine columns come from the
generic bound pipeline in :mod:`mpconc.bounds`.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .bounds import delta_bound, theorem1_bound
from .qstate import DensityMatrix

PSI = np.zeros(16, dtype=complex)
PSI[[0b0000, 0b0011, 0b1100, 0b1111]] = 0.5

DETECTION_THRESHOLD = 1 / 9
BREAK_1 = 0.2
BREAK_2 = 0.308051  # known only to six decimals
Z4_FROM = 0.5

CSV_HEADER = ("t", "z1", "z2", "z3", "z4", "z_piecewise", "bound_sq_paper", "bound_sq_engine", "delta_sq")


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return t


def rho_example(t: float) -> DensityMatrix:
    t = _check_t(t)
    mat = (1 - t) / 16 * np.eye(16) + t * np.outer(PSI, PSI.conj())
    return DensityMatrix((2, 2, 2, 2), mat)


class ZValues(NamedTuple):
    z1: float
    z2: float
    z3: float
    z4: float
    z4_active: bool


def z_formulas(t: float) -> ZValues:
    t = _check_t(t)
    r17 = np.sqrt(17.0)
    z1 = (5 * t - 1) ** 2 / 128
    z2 = (1 - 9 * t) ** 2 * (1 + t) ** 2 / 128
    z3 = -((1 + t) ** 2) / 256 * (5 * (-51 + 4 * r17) * t**2 + (26 + 4 * r17) * t - 3)
    z4 = 3 * (1 + t) ** 4 / 128 * (np.sqrt((1 + 7 * t) / (4 * (t + 1))) - 3 * np.sqrt((1 - t) / (4 * (t + 1)))) ** 2
    return ZValues(float(z1), float(z2), float(z3), float(z4), t > Z4_FROM)


def z_piecewise(t: float) -> float:
    """Lower bound on the sum of the six squared i|j|kl concurrences."""
    z = z_formulas(t)
    t = float(t)
    if t <= DETECTION_THRESHOLD:
        return 0.0
    if t <= BREAK_1:
        return 2 * z.z2
    if t <= BREAK_2:
        return 32 * z.z1 + 2 * z.z2
    return 32 * z.z1 + z.z2 + z.z3


def assemble_paper_bound(t: float) -> float:
    """Squared four-party bound (1/12)(2 Z + Z4 [t > 1/2]) from the closed forms."""
    z = z_formulas(t)
    return (2 * z_piecewise(t) + (z.z4 if z.z4_active else 0.0)) / 12


@dataclass(frozen=True)
class ExamplePoint:
    t: float
    z1: float
    z2: float
    z3: float
    z4: float
    z_piecewise: float
    bound_sq_paper: float
    bound_sq_engine: float
    delta_sq: float

    def row(self) -> list[str]:
        return [f"{getattr(self, k):.17g}" for k in CSV_HEADER]


def example_point(t: float, method: str = "best", engine: bool = True) -> ExamplePoint:
    z = z_formulas(t)
    if engine:
        rho = rho_example(t)
        eng = theorem1_bound(rho, tri_method="best", bi_method=method).squared
        dlt = delta_bound(rho, method).squared
    else:
        eng = dlt = float("nan")
    return ExamplePoint(
        float(t), z.z1, z.z2, z.z3, z.z4, z_piecewise(t), assemble_paper_bound(t), eng, dlt
    )


def _point_args(args: tuple[float, str, bool]) -> ExamplePoint:
    return example_point(*args)


def sweep(
    t_min: float,
    t_max: float,
    steps: int,
    output_path: str | Path | None = None,
    method: str = "best",
    jobs: int | None = None,
    engine: bool = True,
) -> list[ExamplePoint]:
    """Evaluate ``steps`` evenly spaced points and optionally write them as CSV."""
    t_min, t_max = _check_t(t_min), _check_t(t_max)
    if not t_min < t_max:
        raise ValueError(f"need t_min < t_max, got {t_min} >= {t_max}")
    if steps < 2:
        raise ValueError(f"need at least 2 steps, got {steps}")
    grid = [float(t) for t in np.linspace(t_min, t_max, steps)]
    jobs = jobs or os.cpu_count() or 1
    work = [(t, method, engine) for t in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_point_args, work, chunksize=max(1, steps // (4 * jobs))))
    else:
        points = [_point_args(w) for w in work]
    if output_path is not None:
        write_csv(points, output_path)
    return points


def write_csv(points: list[ExamplePoint], path: str | Path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_HEADER)
            w.writerows(p.row() for p in points)
    except OSError as exc:
        raise OSError(f"cannot write sweep to {path}: {exc.strerror}") from exc


def point_json(p: ExamplePoint) -> dict:
    return asdict(p)
