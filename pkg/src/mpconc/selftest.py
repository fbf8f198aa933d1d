"""Randomized invariant suites used by ``mpconc selftest``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bounds, concurrence as conc, partitions as parts, qstate


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<40s} worst={self.worst:.3e} {self.detail}".rstrip()


def _tri_and_bi() -> tuple[list[parts.Partition], list[parts.Partition]]:
    tri = parts.enumerate_partitions(4, 3)
    bi = [p for p in parts.enumerate_partitions(4, 2) if p.profile == (2, 2)]
    return tri, bi


def theorem1_identity(rng: np.random.Generator, samples: int) -> SuiteResult:
    tri, bi = _tri_and_bi()
    worst = 0.0
    for _ in range(samples):
        psi = qstate.random_pure((2, 2, 2, 2), rng)
        full = conc.concurrence_full(psi).squared
        rhs = (2 * sum(conc.concurrence_partition(psi, p).squared for p in tri)
               + sum(conc.concurrence_partition(psi, p).squared for p in bi)) / 12
        worst = max(worst, abs(full - rhs))
    return SuiteResult("four-qubit pure identity", worst < 1e-9, worst)


def theorem2_inequality(rng: np.random.Generator, samples: int) -> SuiteResult:
    worst = np.inf
    for _ in range(samples):
        psi = qstate.random_pure((2, 2, 4), rng)
        lhs = conc.concurrence_224_coefficient(psi).squared
        rhs = sum(conc.substate_concurrences_squared(psi).values()) / 3
        worst = min(worst, lhs - rhs)
    return SuiteResult("2x2x4 substate inequality (min slack)", worst >= -1e-9, worst)


def coefficient_equivalence(rng: np.random.Generator, samples: int) -> SuiteResult:
    p = parts.Partition.parse("1|2|3")
    worst = 0.0
    for _ in range(samples):
        psi = qstate.random_pure((2, 2, 4), rng)
        worst = max(worst, abs(conc.concurrence_224_coefficient(psi).value - conc.concurrence_partition(psi, p).value))
    return SuiteResult("coefficient form == purity form", worst < 1e-9, worst)


def complement_purity(rng: np.random.Generator, samples: int) -> SuiteResult:
    worst = 0.0
    for _ in range(samples):
        dims = tuple(rng.integers(2, 4, size=3))
        psi = qstate.random_pure(dims, rng)
        for a in range(1, 7):
            d = abs(qstate.purity(qstate.partial_trace(psi, a)) - qstate.purity(qstate.partial_trace(psi, 7 & ~a)))
            worst = max(worst, d)
    return SuiteResult("complementary marginal purities agree", worst < 1e-10, worst)


def local_unitary_invariance(rng: np.random.Generator, samples: int) -> SuiteResult:
    worst = 0.0
    for _ in range(samples):
        psi = qstate.random_pure((2, 2, 2, 2), rng)
        u = np.ones((1, 1))
        for _k in range(4):
            u = np.kron(u, qstate.random_unitary(2, rng))
        moved = qstate.PureState(psi.dims, u @ psi.amplitudes)
        worst = max(worst, abs(conc.concurrence_full(psi).value - conc.concurrence_full(moved).value))
    return SuiteResult("local-unitary invariance", worst < 1e-9, worst)


def theorem1_coverage(rng: np.random.Generator, samples: int) -> SuiteResult:
    slack = parts.verify_weights(4, parts.theorem1_scheme())
    nonzero = [s for s in slack.values() if s != 0]
    return SuiteResult("four-party coverage slack == 0", not nonzero and len(slack) == 14, float(len(nonzero)))


def hierarchy(rng: np.random.Generator, samples: int) -> SuiteResult:
    worst = np.inf
    for _ in range(samples):
        rho = qstate.random_mixed((2, 2, 2, 2), int(rng.integers(1, 5)), rng)
        t1 = bounds.theorem1_bound(rho, tri_method="relation", bi_method="ppt,ccnr").squared
        dl = bounds.delta_bound(rho, "ppt,ccnr").squared
        worst = min(worst, t1 - dl)
    return SuiteResult("four-party bound >= seven-cut bound", worst >= -1e-12, worst)


def two_qubit_soundness(rng: np.random.Generator, samples: int) -> SuiteResult:
    worst = np.inf
    for _ in range(samples):
        rho = qstate.random_mixed((2, 2), int(rng.integers(1, 5)), rng)
        exact = bounds.wootters_concurrence(rho)
        for m in ("ppt", "ccnr", "best"):
            worst = min(worst, exact - bounds.bipartite_lower_bound(rho, 1, m).value)
    return SuiteResult("bipartite bounds <= Wootters", worst >= -1e-9, worst)


def separable_zero(rng: np.random.Generator, samples: int) -> SuiteResult:
    worst = 0.0
    for _ in range(samples):
        lam = rng.uniform()
        r1 = qstate.random_product_mixed((2, 2, 2, 2), rng)
        r2 = qstate.random_product_mixed((2, 2, 2, 2), rng)
        rho = qstate.DensityMatrix(r1.dims, lam * r1.matrix + (1 - lam) * r2.matrix)
        for rep in (bounds.theorem1_bound(rho), bounds.corollary1_bound(rho), bounds.delta_bound(rho)):
            worst = max(worst, rep.squared)
    return SuiteResult("separable mixtures give zero", worst == 0.0, worst)


SUITES: list[Callable[[np.random.Generator, int], SuiteResult]] = [
    theorem1_identity,
    theorem2_inequality,
    coefficient_equivalence,
    complement_purity,
    local_unitary_invariance,
    theorem1_coverage,
    hierarchy,
    two_qubit_soundness,
    separable_zero,
]


def run_all(seed: int = 42, samples: int = 100) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    return [suite(rng, samples) for suite in SUITES]
