"""Exact concurrence of pure states.

For a pure state on N subsystems grouped into the M blocks of a partition::

    C_M^2 = 2**(2 - M) * sum_b (1 - Tr(rho_b^2))

where ``b`` runs over the 2**M - 2 nonempty proper unions of blocks. The
ungrouped case is the all-singletons partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .partitions import Partition, enumerate_partitions, realized_subsets
from .qstate import PureState, StateError, pure_marginal_purity

RADICAND_TOL = 1e-10
SELECTORS: tuple[tuple[int, int], ...] = tuple(combinations(range(4), 2))


class NumericalConsistencyError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ConcurrenceValue:
    value: float
    squared: float

    @classmethod
    def from_squared(cls, sq: float) -> "ConcurrenceValue":
        if sq < -RADICAND_TOL:
            raise NumericalConsistencyError(f"negative squared concurrence {sq:.3e}")
        sq = max(sq, 0.0)
        return cls(float(np.sqrt(sq)), float(sq))


def singletons(n: int) -> Partition:
    return enumerate_partitions(n, n)[0]


def _squared_from_subsets(psi: PureState, subsets: frozenset[int], m: int) -> float:
    full = (1 << psi.n) - 1
    norm2 = psi.norm ** 2
    total = 0.0
    done = set()
    for a in subsets:
        if a in done:
            continue
        comp = full & ~a
        # complementary marginals of a pure vector share their purity
        lin = norm2 * norm2 - pure_marginal_purity(psi, a)
        total += lin * (2 if comp in subsets else 1)
        done.update((a, comp))
    return 2.0 ** (2 - m) * total


def concurrence_partition(psi: PureState, p: Partition) -> ConcurrenceValue:
    if p.n != psi.n:
        raise StateError("partition does not match the number of subsystems", detail=f"{p} vs n={psi.n}")
    return ConcurrenceValue.from_squared(_squared_from_subsets(psi, realized_subsets(p), p.m))


def concurrence_full(psi: PureState) -> ConcurrenceValue:
    """N-partite concurrence with every subsystem its own party."""
    n = psi.n
    if n < 2:
        raise StateError("concurrence needs at least two subsystems", detail=f"n={n}")
    return concurrence_partition(psi, singletons(n))


def coefficient_squared(a: np.ndarray) -> float:
    """Squared tripartite concurrence from the amplitude tensor a[i, j, k].

    Sums over every index tuple (i, j, k, p, q, m) with an overall 1/2::

        |a_ijk a_pqm - a_ijm a_pqk|^2 + |a_ijk a_pqm - a_iqk a_pjm|^2 + |a_ijk a_pqm - a_pjk a_iqm|^2

    Each family equals 2(|a|^4 - Tr rho_X^2) for X = C, B, A, so the total
    reproduces the purity form on the partition 1|2|3. Homogeneous of degree
    4 in the amplitudes; subnormalized tensors are used as given.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 3:
        raise StateError("coefficient form needs a three-index amplitude tensor", detail=str(a.shape))
    base = np.einsum("ijk,pqm->ijkpqm", a, a)
    swap_c = np.einsum("ijm,pqk->ijkpqm", a, a)
    swap_b = np.einsum("iqk,pjm->ijkpqm", a, a)
    swap_a = np.einsum("pjk,iqm->ijkpqm", a, a)
    s = sum(float(np.sum(np.abs(base - x) ** 2)) for x in (swap_c, swap_b, swap_a))
    return 0.5 * s


def concurrence_224_coefficient(psi: PureState) -> ConcurrenceValue:
    if psi.dims != (2, 2, 4):
        raise StateError("coefficient form is defined for shape (2, 2, 4)", detail=str(psi.dims))
    return ConcurrenceValue.from_squared(coefficient_squared(psi.tensor()))


def check_selector(selector) -> tuple[int, int]:
    try:
        k1, k2 = (int(k) for k in selector)
    except (TypeError, ValueError):
        raise StateError("selector must be a pair of levels", detail=repr(selector)) from None
    if (k1, k2) not in SELECTORS:
        raise StateError("selector must satisfy 0 <= k1 < k2 <= 3", detail=repr(selector))
    return k1, k2


def substate_pure(psi: PureState, selector) -> PureState:
    """Restrict the third (4-level) index to ``selector``; the result is not renormalized."""
    if psi.dims != (2, 2, 4):
        raise StateError("substates are defined for shape (2, 2, 4)", detail=str(psi.dims))
    k1, k2 = check_selector(selector)
    sub = psi.tensor()[:, :, [k1, k2]]
    return PureState((2, 2, 2), sub.reshape(-1), normalized=False)


def substate_concurrences_squared(psi: PureState) -> dict[tuple[int, int], float]:
    """Coefficient-form C^2 of each of the six 2x2x2 substates."""
    return {sel: coefficient_squared(substate_pure(psi, sel).tensor()) for sel in SELECTORS}
