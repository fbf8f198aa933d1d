"""Lower bounds on the concurrence of mixed multipartite states.

Everything is assembled from bipartite lower bounds. For a partition P with M
blocks, every pure state satisfies ``C_P^2 = 2**(2-M) * sum_cuts C_cut^2`` over
the 2**(M-1) - 1 coarse bipartitions of P, and the Cauchy-Schwarz mixing step
turns this into ``C_P(rho)^2 >= 2**(2-M) * sum_cuts L_cut(rho)^2`` for any
lower bounds ``L_cut``. For M = 3 this is the familiar one-half relation, and
for the four-singleton partition it is the seven-cut comparison bound.

Bipartite providers (``method``):

* ``ppt``      sqrt(2/(k(k-1))) * (||rho^T_B||_1 - 1), k = min(m, n)
* ``ccnr``     same with the realigned matrix
* ``wootters`` exact two-qubit concurrence (2x2 cuts only)
* ``exact``    exact pure-state value; input must be rank one
* ``best``     max over ppt, ccnr and wootters where applicable
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable

import numpy as np

from .concurrence import SELECTORS, check_selector, concurrence_partition
from .partitions import (
    Partition,
    WeightScheme,
    bipartition,
    check_scheme,
    cuts,
    enumerate_partitions,
)
from .qstate import (
    DensityMatrix,
    PureState,
    StateError,
    as_density,
    coarse_grain,
    mask_members,
    partial_transpose,
    realign,
    trace_norm,
)

# trace-norm excess below this is arithmetic noise, not entanglement
EXCESS_NOISE = 1e-10
PURE_TOL = 1e-10

PROVIDERS = ("wootters", "ppt", "ccnr", "exact")
_ALIASES = {"wootters_exact": "wootters", "best": None}

SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


class MethodError(ValueError):
    pass


def parse_methods(method: str | Iterable[str]) -> frozenset[str]:
    """``"best"``, ``"ppt"``, ``"ppt,ccnr"`` or an iterable of names -> provider set."""
    names = method.split(",") if isinstance(method, str) else list(method)
    out = set()
    for raw in names:
        name = raw.strip().lower()
        if name == "best":
            out.update(("wootters", "ppt", "ccnr"))
            continue
        name = _ALIASES.get(name, name)
        if name not in PROVIDERS:
            raise MethodError(f"unknown bipartite method {raw!r}")
        out.add(name)
    if not out:
        raise MethodError("no bipartite method given")
    if "exact" in out and len(out) > 1:
        raise MethodError("'exact' cannot be combined with other methods")
    return frozenset(out)


@dataclass(frozen=True)
class BoundReport:
    method: str
    squared: float
    contributions: dict[str, float] = field(default_factory=dict)

    @property
    def value(self) -> float:
        return float(np.sqrt(self.squared))

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "value": self.value,
            "squared": self.squared,
            "contributions": dict(self.contributions),
        }


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Exact two-qubit concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the singular values of sqrt(rho) sqrt(rho~), rho~ the spin-flipped
    state; equivalent to square roots of eig(rho rho~) without the sqrt blow-up
    of eigenvalue noise near zero.
    """
    rho = as_density(rho)
    if rho.dims != (2, 2):
        raise StateError("Wootters concurrence needs a two-qubit state", detail=str(rho.dims))
    w, v = np.linalg.eigh(rho.matrix)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    root_flipped = SIGMA_YY @ root.conj() @ SIGMA_YY
    lam = np.linalg.svd(root @ root_flipped, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _leading_vector(rho: DensityMatrix) -> PureState:
    w, v = np.linalg.eigh(rho.matrix)
    tr = float(np.sum(w))
    if tr <= 0 or abs(w[-1] - tr) > PURE_TOL:
        raise StateError("method 'exact' needs a rank-one state", abs(w[-1] - tr))
    vec = v[:, -1] * np.sqrt(w[-1] / tr)
    return PureState(rho.dims, vec / np.linalg.norm(vec))


class _Evaluator:
    """Memoized bipartite bounds for one normalized state."""

    def __init__(self, rho: DensityMatrix, methods: frozenset[str]):
        self.rho = rho
        self.methods = methods
        self.full = (1 << rho.n) - 1
        self._cut: dict[int, float] = {}
        self._pure: PureState | None = _leading_vector(rho) if "exact" in methods else None

    def cut_sq(self, side: int) -> float:
        key = min(side, self.full & ~side)
        if key not in self._cut:
            self._cut[key] = self._compute_cut(key)
        return self._cut[key]

    def _compute_cut(self, side: int) -> float:
        n = self.rho.n
        if self._pure is not None:
            return concurrence_partition(self._pure, bipartition(n, side)).squared
        m = prod(self.rho.dims[k] for k in mask_members(side, n))
        nn = prod(self.rho.dims) // m
        k = min(m, nn)
        if k < 2:
            return 0.0
        best = None
        scale = np.sqrt(2.0 / (k * (k - 1)))
        if "wootters" in self.methods and (m, nn) == (2, 2):
            two = coarse_grain(self.rho, [side, self.full & ~side])
            best = wootters_concurrence(two)
        if "ppt" in self.methods:
            b = _excess(trace_norm(partial_transpose(self.rho, self.full & ~side))) * scale
            best = b if best is None else max(best, b)
        if "ccnr" in self.methods:
            b = _excess(trace_norm(realign(self.rho, side))) * scale
            best = b if best is None else max(best, b)
        if best is None:
            raise MethodError(f"no method in {sorted(self.methods)} applies to a {m}x{nn} cut")
        return float(best * best)

    def partition_sq(self, p: Partition) -> float:
        if self._pure is not None:
            return concurrence_partition(self._pure, p).squared
        if p.m < 2:
            return 0.0
        return 2.0 ** (2 - p.m) * sum(self.cut_sq(a) for a in cuts(p))


def _excess(norm: float) -> float:
    x = norm - 1.0
    return x if x > EXCESS_NOISE else 0.0


def _method_tag(methods: frozenset[str]) -> str:
    return ",".join(sorted(methods))


def _normalized(rho) -> DensityMatrix:
    rho = as_density(rho)
    if not rho.normalized:
        raise StateError("bounds expect a normalized state; rescale substates explicitly")
    return rho


def _side_of(rho: DensityMatrix, split) -> int:
    if isinstance(split, str):
        split = Partition.parse(split, rho.n)
    if isinstance(split, Partition):
        if split.m != 2 or split.n != rho.n:
            raise StateError("split must be a two-block partition of the subsystems", detail=str(split))
        return split.blocks[0]
    full = (1 << rho.n) - 1
    if not 0 < split < full:
        raise StateError("split mask must be a nonempty proper subset", detail=bin(split))
    return int(split)


def bipartite_lower_bound(rho, split, method="best") -> BoundReport:
    """Certified lower bound on the concurrence across ``split`` (mask, ``Partition`` or ``"1|234"``)."""
    rho = _normalized(rho)
    methods = parse_methods(method)
    side = _side_of(rho, split)
    sq = _Evaluator(rho, methods).cut_sq(side)
    key = str(bipartition(rho.n, side))
    return BoundReport(_method_tag(methods), sq, {key: sq})


def partition_bound(rho, p: Partition | str, method="best") -> BoundReport:
    """``C_P^2 >= 2**(2-M) * sum`` of squared bipartite bounds over P's coarse cuts."""
    rho = _normalized(rho)
    if isinstance(p, str):
        p = Partition.parse(p, rho.n)
    if p.n != rho.n:
        raise StateError("partition does not match the state", detail=f"{p} vs n={rho.n}")
    ev = _Evaluator(rho, parse_methods(method))
    sq = ev.partition_sq(p)
    contrib = {str(bipartition(rho.n, a)): ev.cut_sq(a) for a in cuts(p)} if ev._pure is None else {str(p): sq}
    return BoundReport(_method_tag(ev.methods), sq, contrib)


def tripartition_bound_relation(rho, p: Partition | str, method="best") -> BoundReport:
    """Four-party i|j|kl term: half the sum of the squared bounds on i|jkl, j|ikl and ij|kl."""
    rho = _normalized(rho)
    if isinstance(p, str):
        p = Partition.parse(p, rho.n)
    if rho.n != 4 or p.profile != (2, 1, 1):
        raise StateError("relation needs a four-party partition with blocks of sizes 1, 1, 2", detail=str(p))
    return partition_bound(rho, p, method)


def substate_mixed(rho: DensityMatrix, selector) -> DensityMatrix:
    """8x8 principal submatrix on levels {k1, k2} of the third (4-level) factor; not renormalized."""
    rho = as_density(rho)
    if rho.dims != (2, 2, 4):
        raise StateError("substates are defined for shape (2, 2, 4)", detail=str(rho.dims))
    k1, k2 = check_selector(selector)
    idx = [4 * ij + k for ij in range(4) for k in (k1, k2)]
    sub = rho.matrix[np.ix_(idx, idx)]
    return DensityMatrix((2, 2, 2), sub, normalized=False, validate=False)


def _selector_key(sel: tuple[int, int]) -> str:
    return f"{sel[0]}{sel[1]}"


def _substate_sq(sub: DensityMatrix, methods: frozenset[str]) -> float:
    tau = sub.trace
    if tau <= 1e-14:
        return 0.0
    unit = DensityMatrix(sub.dims, sub.matrix / tau, validate=False)
    ev = _Evaluator(unit, methods)
    # C is degree-1 homogeneous under the convex roof with weights summing to the trace
    return tau * tau * ev.partition_sq(Partition(3, (1, 2, 4)))


def theorem2_bound(rho, method="best") -> BoundReport:
    """Shape (2,2,4): C^2 >= (1/3) sum over the six 2x2x2 substates of their squared bounds.

    Each substate is renormalized, bounded by the three-cut relation, and
    rescaled by its squared trace.
    """
    rho = _normalized(rho)
    if rho.dims != (2, 2, 4):
        raise StateError("theorem-2 bound needs shape (2, 2, 4)", detail=str(rho.dims))
    methods = parse_methods(method)
    contrib = {_selector_key(sel): _substate_sq(substate_mixed(rho, sel), methods) for sel in SELECTORS}
    return BoundReport(_method_tag(methods), sum(contrib.values()) / 3.0, contrib)


def _as_224(rho: DensityMatrix, p: Partition) -> DensityMatrix | None:
    """Reshape a four-party state to (2,2,4) with blocks (i, j, kl), if the dims allow."""
    singles = [b for b in p.blocks if b & (b - 1) == 0]
    pair = next(b for b in p.blocks if b & (b - 1))
    grouped = coarse_grain(rho, singles + [pair])
    return grouped if grouped.dims == (2, 2, 4) else None


def _tripartitions(n: int = 4) -> list[Partition]:
    return enumerate_partitions(n, 3)


def _pair_cuts() -> list[Partition]:
    return [p for p in enumerate_partitions(4, 2) if p.profile == (2, 2)]


def _require_four(rho: DensityMatrix) -> None:
    if rho.n != 4:
        raise StateError("bound is defined for four-party states", detail=f"n={rho.n}")


TRI_METHODS = ("relation", "theorem2", "best", "exact")


def theorem1_bound(rho, tri_method: str = "best", bi_method="best") -> BoundReport:
    """(1/12) * (2 * sum of the six i|j|kl terms + sum of the three ij|kl terms).

    ``tri_method`` picks the lower bound for each i|j|kl term: the half-sum
    relation, the substate bound (when the state reshapes to 2x2x4), the larger
    of the two, or exact pure values.
    """
    rho = _normalized(rho)
    _require_four(rho)
    if tri_method not in TRI_METHODS:
        raise MethodError(f"unknown tripartite method {tri_method!r}")
    methods = parse_methods("exact" if tri_method == "exact" else bi_method)
    ev = _Evaluator(rho, methods)
    contrib: dict[str, float] = {}
    for p in _tripartitions():
        if tri_method in ("relation", "exact"):
            contrib[str(p)] = ev.partition_sq(p)
            continue
        reshaped = _as_224(rho, p)
        sub = theorem2_bound(reshaped, methods).squared if reshaped is not None else None
        if tri_method == "theorem2":
            if sub is None:
                raise StateError("substate bound needs local dims 2, 2 and 4", detail=f"{p} on {rho.dims}")
            contrib[str(p)] = sub
        else:
            rel = ev.partition_sq(p)
            contrib[str(p)] = rel if sub is None else max(rel, sub)
    for p in _pair_cuts():
        contrib[str(p)] = ev.partition_sq(p)
    sq = sum(2 * contrib[str(p)] for p in _tripartitions()) + sum(contrib[str(p)] for p in _pair_cuts())
    return BoundReport(f"theorem1[{tri_method};{_method_tag(methods)}]", sq / 12.0, contrib)


def corollary1_bound(rho, method="best") -> BoundReport:
    """Four qubits: (1/12) * (sum_tri (2/3) sum_substates C^2 + sum_j C^2_{1j|kl})."""
    rho = _normalized(rho)
    if rho.dims != (2, 2, 2, 2):
        raise StateError("corollary-1 bound needs four qubits", detail=str(rho.dims))
    report = theorem1_bound(rho, tri_method="theorem2", bi_method=method)
    return BoundReport(f"corollary1[{_method_tag(parse_methods(method))}]", report.squared, report.contributions)


def delta_bound(rho, method="best") -> BoundReport:
    """(1/4) * sum of the squared bounds over the seven bipartitions of four parties."""
    rho = _normalized(rho)
    _require_four(rho)
    ev = _Evaluator(rho, parse_methods(method))
    everyone = enumerate_partitions(4, 4)[0]
    contrib = {str(bipartition(4, a)): ev.cut_sq(a) for a in cuts(everyone)}
    return BoundReport(f"delta[{_method_tag(ev.methods)}]", sum(contrib.values()) / 4.0, contrib)


def scheme_bound(rho, scheme: WeightScheme, method="best") -> BoundReport:
    """sum_P w_P * (squared partition bound); refuses schemes with negative coverage slack."""
    rho = _normalized(rho)
    if scheme.n != rho.n:
        raise StateError("scheme does not match the state", detail=f"n={scheme.n} vs n={rho.n}")
    check_scheme(scheme)
    ev = _Evaluator(rho, parse_methods(method))
    contrib = {str(p): ev.partition_sq(p) for p in scheme.weights}
    sq = sum(float(w) * contrib[str(p)] for p, w in scheme.weights.items())
    return BoundReport(f"scheme[{_method_tag(ev.methods)}]", sq, contrib)


__all__ = [
    "BoundReport",
    "MethodError",
    "parse_methods",
    "wootters_concurrence",
    "bipartite_lower_bound",
    "partition_bound",
    "tripartition_bound_relation",
    "substate_mixed",
    "theorem2_bound",
    "theorem1_bound",
    "corollary1_bound",
    "delta_bound",
    "scheme_bound",
]
