"""Set partitions of subsystem labels and weight schemes over them.

A weight scheme assigns ``w_P >= 0`` to partitions ``P`` of ``{1..N}``. Writing
every squared partition concurrence of a pure state as a sum of linear
entropies ``1 - Tr(rho_a^2)`` over the subsets ``a`` that are unions of its
blocks, the weighted sum ``sum_P w_P C_P^2`` is dominated by ``C_N^2`` exactly
when every subset keeps a nonnegative coverage slack::

    slack(a) = 2**(2 - N) - sum_P w_P * 2**(2 - M_P) * [a is a union of blocks of P]

All slack arithmetic is exact (``fractions.Fraction``).
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Literal, Mapping, Sequence


class PartitionError(ValueError):
    pass


class SchemeError(ValueError):
    """A weight scheme fails the coverage condition (or is malformed)."""

    def __init__(self, msg: str, subset: int | None = None, slack: Fraction | None = None):
        self.subset = subset
        self.slack = slack
        super().__init__(msg)


def _members(mask: int) -> list[int]:
    out, k = [], 0
    while mask >> k:
        if mask >> k & 1:
            out.append(k)
        k += 1
    return out


def mask_to_str(mask: int) -> str:
    """``0b1011`` -> ``"124"`` (1-based labels)."""
    return "".join(str(k + 1) for k in _members(mask))


def str_to_mask(text: str) -> int:
    mask = 0
    for ch in text:
        if not ch.isdigit() or ch == "0":
            raise PartitionError(f"bad subsystem label {ch!r} in {text!r}")
        bit = 1 << (int(ch) - 1)
        if mask & bit:
            raise PartitionError(f"label {ch} repeated in {text!r}")
        mask |= bit
    return mask


@dataclass(frozen=True, order=False)
class Partition:
    """Blocks are bitmasks, kept sorted by their smallest element."""

    n: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(b) for b in self.blocks)
        full = (1 << self.n) - 1
        seen = 0
        for b in blocks:
            if b <= 0:
                raise PartitionError("empty block")
            if b & seen:
                raise PartitionError(f"overlapping blocks in {self._fmt(blocks)}")
            seen |= b
        if seen != full:
            raise PartitionError(f"blocks of {self._fmt(blocks)} do not cover 1..{self.n}")
        blocks = tuple(sorted(blocks, key=lambda b: b & -b))
        object.__setattr__(self, "blocks", blocks)

    @staticmethod
    def _fmt(blocks: Iterable[int]) -> str:
        return "|".join(mask_to_str(b) for b in blocks)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Partition":
        """Parse ``"1|24|3"``; ``n`` defaults to the largest label present."""
        parts = text.strip().split("|")
        if any(not p for p in parts):
            raise PartitionError(f"empty block in {text!r}")
        blocks = [str_to_mask(p) for p in parts]
        if n is None:
            n = max(max(_members(b)) for b in blocks) + 1
        return cls(n, tuple(blocks))

    @property
    def m(self) -> int:
        return len(self.blocks)

    @property
    def profile(self) -> tuple[int, ...]:
        """Block sizes, largest first."""
        return tuple(sorted((len(_members(b)) for b in self.blocks), reverse=True))

    def sort_key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(_members(b)) for b in self.blocks)

    def __str__(self) -> str:
        return self._fmt(self.blocks)


def enumerate_partitions(n: int, m: int) -> list[Partition]:
    """All partitions of ``{1..n}`` into exactly ``m`` blocks, in canonical order."""
    if not 1 <= m <= n:
        raise PartitionError(f"need 1 <= m <= n, got n={n}, m={m}")
    out = [Partition(n, tuple(bl)) for bl in _growth(n, m)]
    return sorted(out, key=Partition.sort_key)


def _growth(n: int, m: int) -> Iterator[list[int]]:
    # restricted growth strings: element k joins an existing block or opens the next one
    def rec(k: int, blocks: list[int]) -> Iterator[list[int]]:
        if n - k < m - len(blocks):
            return
        if k == n:
            if len(blocks) == m:
                yield list(blocks)
            return
        for i in range(len(blocks)):
            blocks[i] |= 1 << k
            yield from rec(k + 1, blocks)
            blocks[i] &= ~(1 << k)
        if len(blocks) < m:
            blocks.append(1 << k)
            yield from rec(k + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def realized_subsets(p: Partition) -> frozenset[int]:
    """Nonempty proper subsets of ``{1..n}`` that are unions of blocks of ``p``."""
    out = set()
    for sel in range(1, (1 << p.m) - 1):
        mask = 0
        for i, b in enumerate(p.blocks):
            if sel >> i & 1:
                mask |= b
        out.add(mask)
    return frozenset(out)


def cuts(p: Partition) -> list[int]:
    """The 2**(m-1) - 1 bipartitions of ``p``'s blocks, each given by the side holding block 1."""
    first = p.blocks[0]
    return sorted(a for a in realized_subsets(p) if a & first)


def bipartition(n: int, side: int) -> Partition:
    full = (1 << n) - 1
    return Partition(n, (side, full & ~side))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    return Fraction(str(x))


@dataclass
class WeightScheme:
    n: int
    weights: dict[Partition, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for p, w in self.weights.items():
            if isinstance(p, str):
                p = Partition.parse(p, self.n)
            if p.n != self.n:
                raise SchemeError(f"partition {p} is over {p.n} subsystems, scheme is over {self.n}")
            w = _as_fraction(w)
            if w < 0:
                raise SchemeError(f"negative weight {w} on {p}")
            clean[p] = w
        self.weights = dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key()))

    def to_json(self) -> dict:
        return {"n": self.n, "weights": {str(p): str(w) for p, w in self.weights.items()}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "WeightScheme":
        try:
            return cls(int(obj["n"]), dict(obj["weights"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, SchemeError):
                raise
            raise SchemeError(f"malformed scheme: {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> "WeightScheme":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def profile_uniform(self) -> bool:
        by_profile = defaultdict(set)
        for p, w in self.weights.items():
            by_profile[p.profile].add(w)
        return all(len(ws) == 1 for ws in by_profile.values())


def theorem1_scheme() -> WeightScheme:
    """Four-party scheme: 1/6 on each i|j|kl tripartition, 1/12 on each 2|2 cut."""
    w = {p: Fraction(1, 6) for p in enumerate_partitions(4, 3)}
    w.update({p: Fraction(1, 12) for p in enumerate_partitions(4, 2) if p.profile == (2, 2)})
    return WeightScheme(4, w)


def verify_weights(n: int, scheme: WeightScheme) -> dict[int, Fraction]:
    """Coverage slack for every nonempty proper subset mask of ``{1..n}``."""
    if scheme.n != n:
        raise SchemeError(f"scheme is over {scheme.n} subsystems, expected {n}")
    cap = Fraction(2) ** (2 - n)
    slack = {a: cap for a in range(1, (1 << n) - 1)}
    for p, w in scheme.weights.items():
        if p.n != n:
            raise SchemeError(f"partition {p} is over {p.n} subsystems, expected {n}")
        contrib = w * Fraction(2) ** (2 - p.m)
        for a in realized_subsets(p):
            slack[a] -= contrib
    return slack


def check_scheme(scheme: WeightScheme) -> None:
    """Raise ``SchemeError`` naming the worst subset if any slack is negative."""
    slack = verify_weights(scheme.n, scheme)
    if not slack:
        return
    worst = min(slack, key=lambda a: (slack[a], a))
    if slack[worst] < 0:
        raise SchemeError(
            f"coverage violated on subset {{{mask_to_str(worst)}}}: slack {slack[worst]}",
            subset=worst,
            slack=slack[worst],
        )


# --------------------------------------------------------------------------
# weight composition


def _simplex_max(c: Sequence[Fraction], a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Exact maximize c.x s.t. a x <= b, x >= 0, for b >= 0 (slack basis is feasible).

    Dense tableau, Bland's rule. Every variable must appear with a positive
    coefficient in some row, otherwise the problem is unbounded.
    """
    rows, cols = len(a), len(c)
    tab = [list(a[i]) + [Fraction(int(i == j)) for j in range(rows)] + [b[i]] for i in range(rows)]
    obj = [-ci for ci in c] + [Fraction(0)] * rows + [Fraction(0)]
    basis = [cols + i for i in range(rows)]
    width = cols + rows
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(rows):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise ValueError("linear program is unbounded")
        r = best[1]
        piv = tab[r][enter]
        tab[r] = [x / piv for x in tab[r]]
        for i in range(rows):
            if i != r and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, tab[r])]
        basis[r] = enter
    x = [Fraction(0)] * cols
    for i, v in enumerate(basis):
        if v < cols:
            x[v] = tab[i][-1]
    return x


def compose_weights(
    n: int,
    family: Sequence[Partition],
    objective: Literal["max_uniform", "max_total"] = "max_uniform",
) -> WeightScheme:
    """Largest valid weights on ``family`` under the coverage condition.

    ``max_total`` maximizes the total weight with one variable per partition;
    ``max_uniform`` does the same with one shared weight per block-size profile.
    When both reach the same total, ``max_total`` returns the profile-uniform
    weights (check with ``WeightScheme.profile_uniform``). Partitions that
    realize no subset (a single block) get weight 0.
    """
    if not family:
        raise SchemeError("empty partition family")
    family = sorted(set(family), key=Partition.sort_key)
    for p in family:
        if p.n != n:
            raise SchemeError(f"partition {p} is over {p.n} subsystems, expected {n}")
    live = [p for p in family if p.m >= 2]
    weights = {p: Fraction(0) for p in family}
    if not live:
        return WeightScheme(n, weights)

    if objective not in ("max_uniform", "max_total"):
        raise SchemeError(f"unknown objective {objective!r}")
    by_profile: dict[tuple[int, ...], list[Partition]] = defaultdict(list)
    for p in live:
        by_profile[p.profile].append(p)
    uniform_groups = list(by_profile.values())
    x_uniform, total_uniform = _solve_groups(n, uniform_groups)
    groups, x = uniform_groups, x_uniform
    if objective == "max_total":
        single = [[p] for p in live]
        x_single, total_single = _solve_groups(n, single)
        # prefer the symmetric solution whenever it attains the optimum
        if total_single > total_uniform:
            groups, x = single, x_single
    for group, xj in zip(groups, x):
        for p in group:
            weights[p] = xj
    return WeightScheme(n, weights)


def _solve_groups(n: int, groups: list[list[Partition]]) -> tuple[list[Fraction], Fraction]:
    subsets = sorted(set().union(*(realized_subsets(p) for g in groups for p in g)))
    row_of = {s: i for i, s in enumerate(subsets)}
    a = [[Fraction(0)] * len(groups) for _ in subsets]
    for j, group in enumerate(groups):
        for p in group:
            coeff = Fraction(2) ** (2 - p.m)
            for s in realized_subsets(p):
                a[row_of[s]][j] += coeff
    c = [Fraction(len(g)) for g in groups]
    x = _simplex_max(c, a, [Fraction(2) ** (2 - n)] * len(subsets))
    return x, sum(ci * xi for ci, xi in zip(c, x))
