"""Dense state containers and tensor-index machinery for small multipartite systems.

Basis ordering is row-major over the mixed-radix multi-index ``i1 i2 ... iN``
with subsystem 1 as the most significant digit. Subsystem masks are plain
``int`` bitmasks where bit ``k`` (0-based) stands for subsystem ``k + 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import prod
from pathlib import Path
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = -1e-10
NORM_TOL = 1e-12
TRACE_TOL = 1e-10
SV_ZERO = 1e-12


class StateError(ValueError):
    """A state violates one of its structural invariants.

    ``invariant`` names the violated property, ``magnitude`` is the size of
    the violation (deviation, eigenvalue, ...).
    """

    def __init__(self, invariant: str, magnitude: float | None = None, detail: str = ""):
        self.invariant = invariant
        self.magnitude = magnitude
        msg = invariant
        if magnitude is not None:
            msg += f" (magnitude {magnitude:.3e})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


def _check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) < 1 or any(d < 1 for d in dims):
        raise StateError("dims must be a nonempty sequence of positive integers", detail=str(dims))
    return dims


def check_mask(mask: int, n: int, proper: bool = True) -> int:
    """Validate a subset bitmask over ``n`` subsystems and return it."""
    full = (1 << n) - 1
    if mask <= 0 or mask & ~full:
        raise StateError("subset mask out of range", detail=f"mask={mask:#b}, n={n}")
    if proper and mask == full:
        raise StateError("subset mask must be a proper subset", detail=f"mask={mask:#b}, n={n}")
    return mask


def mask_members(mask: int, n: int) -> list[int]:
    """0-based subsystem indices contained in ``mask``."""
    return [k for k in range(n) if mask >> k & 1]


@dataclass(frozen=True)
class PureState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        dims = _check_dims(self.dims)
        vec = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if vec.size != prod(dims):
            raise StateError("amplitude length does not match dims", detail=f"{vec.size} vs {dims}")
        norm = float(np.linalg.norm(vec))
        if self.normalized and abs(norm - 1.0) > NORM_TOL:
            raise StateError("pure state must have unit norm", abs(norm - 1.0))
        if not self.normalized and norm > 1.0 + NORM_TOL:
            raise StateError("subnormalized state has norm above 1", norm - 1.0)
        vec.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", vec)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def density(self) -> "DensityMatrix":
        v = self.amplitudes
        return DensityMatrix(self.dims, np.outer(v, v.conj()), normalized=self.normalized, validate=False)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian PSD matrix on ``prod(dims)`` levels, possibly subnormalized."""

    dims: tuple[int, ...]
    matrix: np.ndarray
    normalized: bool = True
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        dims = _check_dims(self.dims)
        mat = np.array(self.matrix, dtype=complex)
        d = prod(dims)
        if mat.shape != (d, d):
            raise StateError("matrix shape does not match dims", detail=f"{mat.shape} vs {dims}")
        if self.validate:
            _validate_density(mat, self.normalized)
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def tensor(self) -> np.ndarray:
        return self.matrix.reshape(self.dims + self.dims)


def _validate_density(mat: np.ndarray, normalized: bool) -> None:
    herm = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if herm > HERMITIAN_TOL:
        raise StateError("matrix is not Hermitian", herm)
    lam_min = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0])
    if lam_min < PSD_TOL:
        raise StateError("matrix is not positive semidefinite", lam_min)
    tr = float(np.trace(mat).real)
    if normalized and abs(tr - 1.0) > TRACE_TOL:
        raise StateError("normalized state must have unit trace", abs(tr - 1.0))
    if not normalized and not (0.0 < tr <= 1.0 + TRACE_TOL):
        raise StateError("subnormalized state needs 0 < trace <= 1", tr)


def as_density(state: PureState | DensityMatrix) -> DensityMatrix:
    return state.density() if isinstance(state, PureState) else state


# --------------------------------------------------------------------------
# index machinery


def permute_subsystems(rho: DensityMatrix, order: Sequence[int]) -> DensityMatrix:
    """Reorder subsystems; ``order[k]`` is the old (0-based) index placed at position k."""
    n = rho.n
    order = list(order)
    if sorted(order) != list(range(n)):
        raise StateError("order must be a permutation of the subsystems", detail=str(order))
    t = rho.tensor().transpose(order + [n + k for k in order])
    dims = tuple(rho.dims[k] for k in order)
    d = prod(dims)
    return DensityMatrix(dims, t.reshape(d, d), normalized=rho.normalized, validate=False)


def coarse_grain(rho: DensityMatrix, blocks: Sequence[int]) -> DensityMatrix:
    """View ``rho`` with each bitmask block fused into one subsystem, in block order."""
    n = rho.n
    order = [k for b in blocks for k in mask_members(b, n)]
    if sorted(order) != list(range(n)):
        raise StateError("blocks must partition the subsystems", detail=str([bin(b) for b in blocks]))
    permuted = permute_subsystems(rho, order)
    dims = tuple(prod(rho.dims[k] for k in mask_members(b, n)) for b in blocks)
    return DensityMatrix(dims, permuted.matrix, normalized=rho.normalized, validate=False)


def partial_trace(rho: DensityMatrix | PureState, keep: int) -> DensityMatrix:
    """Reduced matrix on the subsystems in ``keep`` (trace over the rest)."""
    rho = as_density(rho)
    n = rho.n
    check_mask(keep, n, proper=False)
    kept = mask_members(keep, n)
    gone = [k for k in range(n) if k not in kept]
    t = rho.tensor().transpose(kept + gone + [n + k for k in kept] + [n + k for k in gone])
    dk = prod(rho.dims[k] for k in kept)
    dg = prod(rho.dims[k] for k in gone)
    red = np.einsum("ajbj->ab", t.reshape(dk, dg, dk, dg))
    dims = tuple(rho.dims[k] for k in kept)
    return DensityMatrix(dims, red, normalized=rho.normalized, validate=False)


def purity(rho: DensityMatrix | PureState) -> float:
    """Tr(rho^2)."""
    m = as_density(rho).matrix
    # Tr(A A) = sum_ij A_ij A_ji, real for Hermitian A
    return float(np.real(np.sum(m * m.T)))


def pure_marginal_purity(psi: PureState, keep: int) -> float:
    """Tr(rho_keep^2) of a pure (possibly subnormalized) vector, without forming the full projector."""
    n = psi.n
    kept = mask_members(keep, n)
    gone = [k for k in range(n) if k not in kept]
    dk = prod(psi.dims[k] for k in kept)
    m = psi.tensor().transpose(kept + gone).reshape(dk, -1)
    red = m @ m.conj().T
    return float(np.real(np.sum(red * red.T)))


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values; values below ``SV_ZERO`` count as zero."""
    s = np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)
    return float(np.sum(s[s > SV_ZERO]))


def partial_transpose(rho: DensityMatrix, parts: int) -> np.ndarray:
    """Transpose the indices of the subsystems in ``parts``; returns the raw matrix."""
    n = rho.n
    check_mask(parts, n, proper=False)
    perm = list(range(2 * n))
    for k in mask_members(parts, n):
        perm[k], perm[n + k] = n + k, k
    d = rho.matrix.shape[0]
    return rho.tensor().transpose(perm).reshape(d, d)


def realign(rho: DensityMatrix, side_a: int) -> np.ndarray:
    """Realigned matrix R with R[(i,k),(j,l)] = rho[(i,j),(k,l)] for the split side_a | rest.

    For an m x n split the result is m^2 x n^2.
    """
    n = rho.n
    check_mask(side_a, n)
    side_b = ((1 << n) - 1) & ~side_a
    two = coarse_grain(rho, [side_a, side_b])
    m, nn = two.dims
    t = two.matrix.reshape(m, nn, m, nn)  # (i, j, k, l)
    return t.transpose(0, 2, 1, 3).reshape(m * m, nn * nn)


# --------------------------------------------------------------------------
# random states


def random_pure(dims: Sequence[int], seed: int | np.random.Generator | None = None) -> PureState:
    """Haar-random pure state: normalized vector of i.i.d. complex Gaussians."""
    rng = np.random.default_rng(seed)
    d = prod(_check_dims(dims))
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(tuple(dims), v / np.linalg.norm(v))


def random_unitary(d: int, seed: int | np.random.Generator | None = None) -> np.ndarray:
    """Haar unitary via QR of a Ginibre matrix with phase correction."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_mixed(dims: Sequence[int], rank: int, seed: int | np.random.Generator | None = None) -> DensityMatrix:
    """Mixture of ``rank`` Haar pure states with flat-Dirichlet weights."""
    rng = np.random.default_rng(seed)
    dims = tuple(dims)
    w = rng.dirichlet(np.ones(rank))
    d = prod(dims)
    mat = np.zeros((d, d), dtype=complex)
    for p in w:
        v = random_pure(dims, rng).amplitudes
        mat += p * np.outer(v, v.conj())
    return DensityMatrix(dims, mat)


def random_product_mixed(dims: Sequence[int], seed: int | np.random.Generator | None = None) -> DensityMatrix:
    """Tensor product of independent random single-subsystem mixed states."""
    rng = np.random.default_rng(seed)
    mat = np.ones((1, 1), dtype=complex)
    for d in dims:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        local = g @ g.conj().T
        mat = np.kron(mat, local / np.trace(local).real)
    return DensityMatrix(tuple(dims), mat)


def product_pure(vectors: Sequence[np.ndarray]) -> PureState:
    v = np.ones(1, dtype=complex)
    for x in vectors:
        x = np.asarray(x, dtype=complex)
        v = np.kron(v, x / np.linalg.norm(x))
    return PureState(tuple(len(x) for x in vectors), v)


# --------------------------------------------------------------------------
# JSON state files


def _encode_complex(a: np.ndarray):
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [_encode_complex(x) for x in a]


def _decode_complex(data, ndim: int) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise StateError("state data must be nested [re, im] pairs", detail=f"got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_json(state: PureState | DensityMatrix) -> dict:
    if isinstance(state, PureState):
        return {"dims": list(state.dims), "kind": "pure", "data": _encode_complex(state.amplitudes)}
    return {"dims": list(state.dims), "kind": "mixed", "data": _encode_complex(state.matrix)}


def state_from_json(obj: dict) -> PureState | DensityMatrix:
    """Parse the ``{"dims", "kind", "data"}`` format, validating all invariants."""
    try:
        dims = obj["dims"]
        kind = obj["kind"]
        data = obj["data"]
    except (KeyError, TypeError) as exc:
        raise StateError("state file needs keys dims, kind, data", detail=str(exc)) from None
    if kind == "pure":
        return PureState(tuple(dims), _decode_complex(data, 1))
    if kind == "mixed":
        return DensityMatrix(tuple(dims), _decode_complex(data, 2))
    raise StateError("kind must be 'pure' or 'mixed'", detail=repr(kind))


def load_state(path: str | Path) -> PureState | DensityMatrix:
    with open(path) as fh:
        return state_from_json(json.load(fh))


def save_state(state: PureState | DensityMatrix, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_json(state), fh)
