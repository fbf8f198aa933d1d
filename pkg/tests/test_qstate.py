import itertools
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import ket
from mpconc.qstate import (
    DensityMatrix,
    PureState,
    StateError,
    load_state,
    partial_trace,
    partial_transpose,
    product_pure,
    pure_marginal_purity,
    purity,
    random_mixed,
    random_pure,
    random_unitary,
    realign,
    save_state,
    state_from_json,
    state_to_json,
    trace_norm,
)

seeds = st.integers(0, 2**32 - 1)


def brute_partial_trace(mat, dims, keep):
    """Loop over multi-indices; independent of the reshape/einsum route."""
    n = len(dims)
    kept = [k for k in range(n) if keep >> k & 1]
    kd = [dims[k] for k in kept]
    out = np.zeros((int(np.prod(kd)),) * 2, dtype=complex)
    flat = lambda idx: int(np.ravel_multi_index(idx, dims))
    for row in itertools.product(*(range(d) for d in dims)):
        for col in itertools.product(*(range(d) for d in dims)):
            if any(row[k] != col[k] for k in range(n) if k not in kept):
                continue
            r = int(np.ravel_multi_index([row[k] for k in kept], kd))
            c = int(np.ravel_multi_index([col[k] for k in kept], kd))
            out[r, c] += mat[flat(row), flat(col)]
    return out


def brute_realign(mat, m, n):
    out = np.zeros((m * m, n * n), dtype=complex)
    for i, j, k, l in itertools.product(range(m), range(n), range(m), range(n)):
        out[i * m + k, j * n + l] = mat[i * n + j, k * n + l]
    return out


# -- partial trace -----------------------------------------------------------


def test_bell_marginal_is_maximally_mixed(bell):
    np.testing.assert_allclose(partial_trace(bell, 0b01).matrix, np.eye(2) / 2, atol=1e-15)


def test_product_marginal():
    rng = np.random.default_rng(3)
    a = random_mixed((2,), 2, rng).matrix
    b = random_mixed((3,), 2, rng).matrix
    rho = DensityMatrix((2, 3), np.kron(a, b))
    np.testing.assert_allclose(partial_trace(rho, 0b01).matrix, a, atol=1e-14)
    np.testing.assert_allclose(partial_trace(rho, 0b10).matrix, b, atol=1e-14)


def test_double_bell_marginal_13(double_bell):
    rho = double_bell.density().matrix
    expected = brute_partial_trace(rho, (2, 2, 2, 2), 0b0101)
    np.testing.assert_allclose(expected, np.eye(4) / 4, atol=1e-15)
    np.testing.assert_allclose(partial_trace(double_bell, 0b0101).matrix, expected, atol=1e-15)


@given(seeds, st.integers(1, 6))
def test_partial_trace_matches_loop_oracle(seed, keep):
    dims = (2, 3, 2)
    rho = random_mixed(dims, 3, seed)
    red = partial_trace(rho, keep)
    np.testing.assert_allclose(red.matrix, brute_partial_trace(rho.matrix, dims, keep), atol=1e-13)
    assert abs(red.trace - 1) < 1e-12
    assert np.max(np.abs(red.matrix - red.matrix.conj().T)) < 1e-12


def test_partial_trace_rejects_bad_mask(bell):
    with pytest.raises(StateError):
        partial_trace(bell, 0b100)
    with pytest.raises(StateError):
        partial_trace(bell, 0)


@given(seeds)
def test_complementary_purities_agree(seed):
    psi = random_pure((2, 3, 2, 2), seed)
    for a in range(1, 15):
        pa = purity(partial_trace(psi, a))
        assert abs(pa - purity(partial_trace(psi, 15 & ~a))) < 1e-10
        assert abs(pa - pure_marginal_purity(psi, a)) < 1e-12


# -- purity ------------------------------------------------------------------


def test_purity_values(double_bell):
    assert purity(double_bell) == pytest.approx(1.0, abs=1e-14)
    assert purity(DensityMatrix((2, 2), np.eye(4) / 4)) == pytest.approx(0.25, abs=1e-15)
    t = 0.5
    v = double_bell.amplitudes
    m = (1 - t) / 16 * np.eye(16) + t * np.outer(v, v.conj())
    # direct matrix square, and the eigenvalue count 15 x (1-t)/16, 1 x (1-t)/16 + t
    assert np.trace(m @ m).real == pytest.approx(19 / 64, abs=1e-15)
    assert 15 * ((1 - t) / 16) ** 2 + ((1 - t) / 16 + t) ** 2 == pytest.approx(19 / 64, abs=1e-15)
    assert purity(DensityMatrix((2, 2, 2, 2), m)) == pytest.approx(19 / 64, abs=1e-14)


@given(seeds, st.integers(1, 6))
def test_purity_range(seed, rank):
    rho = random_mixed((2, 3), rank, seed)
    assert 1 / 6 - 1e-12 <= purity(rho) <= 1 + 1e-12


# -- trace norm, partial transpose, realignment ---------------------------------


def test_trace_norm_examples(bell):
    assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)
    assert trace_norm(random_unitary(5, 1)) == pytest.approx(5.0, abs=1e-12)
    pt = partial_transpose(bell.density(), 0b10)
    np.testing.assert_allclose(np.linalg.eigvalsh(pt), [-0.5, 0.5, 0.5, 0.5], atol=1e-15)
    assert trace_norm(pt) == pytest.approx(2.0, abs=1e-14)


@given(seeds)
def test_trace_norm_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    u, v = random_unitary(4, rng), random_unitary(6, rng)
    assert abs(trace_norm(u @ m @ v) - trace_norm(m)) < 1e-9


@given(seeds)
def test_trace_norm_bounds_trace(seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    assert trace_norm(m) >= abs(np.trace(m)) - 1e-12


def test_partial_transpose_product_state_is_ppt():
    rng = np.random.default_rng(0)
    a, b = random_mixed((2,), 2, rng).matrix, random_mixed((3,), 2, rng).matrix
    rho = DensityMatrix((2, 3), np.kron(a, b))
    pt = partial_transpose(rho, 0b10)
    np.testing.assert_allclose(pt, np.kron(a, b.T), atol=1e-15)
    assert trace_norm(pt) == pytest.approx(1.0, abs=1e-12)


def test_partial_transpose_real_diagonal_unchanged():
    rho = DensityMatrix((2, 2, 2), np.diag(np.arange(1, 9) / 36))
    for parts in range(1, 8):
        np.testing.assert_array_equal(partial_transpose(rho, parts), rho.matrix)


@given(seeds, st.integers(1, 7))
def test_partial_transpose_involution(seed, parts):
    rho = random_mixed((2, 3, 2), 3, seed)
    once = partial_transpose(rho, parts)
    assert np.max(np.abs(once - once.conj().T)) < 1e-12
    assert abs(np.trace(once) - 1) < 1e-12
    twice = partial_transpose(DensityMatrix(rho.dims, once, validate=False), parts)
    assert np.max(np.abs(twice - rho.matrix)) <= 1e-15


@given(seeds)
def test_realign_matches_definition(seed):
    rho = random_mixed((2, 3), 2, seed)
    r = realign(rho, 0b01)
    assert r.shape == (4, 9)
    np.testing.assert_allclose(r, brute_realign(rho.matrix, 2, 3), atol=1e-15)


def test_realign_examples(bell):
    assert trace_norm(realign(product_pure([ket("0") + ket("1"), ket("1")]).density(), 1)) == pytest.approx(1.0)
    assert trace_norm(realign(bell.density(), 1)) == pytest.approx(2.0, abs=1e-14)
    # identity: the realigned matrix is vec(I_m) vec(I_n)^T / (mn), single singular value sqrt(mn)/(mn)
    for m, n in [(2, 2), (2, 3), (3, 3)]:
        oracle = trace_norm(brute_realign(np.eye(m * n) / (m * n), m, n))
        assert oracle == pytest.approx(1 / np.sqrt(m * n), abs=1e-14)
        rho = DensityMatrix((m, n), np.eye(m * n) / (m * n))
        assert trace_norm(realign(rho, 1)) == pytest.approx(oracle, abs=1e-14)


def test_realign_rejects_trivial_split(bell):
    with pytest.raises(StateError):
        realign(bell.density(), 0b11)


# -- random states -------------------------------------------------------------


@given(seeds)
def test_random_pure_normalized_and_deterministic(seed):
    a = random_pure((2, 3), seed)
    assert abs(np.linalg.norm(a.amplitudes) - 1) < 1e-12
    np.testing.assert_array_equal(a.amplitudes, random_pure((2, 3), seed).amplitudes)


def test_random_pure_seeds_differ():
    assert not np.allclose(random_pure((2, 2), 1).amplitudes, random_pure((2, 2), 2).amplitudes)


def test_haar_marginal_purity_mean():
    # Haar average of Tr(rho_A^2) on d_A x d_B is (d_A + d_B) / (d_A d_B + 1) = 4/5 for two qubits
    rng = np.random.default_rng(42)
    vals = np.array([pure_marginal_purity(random_pure((2, 2), rng), 1) for _ in range(10_000)])
    sigma = vals.std() / np.sqrt(vals.size)
    assert abs(vals.mean() - 0.8) < 3 * sigma


# -- validation and JSON -----------------------------------------------------------


def test_density_validation_names_invariant():
    with pytest.raises(StateError, match="Hermitian") as err:
        DensityMatrix((2,), [[0.5, 0.3], [0.0, 0.5]])
    assert err.value.magnitude == pytest.approx(0.3)
    with pytest.raises(StateError, match="positive semidefinite") as err:
        DensityMatrix((2,), [[1.5, 0], [0, -0.5]])
    assert err.value.magnitude == pytest.approx(-0.5)
    with pytest.raises(StateError, match="unit trace"):
        DensityMatrix((2,), np.eye(2))
    sub = DensityMatrix((2,), np.eye(2) / 4, normalized=False)
    assert sub.trace == pytest.approx(0.5)
    with pytest.raises(StateError, match="unit norm"):
        PureState((2,), [1.0, 1.0])


def test_json_round_trip(tmp_path, ghz3):
    rho = random_mixed((2, 2), 2, 5)
    for state in (ghz3, rho):
        path = tmp_path / "s.json"
        save_state(state, path)
        back = load_state(path)
        assert type(back) is type(state)
        assert back.dims == state.dims
        raw = json.loads(path.read_text())
        assert raw["kind"] in ("pure", "mixed")
    np.testing.assert_allclose(state_from_json(state_to_json(rho)).matrix, rho.matrix)


def test_json_rejects_bad_input():
    with pytest.raises(StateError, match="positive semidefinite"):
        state_from_json({"dims": [2], "kind": "mixed", "data": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]})
    with pytest.raises(StateError, match="kind"):
        state_from_json({"dims": [2], "kind": "other", "data": []})
    with pytest.raises(StateError, match="keys"):
        state_from_json({"dims": [2]})
