import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entspectra.errors import InvalidInputError
from entspectra.linalg import (
    hermitian_eigen,
    is_psd,
    kron,
    min_eigenvalue,
    operator_norm,
    psd_inv_sqrt,
    psd_sqrt,
)
from entspectra.states import bell_state, partial_trace_b, random_unitary

from conftest import random_hermitian, random_psd


def closed_form_2x2(a):
    tr = (a[0, 0] + a[1, 1]).real
    det = (a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]).real
    disc = np.sqrt(tr**2 - 4 * det)
    return np.array([(tr + disc) / 2, (tr - disc) / 2])


def test_eigen_diagonal_sorts_descending():
    w, u = hermitian_eigen(np.diag([0.2, 0.8]))
    np.testing.assert_allclose(w, [0.8, 0.2], atol=1e-15)
    np.testing.assert_allclose(np.abs(u), [[0, 1], [1, 0]], atol=1e-15)


def test_eigen_pauli_x():
    w, _ = hermitian_eigen([[0, 1], [1, 0]])
    np.testing.assert_allclose(w, [1, -1], atol=1e-15)


def test_eigen_2x2_closed_form(rng):
    for _ in range(50):
        a = random_hermitian(rng, 2)
        np.testing.assert_allclose(hermitian_eigen(a).eigenvalues, closed_form_2x2(a), rtol=0, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 16), seed=st.integers(0, 2**32 - 1), scale=st.sampled_from([1e-6, 1.0, 1e3]))
def test_eigen_reconstruction_and_unitarity(n, seed, scale):
    a = random_hermitian(np.random.default_rng(seed), n, scale)
    w, u = hermitian_eigen(a)
    norm = max(1.0, np.linalg.norm(a))
    assert np.all(np.diff(w) <= 0)
    assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= 1e-10 * n
    assert np.linalg.norm((u * w) @ u.conj().T - a) <= 1e-10 * norm
    assert abs(w.sum() - np.trace(a).real) <= 1e-10 * n * norm
    # LAPACK as an independent cross-check
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a)[::-1], atol=1e-10 * norm)


def test_eigen_degenerate_is_deterministic():
    a = np.eye(4) / 4
    first, second = hermitian_eigen(a), hermitian_eigen(a)
    np.testing.assert_array_equal(first.eigenvectors, second.eigenvectors)


def test_eigen_errors():
    with pytest.raises(InvalidInputError, match="NOT_SQUARE"):
        hermitian_eigen(np.zeros((2, 3)))
    with pytest.raises(InvalidInputError, match="NOT_HERMITIAN"):
        hermitian_eigen([[0, 1], [0, 0]])
    with pytest.raises(InvalidInputError, match="NOT_FINITE"):
        hermitian_eigen([[np.nan, 0], [0, 1]])


def test_kron_examples(rng):
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))
    a, b = rng.standard_normal((3, 3)), rng.standard_normal((2, 2)) + 1j
    assert np.isclose(np.trace(kron(a, b)), np.trace(a) * np.trace(b))
    # B index runs fastest: entry [(i,k),(j,l)] at (i*2 + k, j*2 + l)
    k = kron(a, b)
    assert k[1 * 2 + 0, 2 * 2 + 1] == a[1, 2] * b[0, 1]


def test_min_eigenvalue_examples():
    assert min_eigenvalue(np.eye(2)) == pytest.approx(1)
    assert min_eigenvalue(np.diag([0.5, -0.5])) == pytest.approx(-0.5)
    bell = bell_state()
    gap = kron(partial_trace_b(bell), np.eye(2)) - bell.rho
    assert min_eigenvalue(gap) == pytest.approx(-0.5, abs=1e-12)


def test_is_psd_examples():
    assert is_psd(np.zeros((3, 3)))
    assert is_psd(np.diag([1, -1e-15]), 1e-9)
    assert not is_psd(np.diag([1, -0.1]), 1e-9)


def test_psd_sqrt_examples(rng):
    np.testing.assert_allclose(psd_sqrt(np.diag([4, 9])), np.diag([2, 3]), atol=1e-14)
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    p = np.outer(v, v.conj()) / np.vdot(v, v)
    np.testing.assert_allclose(psd_sqrt(p), p, atol=1e-12)
    with pytest.raises(InvalidInputError, match="NOT_PSD"):
        psd_sqrt(np.diag([1, -0.5]))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 10), seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 10))
def test_psd_sqrt_squares_back(n, seed, rank):
    a = random_psd(np.random.default_rng(seed), n, min(rank, n))
    s = psd_sqrt(a)
    assert np.linalg.norm(s @ s - a) <= 1e-9 * max(1, np.linalg.norm(a))
    assert min_eigenvalue(s) >= -1e-12 * max(1, np.linalg.norm(s))


def test_psd_inv_sqrt_examples(rng):
    np.testing.assert_allclose(psd_inv_sqrt(np.diag([4, 1])), np.diag([0.5, 1]), atol=1e-14)
    np.testing.assert_allclose(psd_inv_sqrt(np.diag([1, 0])), np.diag([1, 0]), atol=1e-14)
    a = random_psd(rng, 5)
    r = psd_inv_sqrt(a)
    np.testing.assert_allclose(r @ r @ a, np.eye(5), atol=1e-9)


def test_psd_inv_sqrt_projects_onto_support(rng):
    a = random_psd(rng, 5, rank=3)
    r = psd_inv_sqrt(a)
    w, u = np.linalg.eigh(a)
    support = u[:, w > 1e-9]
    np.testing.assert_allclose(r @ a @ r, support @ support.conj().T, atol=1e-9)


def test_operator_norm_examples(rng):
    assert operator_norm(random_unitary(4, 3)) == pytest.approx(1, abs=1e-12)
    assert operator_norm(np.diag([0.3, 0.7])) == pytest.approx(0.7, abs=1e-14)
    a = rng.standard_normal((3, 5))
    assert operator_norm(a) == pytest.approx(np.linalg.norm(a, 2), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_operator_norm_unitary_invariance(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    u, v = random_unitary(n, rng), random_unitary(n, rng)
    assert abs(operator_norm(u @ a @ v) - operator_norm(a)) <= 1e-9 * max(1, operator_norm(a))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1), shrink=st.floats(0.0, 1.0))
def test_inverse_sqrt_ordering_gives_contraction(n, seed, shrink):
    # 0 <= A <= B built as A = B^{1/2} K B^{1/2} with 0 <= K <= I
    rng = np.random.default_rng(seed)
    b = random_psd(rng, n) + 0.05 * np.eye(n)
    k = random_psd(rng, n)
    k *= shrink / np.linalg.eigvalsh(k)[-1]
    bh = psd_sqrt(b)
    a = bh @ k @ bh
    a = (a + a.conj().T) / 2
    assert operator_norm(psd_inv_sqrt(b) @ psd_sqrt(a)) <= 1 + 1e-9
