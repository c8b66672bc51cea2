import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundary_pick import NotHermitian, Singular, hermitian_eigen, invert, rank, schur_complement, signature
from boundary_pick.hermitian import Signature


def random_hermitian(seed, n, eigs=None):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    if eigs is None:
        eigs = rng.normal(size=n)
    m = q @ np.diag(eigs) @ q.conj().T
    return 0.5 * (m + m.conj().T)


def descartes_signature(m):
    """Inertia from sign changes of the characteristic polynomial (all roots real)."""
    c = np.real(np.poly(m))
    n = len(c) - 1
    scale = np.max(np.abs(c))
    c = np.where(np.abs(c) < 1e-10 * scale, 0.0, c)
    n_zero = 0
    while n_zero < n and c[-1 - n_zero] == 0.0:
        n_zero += 1
    c = c[: len(c) - n_zero]

    def changes(a):
        s = np.sign(a[a != 0])
        return int(np.sum(s[1:] != s[:-1]))

    n_pos = changes(c)
    alt = c * (-1.0) ** np.arange(len(c))[::-1]
    return Signature(n_pos, changes(alt), n_zero)


@given(st.integers(0, 10**6), st.integers(1, 6))
def test_eigenvalues_match_lapack(seed, n):
    m = random_hermitian(seed, n)
    lam, vec = hermitian_eigen(m)
    np.testing.assert_allclose(np.sort(lam), np.linalg.eigvalsh(m), atol=1e-12)
    np.testing.assert_allclose(m @ vec, vec * lam, atol=1e-11)


@given(st.integers(0, 10**6), st.integers(1, 6))
def test_signature_matches_descartes(seed, n):
    rng = np.random.default_rng(seed)
    eigs = rng.choice([-1, 1], n) * rng.uniform(0.2, 3.0, n)
    m = random_hermitian(seed, n, eigs)
    assert signature(m) == descartes_signature(m)


@given(st.integers(0, 10**6), st.integers(2, 6), st.integers(0, 2))
def test_sylvester_inertia(seed, n, n_zero):
    """Congruence by an invertible matrix keeps the inertia."""
    rng = np.random.default_rng(seed)
    n_zero = min(n_zero, n - 1)
    eigs = np.r_[rng.choice([-1, 1], n - n_zero) * rng.uniform(0.5, 2.0, n - n_zero), np.zeros(n_zero)]
    m = random_hermitian(seed, n, eigs)
    s = np.eye(n) + 0.3 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    sig = signature(m)
    assert sig.n_zero == n_zero
    assert signature(s.conj().T @ m @ s) == sig


@given(st.integers(0, 10**6), st.integers(2, 6))
def test_haynsworth_additivity(seed, n):
    rng = np.random.default_rng(seed)
    eigs = rng.choice([-1, 1], n) * rng.uniform(0.5, 2.0, n)
    m = random_hermitian(seed, n, eigs)
    k = int(rng.integers(1, n))
    if np.min(np.abs(np.linalg.eigvalsh(m[:k, :k]))) < 1e-3:
        return
    a, b = signature(m[:k, :k]), signature(schur_complement(m, k))
    total = signature(m)
    assert (a.n_pos + b.n_pos, a.n_neg + b.n_neg) == (total.n_pos, total.n_neg)


def test_zero_and_rank():
    assert signature(np.zeros((3, 3))) == Signature(0, 0, 3)
    assert rank(np.ones((3, 3))) == 1
    assert signature(np.array([[1, 1], [1, 0]])) == Signature(1, 1, 0)


def test_explicit_scale_changes_cutoff():
    m = np.diag([1e-6, -1.0])
    assert signature(m).n_pos == 1
    assert signature(m, zero_tol=1e-3, scale=1.0).n_zero == 1


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eigen(np.array([[1, 2], [0, 1]]))


def test_invert_and_singular():
    m = random_hermitian(3, 4, [1.0, -2.0, 0.5, 3.0])
    np.testing.assert_allclose(invert(m) @ m, np.eye(4), atol=1e-12)
    with pytest.raises(Singular):
        invert(np.ones((2, 2)))
