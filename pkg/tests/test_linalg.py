import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from favprop.linalg import clamp_spectrum, jacobi_eigvalsh


def _random_hermitian(rng, n):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return X + X.conj().T


@pytest.mark.parametrize("n", [1, 2, 3, 5, 10, 16])
def test_jacobi_matches_lapack(n):
    A = _random_hermitian(np.random.default_rng(n), n)
    np.testing.assert_allclose(jacobi_eigvalsh(A), np.linalg.eigvalsh(A), atol=1e-10 * np.abs(A).max())


def test_jacobi_diagonal_input():
    np.testing.assert_array_equal(jacobi_eigvalsh(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0])


def test_jacobi_two_by_two_closed_form():
    a, d, b = 2.0, -1.0, 1.5 - 0.5j
    disc = np.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
    expected = [(a + d) / 2 - disc, (a + d) / 2 + disc]
    np.testing.assert_allclose(jacobi_eigvalsh([[a, b], [np.conj(b), d]]), expected, rtol=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2 ** 32 - 1))
def test_jacobi_trace_and_frobenius(n, seed):
    A = _random_hermitian(np.random.default_rng(seed), n)
    lam = jacobi_eigvalsh(A)
    assert np.sum(lam) == pytest.approx(np.trace(A).real, abs=1e-9 * max(1, np.abs(A).max()) * n)
    assert np.sum(lam ** 2) == pytest.approx(np.linalg.norm(A) ** 2, rel=1e-10)


def test_clamp_spectrum():
    np.testing.assert_array_equal(clamp_spectrum([-1e-12, 1.0, 2.0]), [0.0, 1.0, 2.0])
    with pytest.raises(ArithmeticError):
        clamp_spectrum([-1e-3, 1.0])
    np.testing.assert_array_equal(clamp_spectrum([0.0, 0.0]), [0.0, 0.0])
