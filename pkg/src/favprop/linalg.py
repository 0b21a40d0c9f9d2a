"""Small dense Hermitian eigenvalue routines."""

import numpy as np

__all__ = ["jacobi_eigvalsh", "hermitian_eigvalsh", "clamp_spectrum"]

# Eigenvalues in [-CLAMP_TOL * lam_max, 0) are rounding noise of a PSD matrix.
CLAMP_TOL = 1e-9


def jacobi_eigvalsh(A, tol=1e-12, max_sweeps=60):
    """Eigenvalues of a Hermitian matrix by the cyclic Jacobi method.

    Each rotation first removes the phase of the pivot ``A[p, q]`` and then
    applies a real plane rotation that zeroes it.  Sweeps stop once the
    Frobenius norm of the off-diagonal part is at most ``tol`` times the norm
    of the diagonal.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Hermitian matrix. Only tested against Hermitian input.
    tol : float
    max_sweeps : int

    Returns
    -------
    ndarray, shape (n,)
        Eigenvalues in ascending order.
    """
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("expected a square matrix")
    A = 0.5 * (A + A.conj().T)
    for _ in range(max_sweeps):
        d = np.diag(A)
        diag = np.linalg.norm(d)
        off = np.linalg.norm(A - np.diag(d))
        if off <= tol * diag or off == 0.0:
            return np.sort(np.diag(A).real)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                theta = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                J = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ J
                A[idx, :] = J.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
    raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")


def hermitian_eigvalsh(A):
    """Ascending eigenvalues of a (stack of) Hermitian matrices via LAPACK."""
    return np.linalg.eigvalsh(A)


def clamp_spectrum(lam):
    """Clamp tiny negative eigenvalues of PSD matrices to zero.

    ``lam`` has eigenvalues on the last axis. Values below
    ``-CLAMP_TOL * max(lam)`` indicate a matrix that is not PSD and raise.
    """
    lam = np.array(lam, dtype=float)
    top = np.max(lam, axis=-1, keepdims=True)
    floor = -CLAMP_TOL * np.maximum(top, 0.0)
    if np.any(lam < floor):
        raise ArithmeticError("spectrum has negative eigenvalues beyond rounding")
    return np.maximum(lam, 0.0)
