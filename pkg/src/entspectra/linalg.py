"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The Hermitian
eigensolver is a cyclic complex Jacobi method; everything else that needs a
spectrum (PSD tests, square roots, operator norms) is built on top of it.
"""

from __future__ import annotations

from typing import NamedTuple

import numba
import numpy as np

from .errors import InvalidInputError, NumericalError

__all__ = [
    "HERMITIAN_RTOL",
    "KERNEL_RTOL",
    "PSD_TOL",
    "HermitianEigen",
    "as_matrix",
    "dagger",
    "hermitian_eigen",
    "hermiticity_residual",
    "is_psd",
    "kron",
    "kernel_threshold",
    "min_eigenvalue",
    "operator_norm",
    "psd_inv_sqrt",
    "psd_sqrt",
]

HERMITIAN_RTOL = 1e-10
KERNEL_RTOL = 1e-12
PSD_TOL = 1e-9
JACOBI_RTOL = 1e-13
MAX_SWEEPS = 100


class HermitianEigen(NamedTuple):
    """Eigendecomposition ``a = U diag(w) U^dagger`` with ``w`` descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a, *, square=True, name="matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D complex128 array (copying only if needed)."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {arr.shape}", "NOT_MATRIX")
    if square and arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {arr.shape}", "NOT_SQUARE")
    if not np.all(np.isfinite(arr)):
        bad = tuple(int(i) for i in np.argwhere(~np.isfinite(arr))[0])
        raise InvalidInputError(f"{name} has a non-finite entry at {bad}", "NOT_FINITE")
    return arr


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hermiticity_residual(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - dagger(a)))


def _hermitian(a, name="matrix") -> np.ndarray:
    """Validate Hermiticity and return the symmetrized matrix ``(A + A^dagger)/2``."""
    arr = as_matrix(a, name=name)
    scale = max(1.0, float(np.linalg.norm(arr)))
    res = hermiticity_residual(arr)
    if res > HERMITIAN_RTOL * scale:
        raise InvalidInputError(
            f"{name} is not Hermitian (residual {res:.3e} > {HERMITIAN_RTOL * scale:.3e})",
            "NOT_HERMITIAN",
        )
    return 0.5 * (arr + dagger(arr))


@numba.njit(cache=True)
def _jacobi(a, tol, max_sweeps):
    # In-place cyclic Jacobi on a Hermitian matrix. Each rotation removes the
    # phase of a[p, q] and then applies a real symmetric Schur rotation.
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if np.sqrt(off) <= tol:
            w = np.empty(n)
            for i in range(n):
                w[i] = a[i, i].real
            return w, v, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                ph = apq / mag
                cph = np.conj(ph)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # rotation J = [[c, s], [-s*conj(ph), c*conj(ph)]] on (p, q)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * cph * akq
                    a[k, q] = s * akp + c * cph * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * ph * aqk
                    a[q, k] = s * apk + c * ph * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * cph * vkq
                    v[k, q] = s * vkp + c * cph * vkq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    return np.zeros(n), v, False


def hermitian_eigen(a) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Parameters
    ----------
    a : array_like
        Square Hermitian matrix. Hermiticity is checked to a relative
        tolerance of ``1e-10`` and the input is symmetrized before use.

    Returns
    -------
    HermitianEigen
        Eigenvalues sorted in decreasing order and the unitary whose
        ``k``-th column is the eigenvector for eigenvalue ``k``.

    Raises
    ------
    InvalidInputError
        ``NOT_SQUARE`` or ``NOT_HERMITIAN``.
    NumericalError
        ``NO_CONVERGENCE`` if 100 sweeps do not reduce the off-diagonal
        norm below ``1e-13 * max(1, ||a||_F)``.
    """
    h = _hermitian(a)
    n = h.shape[0]
    if n == 0:
        return HermitianEigen(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    tol = JACOBI_RTOL * max(1.0, float(np.linalg.norm(h)))
    w, v, ok = _jacobi(h.copy(), tol, MAX_SWEEPS)
    if not ok:
        raise NumericalError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps", "NO_CONVERGENCE")
    order = np.argsort(-w, kind="stable")
    return HermitianEigen(w[order], v[:, order])


def kron(a, b) -> np.ndarray:
    """Kronecker product with the second factor's index running fastest.

    Entry ``[(i, k), (j, l)]`` of the result, at flat position
    ``(i * p + k, j * q + l)``, equals ``a[i, j] * b[k, l]``.
    """
    return np.kron(as_matrix(a, square=False), as_matrix(b, square=False))


def min_eigenvalue(a) -> float:
    return float(hermitian_eigen(a).eigenvalues[-1])


def is_psd(a, tol: float = PSD_TOL) -> bool:
    """True iff ``min_eig(a) >= -tol * max(1, max_eig(a))``."""
    w = hermitian_eigen(a).eigenvalues
    if w.size == 0:
        return True
    return bool(w[-1] >= -tol * max(1.0, w[0]))


def kernel_threshold(eigenvalues) -> float:
    """Eigenvalues at or below this value are treated as exact zeros."""
    lmax = float(eigenvalues[0]) if len(eigenvalues) else 0.0
    return KERNEL_RTOL * max(1.0, lmax)


def _psd_eigen(a, tol=PSD_TOL):
    w, u = hermitian_eigen(a)
    if w.size and w[-1] < -tol * max(1.0, w[0]):
        raise InvalidInputError(f"matrix is not PSD (min eigenvalue {w[-1]:.3e})", "NOT_PSD")
    support = w > kernel_threshold(w)
    return w, u, support


def psd_sqrt(a) -> np.ndarray:
    """Hermitian PSD square root; kernel-level eigenvalues are clamped to 0."""
    w, u, support = _psd_eigen(a)
    root = np.where(support, np.sqrt(np.where(support, w, 0.0)), 0.0)
    s = (u * root) @ dagger(u)
    return 0.5 * (s + dagger(s))


def psd_inv_sqrt(a) -> np.ndarray:
    """Inverse square root on the support of ``a``, zero on its kernel."""
    w, u, support = _psd_eigen(a)
    inv_root = np.where(support, 1.0 / np.sqrt(np.where(support, w, 1.0)), 0.0)
    s = (u * inv_root) @ dagger(u)
    return 0.5 * (s + dagger(s))


def operator_norm(a) -> float:
    """Largest singular value, computed as ``sqrt(max_eig(A^dagger A))``."""
    arr = as_matrix(a, square=False)
    if arr.size == 0:
        return 0.0
    gram = dagger(arr) @ arr
    top = hermitian_eigen(0.5 * (gram + dagger(gram))).eigenvalues[0]
    return float(np.sqrt(max(top, 0.0)))
