"""Small dense Hermitian linear algebra.

Eigenvalues come from cyclic complex Jacobi rotations; at the sizes used here
(n <= ~16) this is accurate to a few ulps relative to the matrix norm and keeps
the signature computations independent of LAPACK.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances
from .errors import NotHermitian, Singular

__all__ = [
    "Signature",
    "as_matrix",
    "check_hermitian",
    "hermitian_eigen",
    "signature",
    "rank",
    "invert",
    "schur_complement",
]


@dataclass(frozen=True)
class Signature:
    n_pos: int
    n_neg: int
    n_zero: int

    @property
    def dim(self) -> int:
        return self.n_pos + self.n_neg + self.n_zero

    @property
    def rank(self) -> int:
        return self.n_pos + self.n_neg


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def check_hermitian(m, tol: float | None = None) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotHermitian(f"matrix is not square: {a.shape}")
    tol = tolerances.get().tol_herm if tol is None else tol
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise NotHermitian(f"max |m - m*| = {dev:.3g} exceeds {tol:.3g}")
    return a


def _off_norm(a: np.ndarray) -> float:
    mask = ~np.eye(a.shape[0], dtype=bool)
    return float(np.sqrt(np.sum(np.abs(a[mask]) ** 2)))


def hermitian_eigen(m, tol: float | None = None, max_sweeps: int = 60):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like
        Hermitian matrix (checked against ``tol_herm``).
    tol : float, optional
        Stop once the off-diagonal Frobenius mass falls below
        ``tol * ||m||_F``. Defaults to ``tol_eig``.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """
    a = check_hermitian(m)
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    if n == 0:
        return np.zeros(0), v
    tol = tolerances.get().tol_eig if tol is None else tol
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), v
    target = tol * scale

    polish = 1  # one more sweep after convergence; Jacobi converges quadratically
    for _ in range(max_sweeps):
        if _off_norm(a) <= target:
            if polish == 0:
                break
            polish -= 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g <= 1e-300:
                    continue
                phase = apq / g
                tau = (a[q, q].real - a[p, p].real) / (2.0 * g)
                if abs(tau) > 1e150:
                    t = 0.5 / abs(tau)
                else:
                    t = 1.0 / (abs(tau) + np.sqrt(1.0 + tau * tau))
                if tau < 0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # rotation = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                rot = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    lam = np.real(np.diag(a)).copy()
    order = np.argsort(lam, kind="stable")
    return lam[order], v[:, order]


def signature(m, zero_tol: float | None = None, scale: float | None = None) -> Signature:
    """Inertia of a Hermitian matrix.

    Eigenvalues with magnitude at most ``zero_tol * scale`` count as zero,
    where ``scale`` defaults to ``max|eigenvalue|``. Pass an explicit scale
    when ``m`` is a block of a larger matrix whose size sets the noise level.
    A zero matrix has signature ``(0, 0, n)``.
    """
    lam, _ = hermitian_eigen(m)
    return _signature_from_eigs(lam, zero_tol, scale)


def _signature_from_eigs(
    lam: np.ndarray, zero_tol: float | None, scale: float | None = None
) -> Signature:
    zero_tol = tolerances.get().zero_tol if zero_tol is None else zero_tol
    if lam.size == 0:
        return Signature(0, 0, 0)
    if scale is None:
        scale = float(np.max(np.abs(lam)))
    cut = zero_tol * scale
    n_neg = int(np.sum(lam < -cut))
    n_pos = int(np.sum(lam > cut))
    return Signature(n_pos, n_neg, lam.size - n_pos - n_neg)


def rank(m, zero_tol: float | None = None) -> int:
    return signature(m, zero_tol).rank


def invert(m, zero_tol: float | None = None) -> np.ndarray:
    """Inverse of a square matrix, refusing numerically singular input.

    Hermitian input is screened through its eigenvalues; anything else through
    its singular values. The threshold is relative, like ``signature``.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise Singular(f"matrix is not square: {a.shape}")
    n = a.shape[0]
    if n == 0:
        return a.copy()
    zero_tol = tolerances.get().zero_tol if zero_tol is None else zero_tol
    if np.max(np.abs(a - a.conj().T)) <= tolerances.get().tol_herm:
        mags = np.abs(hermitian_eigen(a)[0])
    else:
        mags = np.linalg.svd(a, compute_uv=False)
    if mags.max() == 0.0 or mags.min() <= zero_tol * mags.max():
        raise Singular("matrix is singular to working tolerance")
    inv = np.linalg.solve(a, np.eye(n, dtype=complex))
    if np.max(np.abs(a - a.conj().T)) <= tolerances.get().tol_herm:
        inv = 0.5 * (inv + inv.conj().T)
    return inv


def schur_complement(m, split: int) -> np.ndarray:
    """Return ``m22 - m21 m11^{-1} m12`` for the leading ``split`` block."""
    a = as_matrix(m)
    m11 = a[:split, :split]
    m12 = a[:split, split:]
    m21 = a[split:, :split]
    m22 = a[split:, split:]
    if split == 0:
        return m22.copy()
    try:
        inv11 = invert(m11)
    except Singular as exc:
        raise Singular("leading block is singular") from exc
    return m22 - m21 @ inv11 @ m12
