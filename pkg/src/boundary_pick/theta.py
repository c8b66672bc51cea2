"""The 2x2 coefficient matrix of the linear fractional parametrization.

For an invertible Pick system and a unimodular ``mu`` away from the nodes,

    Theta(z) = I + (z - mu) [C; E] (zI - T)^-1 P^-1 (I - mu T*)^-1 [C*, -E*].

``Theta`` is J-unitary on the circle with ``J = diag(1, -1)``, has simple
poles at the nodes and equals ``I`` at ``mu``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances
from .errors import (
    AtPole,
    DataInvalid,
    MuCollidesWithNode,
    OnDiagonalSingularity,
    SingularLeadingBlock,
)
from .hermitian import Signature, invert, signature
from .pick import PickSystem, build_pick_system
from .rational import Polynomial, RationalFunction

__all__ = [
    "J",
    "ThetaFunction",
    "TildeFactor",
    "ThetaFactorization",
    "select_mu",
    "build_theta",
    "theta_eval",
    "theta_inverse_eval",
    "residue_at_node",
    "kernel_K_theta",
    "kernel_K_theta_direct",
    "kernel_inverse_side",
    "kernel_inverse_side_direct",
    "kernel_tilde_side",
    "kernel_tilde_side_direct",
    "j_unitarity_residual",
    "inverse_stein_residual",
    "factorize_theta",
    "kernel_negative_squares",
    "default_grid",
]

J = np.diag([1.0, -1.0]).astype(complex)


def default_grid(m: int = 8) -> np.ndarray:
    """Fixed disk sample points: radii {0.3, 0.6} times ``m/2`` phases."""
    k = m // 2
    phases = 0.37 + 2.0 * np.pi * np.arange(k) / k
    pts = [r * np.exp(1j * (ph + 0.11 * j)) for j, r in enumerate((0.3, 0.6)) for ph in phases]
    extra = [0.45 * np.exp(1j * (1.0 + 2.3 * q)) for q in range(m - 2 * k)]
    return np.array(pts + extra, dtype=complex)


def select_mu(nodes) -> complex:
    """First ``exp(i pi (2k+1)/64)`` keeping ``mu_clearance`` from every node."""
    clearance = tolerances.get().mu_clearance
    nodes = np.asarray(nodes, dtype=complex)
    for k in range(64):
        mu = complex(np.exp(1j * np.pi * (2 * k + 1) / 64))
        if np.min(np.abs(nodes - mu)) > clearance:
            return mu
    # only reachable with very many nodes; fall back to the best candidate
    cands = np.exp(1j * np.pi * (2 * np.arange(64) + 1) / 64)
    gaps = [np.min(np.abs(nodes - c)) for c in cands]
    return complex(cands[int(np.argmax(gaps))])


@dataclass(frozen=True, eq=False)
class ThetaFunction:
    """Evaluable coefficient matrix built from a Pick system.

    Attributes
    ----------
    tilde_C, tilde_E : ndarray
        Rows of ``[C; E] (mu I - T)^-1 P^-1 (I - mu T*)``.
    eta : ndarray
        Unimodular ratios ``tilde_C / tilde_E``.
    closed_form : list of list of RationalFunction
        Entries over the common denominator ``prod (z - t_i)``.
    """

    sys: PickSystem
    mu: complex
    tilde_C: np.ndarray
    tilde_E: np.ndarray
    eta: np.ndarray
    closed_form: list
    _left: np.ndarray  # [C; E], 2 x n
    _right: np.ndarray  # P^-1 (I - mu T*)^-1 [C*, -E*], n x 2

    @property
    def nodes(self) -> np.ndarray:
        return self.sys.data.t

    @property
    def n(self) -> int:
        return self.sys.n

    @property
    def kappa(self) -> int:
        return self.sys.kappa

    def threshold(self, i: int) -> float:
        """``-p_tilde_ii / |tilde_e_i|^2``, the critical boundary derivative."""
        return float(-self.sys.p_tilde_diag[i] / abs(self.tilde_E[i]) ** 2)

    def __call__(self, z) -> np.ndarray:
        return theta_eval(self, z)


def _closed_form(left, right, nodes, mu) -> list:
    n = len(nodes)
    den = Polynomial.from_roots(nodes)
    others = [Polynomial.from_roots([t for j, t in enumerate(nodes) if j != i]) for i in range(n)]
    lin = Polynomial([-mu, 1.0])
    out = []
    for a in range(2):
        row = []
        for b in range(2):
            acc = den if a == b else Polynomial([0.0])
            for i in range(n):
                acc = acc + lin * others[i] * (left[a, i] * right[i, b])
            row.append(RationalFunction(acc, den))
        out.append(row)
    return out


def build_theta(sys: PickSystem, mu: complex | None = None) -> ThetaFunction:
    """Build ``Theta`` for an invertible Pick system.

    Parameters
    ----------
    sys : PickSystem
        Must have an invertible Pick matrix.
    mu : complex, optional
        Normalization point on the circle. Chosen by ``select_mu`` when absent.
    """
    tol = tolerances.get()
    P_inv = sys.require_invertible()
    t = sys.data.t
    if mu is None:
        mu = select_mu(t)
    mu = complex(mu)
    if abs(abs(mu) - 1.0) > tol.tol_unimod:
        raise DataInvalid(f"mu = {mu} is not unimodular")
    if np.min(np.abs(t - mu)) <= tol.node_sep_tol:
        raise MuCollidesWithNode(f"mu = {mu} coincides with an interpolation node")

    left = np.vstack([sys.C, sys.E])
    right = P_inv @ np.diag(1.0 / (1.0 - mu * np.conj(t))) @ np.column_stack(
        [np.conj(sys.data.w), -np.ones(sys.n)]
    )
    tilde = left @ np.diag(1.0 / (mu - t)) @ P_inv @ np.diag(1.0 - mu * np.conj(t))
    tilde_C = tilde[0].copy()
    tilde_E = tilde[1].copy()
    eta = tilde_C / tilde_E
    for arr in (left, right, tilde_C, tilde_E, eta):
        arr.setflags(write=False)
    cf = _closed_form(left, right, t, mu)
    return ThetaFunction(sys, mu, tilde_C, tilde_E, eta, cf, left, right)


def _check_pole(th: ThetaFunction, z: complex):
    if np.min(np.abs(th.nodes - z)) < tolerances.get().pole_tol:
        raise AtPole(f"z = {z} is (numerically) a node")


def theta_eval(th: ThetaFunction, z: complex) -> np.ndarray:
    """Evaluate ``Theta(z)`` through its realization."""
    z = complex(z)
    _check_pole(th, z)
    mid = 1.0 / (z - th.nodes)
    return np.eye(2, dtype=complex) + (z - th.mu) * (th._left * mid) @ th._right


def theta_inverse_eval(th: ThetaFunction, z: complex) -> np.ndarray:
    """``Theta(z)^-1 = I - (z - mu) [C; E] (mu I - T)^-1 P^-1 (I - z T*)^-1 [C*, -E*]``."""
    z = complex(z)
    _check_pole(th, z)
    t = th.nodes
    P_inv = th.sys.P_inv
    H = np.column_stack([np.conj(th.sys.data.w), -np.ones(th.n)])
    left = th._left * (1.0 / (th.mu - t))
    right = (P_inv * (1.0 / (1.0 - z * np.conj(t)))) @ H
    return np.eye(2, dtype=complex) - (z - th.mu) * left @ right


def residue_at_node(th: ThetaFunction, i: int) -> np.ndarray:
    """``lim (z - t_i) Theta(z) = -[w_i; 1] [conj(tc_i), -conj(te_i)]``."""
    col = np.array([[th.sys.data.w[i]], [1.0]], dtype=complex)
    row = np.array([[np.conj(th.tilde_C[i]), -np.conj(th.tilde_E[i])]])
    return -col @ row


def _check_diag(z, zeta):
    if abs(1.0 - z * np.conj(zeta)) < 1e-12:
        raise OnDiagonalSingularity("1 - z conj(zeta) vanishes")


def kernel_K_theta(th: ThetaFunction, z: complex, zeta: complex) -> np.ndarray:
    """Realization ``[C; E] (zI - T)^-1 P^-1 (conj(zeta) I - T*)^-1 [C*, E*]``."""
    z, zeta = complex(z), complex(zeta)
    _check_pole(th, z)
    _check_pole(th, zeta)
    _check_diag(z, zeta)
    t = th.nodes
    left = th._left * (1.0 / (z - t))
    right = (th.sys.P_inv * (1.0 / (np.conj(zeta) - np.conj(t)))) @ th._left.conj().T
    return left @ right


def kernel_K_theta_direct(th: ThetaFunction, z: complex, zeta: complex) -> np.ndarray:
    """``(J - Theta(z) J Theta(zeta)*) / (1 - z conj(zeta))``."""
    _check_diag(z, zeta)
    a = theta_eval(th, z)
    b = theta_eval(th, zeta)
    return (J - a @ J @ b.conj().T) / (1.0 - z * np.conj(zeta))


def kernel_inverse_side(th: ThetaFunction, z: complex, zeta: complex) -> np.ndarray:
    """Realization ``[C; -E] (I - conj(zeta) T)^-1 P^-1 (I - z T*)^-1 [C*, -E*]``."""
    z, zeta = complex(z), complex(zeta)
    _check_pole(th, z)
    _check_pole(th, zeta)
    _check_diag(z, zeta)
    t = th.nodes
    left = np.vstack([th.sys.C, -th.sys.E]) * (1.0 / (1.0 - np.conj(zeta) * t))
    right = (th.sys.P_inv * (1.0 / (1.0 - z * np.conj(t)))) @ left_conj(th)
    return left @ right


def left_conj(th: ThetaFunction) -> np.ndarray:
    return np.column_stack([np.conj(th.sys.data.w), -np.ones(th.n)])


def kernel_inverse_side_direct(th: ThetaFunction, z: complex, zeta: complex) -> np.ndarray:
    """``(Theta(zeta)^-* J Theta(z)^-1 - J) / (1 - z conj(zeta))``."""
    _check_diag(z, zeta)
    a = theta_inverse_eval(th, z)
    b = theta_inverse_eval(th, zeta)
    return (b.conj().T @ J @ a - J) / (1.0 - z * np.conj(zeta))


def kernel_tilde_side(th: ThetaFunction, z: complex, zeta: complex) -> np.ndarray:
    """Realization ``[tC; -tE] (conj(zeta) I - T*)^-1 P (zI - T)^-1 [tC*, -tE*]``."""
    z, zeta = complex(z), complex(zeta)
    _check_pole(th, z)
    _check_pole(th, zeta)
    _check_diag(z, zeta)
    t = th.nodes
    rows = np.vstack([th.tilde_C, -th.tilde_E])
    left = rows * (1.0 / (np.conj(zeta) - np.conj(t)))
    right = (th.sys.P * (1.0 / (z - t))) @ rows.conj().T
    return left @ right


def kernel_tilde_side_direct(th: ThetaFunction, z: complex, zeta: complex) -> np.ndarray:
    """``(J - Theta(zeta)* J Theta(z)) / (1 - z conj(zeta))``."""
    _check_diag(z, zeta)
    a = theta_eval(th, z)
    b = theta_eval(th, zeta)
    return (J - b.conj().T @ J @ a) / (1.0 - z * np.conj(zeta))


def j_unitarity_residual(th: ThetaFunction, points, relative: bool = False) -> float:
    """Max-entry deviation of ``Theta(t) J Theta(t)*`` from ``J`` over ``points``.

    With ``relative=True`` each deviation is divided by ``max(1, |Theta(t)|^2)``
    (max-entry norm), the scale at which the product is formed in floating
    point. Near ``mu`` or a node the entries of ``Theta`` reach ``1e3`` and the
    absolute residual is bounded below by rounding.
    """
    worst = 0.0
    for t in np.atleast_1d(points):
        m = theta_eval(th, t)
        r = float(np.max(np.abs(m @ J @ m.conj().T - J)))
        if relative:
            r /= max(1.0, float(np.max(np.abs(m))) ** 2)
        worst = max(worst, r)
    return worst


def inverse_stein_residual(th: ThetaFunction, relative: bool = False) -> float:
    """Residual of ``P^-1 - T P^-1 T* = tE* tE - tC* tC``.

    ``relative=True`` divides by ``max(1, max|P^-1|)``.
    """
    P_inv = th.sys.P_inv
    T = th.sys.T
    tE = th.tilde_E.reshape(1, -1)
    tC = th.tilde_C.reshape(1, -1)
    lhs = P_inv - T @ P_inv @ T.conj().T
    rhs = tE.conj().T @ tE - tC.conj().T @ tC
    r = float(np.max(np.abs(lhs - rhs)))
    if relative:
        r /= max(1.0, float(np.max(np.abs(P_inv))))
    return r


@dataclass(frozen=True, eq=False)
class TildeFactor:
    """Right factor ``I + (z - mu) L (I - mu T2*)^-1 Q^-1 (zI - T2)^-1 R``.

    ``L = [tC2; tE2]``, ``R = [tC2*, -tE2*]`` and ``Q`` is the trailing block
    of ``P^-1``. An empty block gives the identity.
    """

    mu: complex
    nodes: np.ndarray
    left: np.ndarray
    core: np.ndarray
    right: np.ndarray

    def __call__(self, z) -> np.ndarray:
        z = complex(z)
        if len(self.nodes) == 0:
            return np.eye(2, dtype=complex)
        if np.min(np.abs(self.nodes - z)) < tolerances.get().pole_tol:
            raise AtPole(f"z = {z} is (numerically) a node")
        mid = self.core * (1.0 / (z - self.nodes))
        return np.eye(2, dtype=complex) + (z - self.mu) * self.left @ mid @ self.right


@dataclass(frozen=True, eq=False)
class ThetaFactorization:
    """``Theta = theta1 * theta2_tilde`` for a split of the nodes.

    ``theta1`` is ``None`` when ``split == 0`` (identity left factor).
    """

    theta1: ThetaFunction | None
    theta2_tilde: TildeFactor
    split: int
    sig_P11: Signature
    sig_P22_tilde: Signature

    def theta1_eval(self, z) -> np.ndarray:
        if self.theta1 is None:
            return np.eye(2, dtype=complex)
        return theta_eval(self.theta1, z)

    def product(self, z) -> np.ndarray:
        return self.theta1_eval(z) @ self.theta2_tilde(z)


def factorize_theta(th: ThetaFunction, split: int) -> ThetaFactorization:
    """Split ``Theta`` along the first ``split`` nodes.

    The left factor is the coefficient matrix of the sub-problem on those
    nodes (same ``mu``); the right factor uses the tilde rows and trailing
    block of ``P^-1`` for the remaining nodes.
    """
    sys = th.sys
    n = sys.n
    if not 0 <= split <= n:
        raise IndexError(f"split must lie in [0, {n}]")
    if split == 0:
        theta1 = None
        sig11 = Signature(0, 0, 0)
    else:
        sub = build_pick_system(sys.data.subset(range(split)))
        if sub.is_singular:
            raise SingularLeadingBlock(f"leading {split}x{split} block of P is singular")
        theta1 = build_theta(sub, th.mu)
        sig11 = sub.sig
    idx = list(range(split, n))
    t2 = sys.data.t[idx]
    if idx:
        Q = sys.P_inv[np.ix_(idx, idx)]
        scale = float(np.max(np.abs(sys.P_inv)))
        sig22 = signature(Q, scale=scale)
        core = np.diag(1.0 / (1.0 - th.mu * np.conj(t2))) @ invert(Q)
        left = np.vstack([th.tilde_C[idx], th.tilde_E[idx]])
        right = np.column_stack([np.conj(th.tilde_C[idx]), -np.conj(th.tilde_E[idx])])
    else:
        sig22 = Signature(0, 0, 0)
        core = np.zeros((0, 0), dtype=complex)
        left = np.zeros((2, 0), dtype=complex)
        right = np.zeros((0, 2), dtype=complex)
    factor = TildeFactor(th.mu, t2, left, core, right)
    return ThetaFactorization(theta1, factor, split, sig11, sig22)


def kernel_negative_squares(th: ThetaFunction, points=None) -> int:
    """Negative eigenvalue count of the block sample matrix ``[K(z_i, z_j)]``.

    A sample can only exhibit, never exceed, the number of negative squares
    of the kernel, so this is a lower bound that is attained for generic
    grids.
    """
    pts = default_grid() if points is None else np.atleast_1d(points)
    m = len(pts)
    big = np.zeros((2 * m, 2 * m), dtype=complex)
    for i in range(m):
        for j in range(m):
            big[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = kernel_K_theta(th, pts[i], pts[j])
    big = 0.5 * (big + big.conj().T)
    return signature(big, zero_tol=1e-8).n_neg
