"""Boundary interpolation data and the associated Pick system.

The data are triples ``(t_i, w_i, gamma_i)`` with unimodular nodes and values
and real ``gamma_i``. The Pick matrix has ``gamma_i`` on the diagonal and
``(1 - conj(w_i) w_j) / (1 - conj(t_i) t_j)`` off it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from . import tolerances
from .errors import DataInvalid, DataInconsistent, SingularPick
from .hermitian import Signature, _signature_from_eigs, hermitian_eigen, invert, signature

__all__ = [
    "InterpolationData",
    "PickSystem",
    "Feasibility",
    "build_pick_system",
    "pick_matrix",
    "verify_stein",
    "omission_feasibility",
    "problems_equivalent",
]


@dataclass(frozen=True, eq=False)
class InterpolationData:
    """Nodes ``t``, target values ``w`` and derivative bounds ``gamma``.

    Validation happens at construction: nodes and values must be unimodular
    within ``tol_unimod`` and nodes pairwise separated by ``node_sep_tol``.
    """

    t: np.ndarray
    w: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        tol = tolerances.get()
        t = np.atleast_1d(np.asarray(self.t, dtype=complex)).copy()
        w = np.atleast_1d(np.asarray(self.w, dtype=complex)).copy()
        try:
            g = np.atleast_1d(np.asarray(self.gamma, dtype=float)).copy()
        except TypeError as exc:
            raise DataInvalid("gammas must be real") from exc
        if not (t.ndim == w.ndim == g.ndim == 1):
            raise DataInvalid("nodes, values and gammas must be flat lists")
        if not (len(t) == len(w) == len(g)):
            raise DataInvalid(
                f"length mismatch: {len(t)} nodes, {len(w)} values, {len(g)} gammas"
            )
        if len(t) == 0:
            raise DataInvalid("at least one interpolation node is required")
        for name, arr in (("nodes", t), ("values", w), ("gammas", g)):
            if not np.all(np.isfinite(arr)):
                raise DataInvalid(f"{name} contain non-finite entries")
        if np.max(np.abs(np.abs(t) - 1.0)) > tol.tol_unimod:
            raise DataInvalid("every node must lie on the unit circle")
        if np.max(np.abs(np.abs(w) - 1.0)) > tol.tol_unimod:
            raise DataInvalid("every target value must be unimodular")
        if len(t) > 1:
            gaps = np.abs(t[:, None] - t[None, :]) + np.eye(len(t)) * 10.0
            if gaps.min() <= tol.node_sep_tol:
                raise DataInvalid("interpolation nodes must be pairwise distinct")
        for arr in (t, w, g):
            arr.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "gamma", g)

    @property
    def n(self) -> int:
        return len(self.t)

    def subset(self, idx: Sequence[int]) -> "InterpolationData":
        idx = list(idx)
        return InterpolationData(self.t[idx], self.w[idx], self.gamma[idx])

    def permuted(self, perm: Sequence[int]) -> "InterpolationData":
        return self.subset(perm)

    def __eq__(self, other):
        if not isinstance(other, InterpolationData):
            return NotImplemented
        return (
            np.array_equal(self.t, other.t)
            and np.array_equal(self.w, other.w)
            and np.array_equal(self.gamma, other.gamma)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class PickSystem:
    """Pick matrix ``P`` with ``T = diag(t)``, ``E = [1..1]`` and ``C = w``.

    ``P_inv`` and ``p_tilde_diag`` are ``None`` when ``P`` is singular at
    ``zero_tol``.
    """

    data: InterpolationData
    P: np.ndarray
    T: np.ndarray
    E: np.ndarray
    C: np.ndarray
    sig: Signature
    P_inv: np.ndarray | None
    p_tilde_diag: np.ndarray | None

    @property
    def n(self) -> int:
        return self.data.n

    @property
    def kappa(self) -> int:
        return self.sig.n_neg

    @property
    def rank(self) -> int:
        return self.sig.rank

    @property
    def is_singular(self) -> bool:
        return self.P_inv is None

    def require_invertible(self) -> np.ndarray:
        if self.P_inv is None:
            raise SingularPick(
                f"Pick matrix is singular (rank {self.rank} of {self.n}); "
                "use the degenerate solver"
            )
        return self.P_inv


def pick_matrix(t, w, gamma) -> np.ndarray:
    """Hermitian Pick matrix, exact Hermitian symmetry by construction."""
    t = np.asarray(t, dtype=complex)
    w = np.asarray(w, dtype=complex)
    n = len(t)
    P = np.zeros((n, n), dtype=complex)
    for i in range(n):
        P[i, i] = float(gamma[i])
        for j in range(i + 1, n):
            P[i, j] = (1.0 - np.conj(w[i]) * w[j]) / (1.0 - np.conj(t[i]) * t[j])
            P[j, i] = np.conj(P[i, j])
    return P


def _stein_residual(P, t, w) -> float:
    T = np.diag(t)
    E = np.ones((1, len(t)), dtype=complex)
    C = np.asarray(w, dtype=complex).reshape(1, -1)
    lhs = P - T.conj().T @ P @ T
    rhs = E.conj().T @ E - C.conj().T @ C
    return float(np.max(np.abs(lhs - rhs)))


def build_pick_system(data: InterpolationData) -> PickSystem:
    """Assemble ``P``, ``T``, ``E``, ``C``, the signature and (if possible) ``P^-1``."""
    tol = tolerances.get()
    P = pick_matrix(data.t, data.w, data.gamma)
    res = _stein_residual(P, data.t, data.w)
    if res >= tol.tol_stein * max(1.0, float(np.max(np.abs(P)))):
        raise DataInconsistent(f"Stein residual {res:.3g} exceeds tolerance")
    lam, _ = hermitian_eigen(P)
    sig = _signature_from_eigs(lam, tol.zero_tol)
    if sig.n_zero == 0:
        P_inv = invert(P)
        p_tilde = np.real(np.diag(P_inv)).copy()
        for arr in (P_inv, p_tilde):
            arr.setflags(write=False)
    else:
        P_inv = None
        p_tilde = None
    T = np.diag(data.t)
    E = np.ones((1, data.n), dtype=complex)
    C = data.w.reshape(1, -1).copy()
    for arr in (P, T, E, C):
        arr.setflags(write=False)
    return PickSystem(data, P, T, E, C, sig, P_inv, p_tilde)


def verify_stein(sys: PickSystem) -> float:
    """Max-entry residual of ``P - T* P T = E* E - C* C`` for ``sys.P`` as stored."""
    return _stein_residual(sys.P, sys.data.t, sys.data.w)


@dataclass(frozen=True)
class Feasibility:
    """Outcome of the omitted-node test.

    ``kind`` is ``"feasible_many"``, ``"feasible_unique"`` or ``"infeasible"``;
    ``degree`` is the rank of the tested block for the unique case.
    """

    kind: Literal["feasible_many", "feasible_unique", "infeasible"]
    degree: int | None = None
    block_signature: Signature | None = None


def omission_feasibility(sys: PickSystem, node_indices: Iterable[int]) -> Feasibility:
    """Can parameters exist whose interpolant misses exactly these nodes?

    The block of ``P^-1`` on ``node_indices`` (0-based) is tested for negative
    (semi)definiteness. Near-zero eigenvalues are judged against the norm of
    the full inverse, not the block.
    """
    P_inv = sys.require_invertible()
    idx = sorted(set(int(i) for i in node_indices))
    if any(i < 0 or i >= sys.n for i in idx):
        raise IndexError(f"node indices out of range: {idx}")
    if not idx:
        return Feasibility("feasible_many", None, Signature(0, 0, 0))
    block = P_inv[np.ix_(idx, idx)]
    scale = float(np.max(np.abs(hermitian_eigen(P_inv)[0])))
    sig = signature(block, scale=scale)
    if sig.n_pos > 0:
        return Feasibility("infeasible", None, sig)
    if sig.n_zero == 0:
        return Feasibility("feasible_many", None, sig)
    return Feasibility("feasible_unique", sig.rank, sig)


def problems_equivalent(sys: PickSystem) -> bool:
    """True when every diagonal entry of ``P^-1`` is strictly positive."""
    P_inv = sys.require_invertible()
    cut = tolerances.get().zero_tol * float(np.max(np.abs(P_inv)))
    return bool(np.all(sys.p_tilde_diag > cut))
