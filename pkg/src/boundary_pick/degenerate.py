"""The singular Pick matrix case.

When ``P`` is singular the problem has exactly one solution, a ratio of two
finite Blaschke products. It is obtained by building the coefficient matrix
on a maximal well-posed subset of nodes and reading off the unique constant
parameter from the remaining nodes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .errors import (
    DataInconsistent,
    NotPositive,
    NotSingular,
    PivotFailure,
    RatioInconsistent,
)
from .hermitian import hermitian_eigen, signature
from .interpolant import GeneralizedSchurFunction, fmi_kernel_check
from .params import NodeCondition  # noqa: F401  (re-exported for reports)
from .pick import PickSystem, build_pick_system
from .rational import (
    BlaschkeProduct,
    Polynomial,
    RationalFunction,
    blaschke_factorize,
    circle_points,
    mobius_apply,
    reduce,
)
from .theta import ThetaFunction, build_theta, select_mu, theta_inverse_eval

__all__ = [
    "DegenerateSolution",
    "DegenerateReport",
    "select_pivot",
    "solve_degenerate",
    "classical_singular_solution",
    "verify_degenerate",
]


@dataclass(frozen=True, eq=False)
class DegenerateSolution:
    """Unique solution ``w = b1 / b2`` of a singular problem.

    ``pivot`` lists the node order used: the first ``rank_P`` entries index
    the invertible block, the rest are the nodes where equality is forced.
    """

    w: GeneralizedSchurFunction
    b1: BlaschkeProduct
    b2: BlaschkeProduct
    rank_P: int
    kappa_prime: int
    satisfied_nodes: tuple
    pivot: tuple
    e0: complex | None = None
    theta1: ThetaFunction | None = None


def _principal(P, idx):
    return P[np.ix_(idx, idx)]


def _admissible(P, idx, kappa, scale) -> bool:
    sig = signature(_principal(P, idx), scale=scale)
    return sig.n_zero == 0 and sig.n_neg == kappa


def select_pivot(sys: PickSystem) -> list[int]:
    """Indices of a ``rank P`` sized invertible block carrying all of ``sq_- P``.

    Greedy growth by largest ``|det|`` first; if that block is not admissible,
    every subset is tried and the best conditioned admissible one wins (ties
    go to the lexicographically smallest).
    """
    P = np.asarray(sys.P)
    r = sys.rank
    kappa = sys.kappa
    scale = float(np.max(np.abs(hermitian_eigen(P)[0])))
    chosen: list[int] = []
    for _ in range(r):
        best, best_det = None, -1.0
        for j in range(sys.n):
            if j in chosen:
                continue
            d = abs(np.linalg.det(_principal(P, sorted(chosen + [j]))))
            if d > best_det * (1.0 + 1e-12):
                best, best_det = j, d
        chosen.append(best)
    chosen.sort()
    if _admissible(P, chosen, kappa, scale):
        return chosen
    best_idx, best_gap = None, -1.0
    for idx in itertools.combinations(range(sys.n), r):
        idx = list(idx)
        if not _admissible(P, idx, kappa, scale):
            continue
        gap = float(np.min(np.abs(hermitian_eigen(_principal(P, idx))[0])))
        if gap > best_gap * (1.0 + 1e-12):
            best_idx, best_gap = idx, gap
    if best_idx is None:
        raise PivotFailure("no principal block of size rank P carries all negative squares")
    return best_idx


def solve_degenerate(sys: PickSystem) -> DegenerateSolution:
    """Unique solution of a problem with singular Pick matrix.

    For every node ``i`` outside the pivot block, ``[a_i; b_i] =
    Theta1(t_i)^-1 [w_i; 1]``. These satisfy ``|a_i| = |b_i|`` and share one
    unimodular ratio ``e0``; the solution is ``T_Theta1[e0]``.
    """
    tol = tolerances.get()
    if not sys.is_singular:
        raise NotSingular("Pick matrix is invertible; use the parametrization instead")
    n = sys.n
    r = sys.rank
    data = sys.data
    if r == 0:
        if np.max(np.abs(data.w - data.w[0])) > tol.tol_deg or np.max(np.abs(data.gamma)) > tol.tol_deg:
            raise DataInconsistent("zero Pick matrix requires equal values and zero gammas")
        w = GeneralizedSchurFunction(rational=RationalFunction.constant(complex(data.w[0])))
        b1 = BlaschkeProduct((), complex(data.w[0]) / abs(data.w[0]))
        return DegenerateSolution(w, b1, BlaschkeProduct(()), 0, 0, tuple(range(n)),
                                  tuple(range(n)), complex(data.w[0]), None)

    piv = select_pivot(sys)
    rest = [i for i in range(n) if i not in piv]
    sub = build_pick_system(data.subset(piv))
    theta1 = build_theta(sub, select_mu(data.t))
    ratios = []
    for i in rest:
        ab = theta_inverse_eval(theta1, data.t[i]) @ np.array([data.w[i], 1.0])
        a, b = complex(ab[0]), complex(ab[1])
        size = max(abs(a), abs(b))
        if size == 0.0 or abs(abs(a) - abs(b)) > tol.tol_deg * size:
            raise RatioInconsistent(f"|a| != |b| at node {i}: {abs(a):.12g} vs {abs(b):.12g}")
        ratios.append(a / b)
    ratios = np.array(ratios)
    if np.max(np.abs(ratios - ratios[0])) > tol.tol_deg:
        raise RatioInconsistent("the ratios a_i / b_i differ between nodes")
    e0 = complex(np.mean(ratios))
    e0 /= abs(e0)
    w_rat = mobius_apply(theta1.closed_form, RationalFunction.constant(e0))
    w = GeneralizedSchurFunction(rational=w_rat)
    b1, b2 = blaschke_factorize(w.rational)
    return DegenerateSolution(w, b1, b2, r, b2.degree, tuple(rest), tuple(piv + rest), e0, theta1)


def classical_singular_solution(sys: PickSystem) -> RationalFunction:
    """``x* (I - zT*)^-1 E* / x* (I - zT*)^-1 C*`` for a kernel vector ``P x = 0``.

    Only for positive semidefinite singular ``P``. The kernel vector is taken
    from a ``(rank P + 1)``-node principal block so that the remaining
    coordinates are zero and the ratio has degree ``rank P``.
    """
    if not sys.is_singular:
        raise NotSingular("Pick matrix is invertible")
    if sys.kappa > 0:
        raise NotPositive("Pick matrix has negative eigenvalues; use solve_degenerate")
    n = sys.n
    r = sys.rank
    P = np.asarray(sys.P)
    if r == 0:
        return RationalFunction.constant(complex(sys.data.w[0]))
    piv = select_pivot(sys)
    extra = next(i for i in range(n) if i not in piv)
    idx = sorted(piv + [extra])
    _, vecs = hermitian_eigen(_principal(P, idx))
    x = vecs[:, 0]
    t = sys.data.t[idx]
    wv = sys.data.w[idx]
    num = Polynomial([0.0])
    den = Polynomial([0.0])
    for k in range(len(idx)):
        others = Polynomial([1.0])
        for j in range(len(idx)):
            if j != k:
                others = others * Polynomial([1.0, -np.conj(t[j])])
        num = num + others * np.conj(x[k])
        den = den + others * (np.conj(x[k]) * np.conj(wv[k]))
    return reduce(RationalFunction(num, den))


@dataclass(frozen=True)
class DegenerateReport:
    """Pass/fail per check; ``passed`` is their conjunction."""

    checks: dict
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def verify_degenerate(sol: DegenerateSolution, sys: PickSystem) -> DegenerateReport:
    """Check unimodularity, the degree identity, equality at forced nodes and the FMI."""
    tol = tolerances.get()
    checks, details = {}, {}
    w = sol.w
    ts = circle_points(64, offset=0.0123)
    dev = float(np.max(np.abs(np.abs(w(ts)) - 1.0)))
    checks["unimodular"] = dev <= tol.tol_unimod
    details["unimodular_deviation"] = dev
    deg = sol.b1.degree + sol.b2.degree
    checks["degree_identity"] = deg == sol.rank_P == sys.rank
    details["degree"] = deg
    checks["kappa_prime"] = sol.kappa_prime == sol.b2.degree and sol.kappa_prime <= sys.kappa
    node_ok = {}
    for i in sol.satisfied_nodes:
        bd = w.boundary(complex(sys.data.t[i]))
        g = float(sys.data.gamma[i])
        node_ok[i] = bool(
            bd.value is not None
            and abs(bd.value - sys.data.w[i]) <= tol.value_tol
            and bd.d_limit is not None
            and abs(bd.d_limit - g) <= tol.class_tol * max(1.0, abs(g))
        )
    checks["equality_at_nodes"] = all(node_ok.values())
    details["nodes"] = node_ok
    sig = fmi_kernel_check(w, sys)
    checks["fmi"] = sig.n_neg == sys.kappa
    details["fmi_signature"] = sig
    return DegenerateReport(checks, details)
