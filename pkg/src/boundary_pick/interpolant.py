"""Interpolants ``w = T_Theta[E]``: construction, predictions and verification."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .errors import AmbiguousBoundary, AtPole, NotSchur, PoleAtNode
from .hermitian import Signature, signature
from .params import (
    BoundaryData,
    NodeCondition,
    SchurParameter,
    boundary_data_radial,
    boundary_data_rational,
    classify_node,
)
from .pick import PickSystem
from .rational import RationalFunction, count_poles_in_disk, mobius_apply, mobius_eval, reduce
from .theta import ThetaFunction, default_grid, theta_eval

__all__ = [
    "GeneralizedSchurFunction",
    "Prediction",
    "NodeReport",
    "SolutionMembership",
    "InterpolationReport",
    "NegSquaresResult",
    "apply_parameter",
    "predict_node_behavior",
    "verify_interpolation",
    "negative_squares_count",
    "kernel_lower_bound",
    "fmi_kernel_check",
    "fmi_matrix",
]


def kernel_lower_bound(f, grids=None) -> int:
    """Largest negative eigenvalue count of ``[K_f(z_j, z_i)]`` over the grids.

    ``K_f(z, zeta) = (1 - f(z) conj(f(zeta))) / (1 - z conj(zeta))``. Sample
    points where ``f`` is not finite are skipped.
    """
    if grids is None:
        grids = [default_grid(8), default_grid(12)]
    best = 0
    for grid in grids:
        pts, vals = [], []
        for z in grid:
            try:
                v = complex(f(z))
            except (AtPole, ZeroDivisionError):
                continue
            if np.isfinite(v):
                pts.append(z)
                vals.append(v)
        if not pts:
            continue
        z = np.array(pts)
        v = np.array(vals)
        k = (1.0 - np.outer(np.conj(v), v)) / (1.0 - np.outer(np.conj(z), z))
        k = 0.5 * (k + k.conj().T)
        best = max(best, signature(k, zero_tol=1e-8).n_neg)
    return best


class GeneralizedSchurFunction:
    """An interpolant, either rational (exact) or given by an evaluator.

    Rational functions are stored reduced and their negative-squares index is
    the number of poles in the disk. For evaluator-only functions the index
    is unknown and ``neg_squares_lower`` holds a kernel-sampling lower bound.
    """

    def __init__(self, *, rational: RationalFunction | None = None, evaluator=None,
                 theta: ThetaFunction | None = None, parameter: SchurParameter | None = None):
        if (rational is None) == (evaluator is None):
            raise ValueError("give exactly one of rational or evaluator")
        self.rational = reduce(rational) if rational is not None else None
        self._evaluator = evaluator
        self.theta = theta
        self.parameter = parameter
        if self.rational is not None:
            self.neg_squares: int | None = count_poles_in_disk(self.rational)
            self.neg_squares_lower = self.neg_squares
        else:
            self.neg_squares = None
            self.neg_squares_lower = kernel_lower_bound(self)
        self._cache: dict[complex, BoundaryData] = {}
        self._lock = threading.Lock()

    @property
    def kind(self) -> str:
        return "rational" if self.rational is not None else "opaque"

    def __call__(self, z):
        if self.rational is not None:
            return self.rational(z)
        z_arr = np.asarray(z, dtype=complex)
        if z_arr.ndim == 0:
            return complex(self._evaluator(complex(z_arr)))
        return np.array([self._evaluator(complex(x)) for x in z_arr.ravel()]).reshape(z_arr.shape)

    def boundary(self, t0: complex) -> BoundaryData:
        """Exact data for rational functions, radial estimates otherwise."""
        t0 = complex(t0)
        hit = self._cache.get(t0)
        if hit is not None:
            return hit
        if self.rational is not None:
            try:
                bd = boundary_data_rational(self.rational, t0)
            except PoleAtNode:
                bd = BoundaryData(None, None, note="pole at the node")
            except NotSchur as exc:
                bd = BoundaryData(complex(self.rational(t0)), None, note=str(exc))
        else:
            bd = boundary_data_radial(self._evaluator, t0)
        with self._lock:
            return self._cache.setdefault(t0, bd)

    def __repr__(self):
        if self.rational is not None:
            return f"<GeneralizedSchurFunction {self.rational!r}, poles in disk {self.neg_squares}>"
        return f"<GeneralizedSchurFunction opaque, neg squares >= {self.neg_squares_lower}>"


def apply_parameter(th: ThetaFunction | None, e: SchurParameter) -> GeneralizedSchurFunction:
    """Form ``w = (Theta11 E + Theta12) / (Theta21 E + Theta22)``.

    ``th = None`` stands for the identity coefficient matrix. Exact parameters
    are composed on the closed form; opaque parameters pointwise.
    """
    r = e.as_rational()
    if th is None:
        if r is not None:
            return GeneralizedSchurFunction(rational=r, parameter=e)
        return GeneralizedSchurFunction(evaluator=lambda z: complex(e(z)), parameter=e)
    if r is not None:
        w = mobius_apply(th.closed_form, r)
        return GeneralizedSchurFunction(rational=w, theta=th, parameter=e)

    def evaluate(z):
        return complex(mobius_eval(theta_eval(th, z), complex(e(z))))

    return GeneralizedSchurFunction(evaluator=evaluate, theta=th, parameter=e)


@dataclass(frozen=True)
class Prediction:
    """Boundary behaviour at a node implied by the parameter's condition.

    ``d_relation`` is one of ``"equal"`` (d = gamma), ``"below"`` (d < gamma),
    ``"above"`` (gamma < d < inf), ``"finite"`` or ``"tri_state"``;
    ``value_relation`` is ``"equal"``, ``"differ"`` or ``"tri_state"``.
    """

    condition: NodeCondition
    d_relation: str
    d_value: float | None
    value_relation: str
    target_value: complex
    gamma: float

    def check(self, observed: BoundaryData, v_tol: float, d_tol: float) -> bool:
        """Does the observed boundary data fit this prediction?"""
        val = observed.value
        d = observed.d_limit
        matches = val is not None and abs(val - self.target_value) <= v_tol
        if self.value_relation == "tri_state":
            no_limit = val is None
            return no_limit or not matches or (matches and d is not None and math.isinf(d))
        if self.value_relation == "differ":
            return val is not None and not matches and d is not None and math.isfinite(d)
        if not matches or d is None or not math.isfinite(d):
            return False
        return abs(d - self.d_value) <= d_tol * max(1.0, abs(self.d_value))


def predict_node_behavior(cond: NodeCondition, sys: PickSystem, th: ThetaFunction, i: int,
                          d_e: float | None = None) -> Prediction:
    """Predicted ``(d_w(t_i), w(t_i))`` for a parameter condition at node ``i``.

    C1/C2 keep both interpolation equalities. C3/C4 keep the value and move
    the derivative to ``gamma_i - 1 / (p_ii + |tilde_e_i|^2 d_e)``; below
    ``gamma_i`` for C3 and above for C4. C5 leaves three outcomes open and
    C6 gives a finite derivative with a different value.
    """
    gamma = float(sys.data.gamma[i])
    w_i = complex(sys.data.w[i])
    if cond in (NodeCondition.C1, NodeCondition.C2):
        return Prediction(cond, "equal", gamma, "equal", w_i, gamma)
    if cond in (NodeCondition.C3, NodeCondition.C4):
        if d_e is None or not math.isfinite(d_e):
            raise ValueError("C3/C4 predictions need the parameter's finite d at the node")
        denom = float(sys.p_tilde_diag[i]) + abs(th.tilde_E[i]) ** 2 * d_e
        d_w = gamma - 1.0 / denom
        rel = "below" if cond is NodeCondition.C3 else "above"
        return Prediction(cond, rel, d_w, "equal", w_i, gamma)
    if cond is NodeCondition.C5:
        return Prediction(cond, "tri_state", None, "tri_state", w_i, gamma)
    return Prediction(cond, "finite", None, "differ", w_i, gamma)


@dataclass(frozen=True)
class NodeReport:
    index: int
    node: complex
    target_value: complex
    gamma: float
    observed: BoundaryData
    satisfied_inequality: bool
    satisfied_equality: bool
    condition: NodeCondition | None = None
    predicted: Prediction | None = None
    prediction_ok: bool | None = None

    @property
    def no_limit(self) -> bool:
        return self.observed.value is None


@dataclass(frozen=True)
class SolutionMembership:
    """Membership in the three nested solution sets.

    ``in_equality_set``: ``w(t_i) = w_i`` and ``d_w(t_i) = gamma_i`` at every
    node, with ``kappa`` negative squares. ``in_inequality_set``: the same with
    ``d_w(t_i) <= gamma_i``. ``in_relaxed_set``: ``kappa' <= kappa`` negative
    squares and the inequality conditions fail at no more than
    ``kappa - kappa'`` nodes. Each set contains the previous one.
    """

    in_equality_set: bool
    in_inequality_set: bool
    in_relaxed_set: bool


@dataclass(frozen=True)
class InterpolationReport:
    nodes: list
    membership: SolutionMembership
    kappa: int
    neg_squares: int
    neg_squares_exact: bool
    notes: list = field(default_factory=list)


def _tolerances_for(bd: BoundaryData, scale: float):
    tol = tolerances.get()
    v_tol = tol.value_tol
    d_tol = tol.class_tol * max(1.0, abs(scale))
    if bd.estimated:
        v_tol = max(v_tol, 4.0 * bd.value_err)
        d_tol = max(d_tol, 4.0 * bd.d_err)
    return v_tol, d_tol


def verify_interpolation(w: GeneralizedSchurFunction, sys: PickSystem) -> InterpolationReport:
    """Observe ``w`` at every node and decide solution-set membership.

    When ``w`` came from ``apply_parameter`` the parameter is classified at
    every node and the resulting prediction is compared with the observation.
    """
    tol = tolerances.get()
    reports = []
    notes = []
    th = w.theta
    e = w.parameter
    for i in range(sys.n):
        t_i = complex(sys.data.t[i])
        w_i = complex(sys.data.w[i])
        g_i = float(sys.data.gamma[i])
        bd = w.boundary(t_i)
        v_tol, d_tol = _tolerances_for(bd, g_i)
        val_ok = bd.value is not None and abs(bd.value - w_i) < v_tol
        d = bd.d_limit
        sat_ineq = bool(val_ok and d is not None and d <= g_i + d_tol)
        sat_eq = bool(val_ok and d is not None and math.isfinite(d) and abs(d - g_i) <= d_tol)
        cond = pred = ok = None
        if th is not None and e is not None and th.sys is sys:
            try:
                cond = classify_node(e, th, i)
                d_e = e.boundary(t_i).d_limit
                pred = predict_node_behavior(cond, sys, th, i, d_e)
                pv_tol, pd_tol = _tolerances_for(bd, pred.d_value or 0.0)
                if e.boundary(t_i).estimated:
                    pd_tol = max(pd_tol, 1e-4)
                ok = pred.check(bd, pv_tol, pd_tol)
            except AmbiguousBoundary as exc:
                notes.append(f"node {i}: {exc}")
        if bd.estimated and bd.note:
            notes.append(f"node {i}: {bd.note}")
        reports.append(NodeReport(i, t_i, w_i, g_i, bd, sat_ineq, sat_eq, cond, pred, ok))

    kappa = sys.kappa
    exact = w.neg_squares is not None
    k_w = w.neg_squares if exact else w.neg_squares_lower
    if not exact:
        notes.append("negative squares estimated from kernel samples (lower bound)")
    n_ineq = sum(r.satisfied_inequality for r in reports)
    in_eq = all(r.satisfied_equality for r in reports) and k_w == kappa
    in_ineq = all(r.satisfied_inequality for r in reports) and k_w == kappa
    in_relaxed = k_w <= kappa and n_ineq >= sys.n - (kappa - k_w)
    del tol
    return InterpolationReport(reports, SolutionMembership(in_eq, in_ineq, in_relaxed), kappa, k_w,
                               exact, notes)


@dataclass(frozen=True)
class NegSquaresResult:
    """Negative-squares count of ``w`` against the prediction ``kappa - ell``.

    ``exact`` is False for evaluator-only functions, whose count is a lower
    bound; ``consistent`` then only asks that the bound not exceed the
    prediction.
    """

    count: int
    exact: bool
    predicted: int
    ell: int
    consistent: bool


def negative_squares_count(w: GeneralizedSchurFunction, sys: PickSystem,
                           e_conditions) -> NegSquaresResult:
    ell = sum(1 for c in e_conditions if c.lowers_index)
    predicted = sys.kappa - ell
    if w.rational is not None:
        count = count_poles_in_disk(w.rational)
        return NegSquaresResult(count, True, predicted, ell, count == predicted)
    lower = w.neg_squares_lower
    return NegSquaresResult(lower, False, predicted, ell, lower <= predicted)


def fmi_matrix(w, sys: PickSystem, grid=None) -> np.ndarray:
    """Sample matrix ``[[P, F], [F*, K]]`` of the fundamental matrix inequality.

    Column ``j`` of ``F`` is ``(I - z_j T*)^-1 (E* - C* w(z_j))`` and
    ``K[i, j] = K_w(z_j, z_i)``.
    """
    pts = default_grid() if grid is None else np.atleast_1d(np.asarray(grid, dtype=complex))
    n = sys.n
    m = len(pts)
    t = sys.data.t
    big = np.zeros((n + m, n + m), dtype=complex)
    big[:n, :n] = sys.P
    if m == 0:
        return big
    vals = np.array([complex(w(z)) for z in pts])
    if not np.all(np.isfinite(vals)):
        raise AtPole("grid point hits a pole of w")
    F = (1.0 - np.outer(np.conj(t), pts)) ** -1 * (1.0 - np.outer(np.conj(sys.data.w), vals))
    big[:n, n:] = F
    big[n:, :n] = F.conj().T
    big[n:, n:] = (1.0 - np.outer(np.conj(vals), vals)) / (1.0 - np.outer(np.conj(pts), pts))
    return 0.5 * (big + big.conj().T)


def fmi_kernel_check(w, sys: PickSystem, grid=None) -> Signature:
    """Signature of the FMI sample matrix; solutions have ``n_neg = kappa``."""
    return signature(fmi_matrix(w, sys, grid), zero_tol=1e-8)
