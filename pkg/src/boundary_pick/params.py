"""Schur-class parameters, their boundary data, and node classification."""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from . import tolerances
from .errors import AmbiguousBoundary, NotSchur, PoleAtNode
from .rational import RationalFunction, circle_points, poly_roots

__all__ = [
    "BoundaryData",
    "NodeCondition",
    "SchurParameter",
    "boundary_data_rational",
    "boundary_data_radial",
    "richardson",
    "classify_node",
    "classify_all",
]

INF = math.inf


@dataclass(frozen=True)
class BoundaryData:
    """Boundary value and angular-derivative quantity at a circle point.

    ``value`` is ``None`` when no limit was found. ``d_limit`` is a float,
    ``math.inf``, or ``None`` (unknown). ``source`` is ``"exact"``,
    ``"declared"`` or ``"radial"``; the error fields are zero unless estimated.
    """

    value: complex | None
    d_limit: float | None
    value_err: float = 0.0
    d_err: float = 0.0
    source: str = "exact"
    note: str = ""

    def __post_init__(self):
        if self.value is not None:
            object.__setattr__(self, "value", complex(self.value))
        if self.d_limit is not None:
            object.__setattr__(self, "d_limit", float(self.d_limit))
        object.__setattr__(self, "value_err", float(self.value_err))
        object.__setattr__(self, "d_err", float(self.d_err))
        if self.d_limit is not None and math.isfinite(self.d_limit) and self.value is None:
            raise ValueError("a finite d_limit requires a boundary value")
        if self.source != "radial" and self.d_limit is not None and math.isfinite(self.d_limit):
            if abs(abs(self.value) - 1.0) > 1e3 * tolerances.get().tol_unimod:
                raise ValueError("a finite d_limit requires a unimodular boundary value")

    @property
    def estimated(self) -> bool:
        return self.source == "radial"

    @property
    def d_finite(self) -> bool:
        return self.d_limit is not None and math.isfinite(self.d_limit)


class NodeCondition(enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"

    @property
    def lowers_index(self) -> bool:
        """Conditions C4-C6 each lower the negative-squares count by one."""
        return self in (NodeCondition.C4, NodeCondition.C5, NodeCondition.C6)

    def __str__(self):
        return self.value


def _seeded_disk_points(m: int, seed: int = 20240611) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return 0.999 * np.sqrt(rng.uniform(size=m)) * np.exp(2j * np.pi * rng.uniform(size=m))


class SchurParameter:
    """A function analytic in the disk and bounded by one there.

    Build with ``SchurParameter.constant``, ``.rational`` or ``.opaque``.
    Opaque parameters may carry declared boundary data keyed by circle point;
    these override radial estimation at that point.
    """

    def __init__(self, kind, *, constant=None, rational=None, evaluator=None,
                 declared_boundary=None, name=None):
        self.kind = kind
        self._constant = constant
        self._rational = rational
        self._evaluator = evaluator
        self._declared = dict(declared_boundary or {})
        self.name = name
        self._cache: dict[complex, BoundaryData] = {}
        self._lock = threading.Lock()

    @classmethod
    def constant(cls, c: complex, name: str | None = None) -> "SchurParameter":
        c = complex(c)
        if abs(c) > 1.0 + tolerances.get().tol_unimod:
            raise NotSchur(f"constant {c} has modulus above one")
        return cls("constant", constant=c, name=name)

    @classmethod
    def rational(cls, r: RationalFunction, name: str | None = None) -> "SchurParameter":
        tol = tolerances.get()
        if r.den.degree > 0:
            for p in poly_roots(r.den):
                if abs(p) <= 1.0 + tol.disk_boundary_tol:
                    raise NotSchur(f"pole {p:.6g} lies in the closed unit disk")
        sup = float(np.max(np.abs(r(circle_points(256)))))
        if sup > 1.0 + tol.tol_unimod:
            raise NotSchur(f"sup over the circle is {sup:.12g} > 1")
        if r.is_constant:
            return cls.constant(complex(r.num.coef[0]), name=name)
        return cls("rational", rational=r, name=name)

    @classmethod
    def opaque(
        cls,
        evaluator: Callable[[complex], complex],
        declared_boundary: Mapping[complex, BoundaryData] | None = None,
        name: str | None = None,
    ) -> "SchurParameter":
        tol = tolerances.get()
        vals = np.array([evaluator(z) for z in _seeded_disk_points(64)])
        if not np.all(np.isfinite(vals)) or np.max(np.abs(vals)) > 1.0 + tol.tol_unimod:
            raise NotSchur("evaluator leaves the closed unit disk on sample points")
        declared = {complex(k): v for k, v in (declared_boundary or {}).items()}
        return cls("opaque", evaluator=evaluator, declared_boundary=declared, name=name)

    def as_rational(self) -> RationalFunction | None:
        if self.kind == "constant":
            return RationalFunction.constant(self._constant)
        if self.kind == "rational":
            return self._rational
        return None

    @property
    def is_exact(self) -> bool:
        return self.kind != "opaque"

    def __call__(self, z):
        if self.kind == "constant":
            return self._constant + 0 * np.asarray(z, dtype=complex)
        if self.kind == "rational":
            return self._rational(z)
        z_arr = np.asarray(z, dtype=complex)
        if z_arr.ndim == 0:
            return complex(self._evaluator(complex(z_arr)))
        return np.array([self._evaluator(complex(x)) for x in z_arr.ravel()]).reshape(z_arr.shape)

    def declared_at(self, t0: complex) -> BoundaryData | None:
        sep = tolerances.get().node_sep_tol
        for key, bd in self._declared.items():
            if abs(key - t0) <= sep:
                return bd
        return None

    def boundary(self, t0: complex) -> BoundaryData:
        """Boundary data at ``t0``: exact, declared, or radially estimated."""
        t0 = complex(t0)
        hit = self._cache.get(t0)
        if hit is not None:
            return hit
        if self.kind == "opaque":
            bd = self.declared_at(t0) or boundary_data_radial(self._evaluator, t0)
        else:
            bd = boundary_data_rational(self.as_rational(), t0)
        with self._lock:
            return self._cache.setdefault(t0, bd)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<SchurParameter {self.kind}{label}>"


def boundary_data_rational(r, t0: complex) -> BoundaryData:
    """Exact boundary data of a rational function at a circle point.

    For a unimodular boundary value the quantity ``t0 r'(t0) conj(r(t0))`` is
    real and equals the limit of ``(1 - |r|^2) / (1 - |z|^2)``; a boundary
    value of modulus below one gives an infinite limit.
    """
    if isinstance(r, SchurParameter):
        r = r.as_rational()
    tol = tolerances.get()
    t0 = complex(t0)
    den = r.den(t0)
    if abs(den) <= tol.pole_tol * max(1.0, float(np.max(np.abs(r.den.coef)))):
        raise PoleAtNode(f"function has a pole at {t0}")
    value = complex(r.num(t0) / den)
    mod = abs(value)
    if mod < 1.0 - tol.tol_unimod:
        return BoundaryData(value, INF)
    if mod > 1.0 + tol.tol_unimod:
        raise NotSchur(f"|f({t0})| = {mod:.12g} exceeds one")
    dnum = r.num.deriv()(t0)
    dden = r.den.deriv()(t0)
    deriv = (dnum * den - r.num(t0) * dden) / den**2
    q = t0 * deriv * np.conj(value)
    if abs(q.imag) > 1e-9 * max(1.0, abs(q)):
        raise NotSchur(f"angular derivative {q} is not real at {t0}")
    return BoundaryData(value, float(q.real))


def richardson(seq, ratio: float = 2.0):
    """Richardson extrapolation for ``s(h) = s0 + a1 h + a2 h^2 + ...``.

    ``seq`` holds samples at ``h, h/ratio, h/ratio^2, ...``. Returns the top
    diagonal entry, a truncation error estimate, and the noise amplification
    factor (sum of absolute weights).
    """
    seq = np.asarray(seq)
    m = len(seq)
    table = [list(seq)]
    weights = [np.eye(m)]
    for j in range(1, m):
        f = ratio**j - 1.0
        prev, pw = table[-1], weights[-1]
        table.append([prev[i + 1] + (prev[i + 1] - prev[i]) / f for i in range(len(prev) - 1)])
        weights.append(np.array([pw[i + 1] + (pw[i + 1] - pw[i]) / f for i in range(len(pw) - 1)]))
    best = table[-1][-1]
    err = max(abs(best - table[-2][-1]), abs(best - table[-2][0]))
    amp = float(np.sum(np.abs(weights[-1][-1])))
    return best, float(err), amp


def windowed_richardson(seq, m: int, ratio: float = 2.0):
    """Richardson over every window of ``m`` consecutive samples.

    Deep samples carry rounding noise amplified by ``1/h``, shallow ones carry
    truncation error. The window whose extrapolant agrees best with its
    neighbours is returned, with an error bar covering that spread as well
    as the window's own truncation estimate.
    """
    seq = np.asarray(seq)
    if len(seq) <= m:
        return richardson(seq, ratio)
    fits = [richardson(seq[j:j + m], ratio) for j in range(len(seq) - m + 1)]
    bests = np.array([f[0] for f in fits])
    spread = np.abs(np.diff(bests))
    local = np.maximum(np.r_[spread[0], spread], np.r_[spread, spread[-1]])
    j = int(np.argmin(local))
    best, err, amp = fits[j]
    return best, float(max(err, 2.0 * local[j])), amp


def boundary_data_radial(evaluator, t0: complex, k_min: int | None = None,
                         k_max: int | None = None, terms: int | None = None) -> BoundaryData:
    """Estimate boundary data along the radius ``r_k t0``, ``r_k = 1 - 2^-k``.

    The ratio ``q_k = (1 - |f|^2) / (1 - r_k^2)`` is extrapolated to ``r = 1``.
    An infinite limit is reported when ``q`` passes ``divergence_threshold``
    or keeps growing geometrically; ``d_limit = None`` (unknown) when the
    sequence neither converges nor diverges. The extrapolated value is
    reported whenever the value sequence itself converges.
    """
    tol = tolerances.get()
    k_min = tol.radial_k_min if k_min is None else k_min
    k_max = tol.radial_k_max if k_max is None else k_max
    m = tol.richardson_terms if terms is None else terms
    t0 = complex(t0)
    ks = np.arange(k_min, k_max + 1)
    h = 2.0 ** (-ks.astype(float))
    vals = np.array([complex(evaluator((1.0 - hk) * t0)) for hk in h])
    if not np.all(np.isfinite(vals)):
        return BoundaryData(None, None, source="radial", note="non-finite samples")
    q = (1.0 - np.abs(vals) ** 2) / (h * (2.0 - h))
    eps = np.finfo(float).eps

    v_best, v_err, v_amp = windowed_richardson(vals, m)
    v_err = max(v_err, v_amp * 4 * eps * max(1.0, float(np.max(np.abs(vals)))))
    converged_v = v_err <= 1e-6 * (1.0 + abs(v_best))
    value = complex(v_best) if converged_v else None

    last = q[-m:]
    ratios = last[1:] / np.where(last[:-1] == 0, np.nan, last[:-1])
    if q[-1] > tol.divergence_threshold or (
        np.all(last > 0) and np.all(np.nan_to_num(ratios) > 1.5)
    ):
        return BoundaryData(value, INF, v_err if value is not None else 0.0, 0.0, "radial",
                            "q diverges")
    d_best, d_err, d_amp = windowed_richardson(q, m)
    d_err = max(d_err, d_amp * 8 * eps / h[-1])
    if d_err > 1e-3 * (1.0 + abs(d_best)):
        if np.all(np.diff(last) > 0) and np.all(np.nan_to_num(ratios) > 1.2):
            return BoundaryData(value, INF, v_err if value is not None else 0.0, 0.0, "radial",
                                "q grows without bound")
        return BoundaryData(value, None, v_err if value is not None else 0.0, d_err, "radial",
                            "q does not settle along the radius")
    if value is None:
        return BoundaryData(None, None, 0.0, d_err, "radial", "value does not settle")
    return BoundaryData(value, float(np.real(d_best)), v_err, d_err, "radial",
                        "radial limit only; other nontangential paths not sampled")


def classify_node(e: SchurParameter, th, i: int) -> NodeCondition:
    """Classify the parameter's boundary behaviour at node ``i`` into C1-C6.

    With ``tau = -p_tilde_ii / |tilde_e_i|^2``: C1 value absent or not
    ``eta_i``; otherwise C2 for ``d = inf``, C3 for ``tau < d < inf``, C4 for
    ``0 <= d < tau``, C5 for ``d = tau > 0`` and C6 for ``d = p_tilde_ii = 0``.
    """
    tol = tolerances.get()
    t0 = complex(th.nodes[i])
    bd = e.boundary(t0)
    eta = complex(th.eta[i])
    tau = th.threshold(i)
    p_ii = float(th.sys.p_tilde_diag[i])

    if bd.value is None:
        if bd.estimated and bd.d_limit is None:
            raise AmbiguousBoundary(f"no boundary information at node {i}: {bd.note}")
        return NodeCondition.C1
    v_tol = max(tol.value_tol, 4.0 * bd.value_err)
    if abs(bd.value - eta) > v_tol:
        return NodeCondition.C1
    if bd.d_limit is None:
        raise AmbiguousBoundary(f"boundary value matches eta at node {i} but d is unknown")
    d = bd.d_limit
    if math.isinf(d):
        return NodeCondition.C2
    c_tol = max(tol.class_tol * max(1.0, abs(tau)), 4.0 * bd.d_err)
    if d < -c_tol:
        raise NotSchur(f"negative angular derivative {d} at node {i}")
    p_zero = abs(p_ii) <= tol.class_tol * max(1.0, float(np.max(np.abs(th.sys.P_inv))))
    near_zero = abs(d) <= c_tol
    near_tau = abs(d - tau) <= c_tol
    if bd.estimated and ((p_zero and near_zero) or near_tau):
        raise AmbiguousBoundary(
            f"estimated d = {d:.6g} +- {bd.d_err:.2g} cannot be separated from {tau:.6g}"
        )
    if p_zero and near_zero:
        return NodeCondition.C6
    if near_tau and tau > c_tol:
        return NodeCondition.C5
    if d > tau:
        return NodeCondition.C3
    return NodeCondition.C4


def classify_all(e: SchurParameter, th) -> list[NodeCondition]:
    return [classify_node(e, th, i) for i in range(th.n)]
