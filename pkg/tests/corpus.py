"""Seeded random problems and parameters shared by the test modules."""

from __future__ import annotations

import numpy as np

from boundary_pick import (
    BlaschkeProduct,
    InterpolationData,
    RationalFunction,
    SchurParameter,
    build_pick_system,
    build_theta,
    reduce,
)
from boundary_pick.params import boundary_data_rational
from boundary_pick.rational import circle_points

CORPUS_SEED = 20240611
MIN_GAP = 0.5
MAX_COND = 1e3


def _angles(rng, n, min_gap=MIN_GAP):
    while True:
        a = np.sort(rng.uniform(0, 2 * np.pi, n))
        gaps = np.diff(np.r_[a, a[0] + 2 * np.pi])
        if gaps.min() >= min_gap:
            return a


def well_conditioned(sys) -> bool:
    """Reject problems whose Pick matrix or any leading block is near singular."""
    P = sys.P
    scale = np.max(np.abs(P))
    if np.linalg.cond(P) > MAX_COND:
        return False
    for k in range(1, sys.n):
        s = np.linalg.svd(P[:k, :k], compute_uv=False)
        if s[-1] < 1e-2 * scale:
            return False
    return True


def random_problem(rng, n):
    """A random invertible problem with ``n`` nodes and moderate conditioning."""
    while True:
        t = np.exp(1j * _angles(rng, n))
        w = np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        g = rng.uniform(-2.0, 2.0, n)
        g = np.where(np.abs(g) < 0.1, np.sign(g + 1e-300) * 0.1, g)
        sys = build_pick_system(InterpolationData(t, w, g))
        if well_conditioned(sys):
            return sys


def corpus(count=50, seed=CORPUS_SEED):
    """``count`` problems with ``n`` cycling through 2, 3, 4."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        sys = random_problem(rng, (2, 3, 4)[k % 3])
        out.append((sys, build_theta(sys)))
    return out


def clear_circle_points(nodes, m=64):
    """``m`` equispaced circle points rotated for maximal clearance from ``nodes``."""
    best, best_gap = None, -1.0
    for off in np.linspace(0, 2 * np.pi / m, 17, endpoint=False):
        pts = circle_points(m, off)
        gap = np.min(np.abs(pts[:, None] - np.asarray(nodes)[None, :]))
        if gap > best_gap:
            best, best_gap = pts, gap
    return best


def disk_points(rng, k, rmax=0.9):
    return rmax * np.sqrt(rng.uniform(size=k)) * np.exp(2j * np.pi * rng.uniform(size=k))


def node_parameter(th, i, d, rho=0.5, name=None):
    """Rational Schur parameter with value ``eta_i`` and angular derivative ``d`` at node ``i``.

    Built as ``eta_i (alpha + (1 - alpha) lam b_a)`` with ``a = rho t_i`` and
    ``lam`` rotating ``b_a(t_i)`` to 1, so ``d = (1 - alpha) (1 + rho) / (1 - rho)``.
    """
    t0 = complex(th.nodes[i])
    eta = complex(th.eta[i])
    if d == 0:
        return SchurParameter.constant(eta, name=name)
    dmax = (1 + rho) / (1 - rho)
    while d >= dmax:
        rho = 0.5 * (1 + rho)
        dmax = (1 + rho) / (1 - rho)
    alpha = 1.0 - d / dmax
    a = rho * t0
    lam = 1.0 / ((t0 - a) / (1 - np.conj(a) * t0))
    num = RationalFunction.from_coeffs([-a * lam * (1 - alpha) * eta + alpha * eta,
                                        ((1 - alpha) * lam - alpha * np.conj(a)) * eta],
                                       [1.0, -np.conj(a)])
    return SchurParameter.rational(num, name=name)


def random_rational_parameter(rng, degree, name=None):
    """A strictly contractive rational Schur function ``s B`` with ``|s| < 1``."""
    zeros = 0.8 * np.sqrt(rng.uniform(size=degree)) * np.exp(2j * np.pi * rng.uniform(size=degree))
    s = rng.uniform(0.2, 0.9) * np.exp(2j * np.pi * rng.uniform())
    b = BlaschkeProduct(zeros, s).as_rational()
    return SchurParameter.rational(b, name=name)


def singular_fixture(rng, d1, d2, extra):
    """Equality data read off ``w = B1 / B2`` at ``d1 + d2 + extra`` nodes.

    Returns ``(sys, w)`` with a singular Pick matrix of rank ``d1 + d2``
    whenever the nodes outnumber the degree.
    """
    z1 = 0.6 * np.sqrt(rng.uniform(size=d1)) * np.exp(2j * np.pi * rng.uniform(size=d1))
    z2 = 0.6 * np.sqrt(rng.uniform(size=d2)) * np.exp(2j * np.pi * rng.uniform(size=d2))
    b1 = BlaschkeProduct(z1, np.exp(2j * np.pi * rng.uniform())).as_rational()
    b2 = BlaschkeProduct(z2).as_rational()
    w = reduce(RationalFunction(b1.num * b2.den, b1.den * b2.num))
    n = d1 + d2 + extra
    t = np.exp(1j * _angles(rng, n, min_gap=0.3))
    bds = [boundary_data_rational(w, ti) for ti in t]
    data = InterpolationData(t, [b.value for b in bds], [b.d_limit for b in bds])
    return build_pick_system(data), w


def singular_corpus(count=20, seed=CORPUS_SEED + 7):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        d1, d2 = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        if d1 + d2 == 0:
            d1 = 1
        out.append(singular_fixture(rng, d1, d2, int(rng.integers(1, 3))) + ((d1, d2),))
    return out


def parameter_family(th, rng):
    """Rational parameters covering C1, C3, C4 and C5 at the nodes of ``th``.

    One generic constant, one random degree-2 Blaschke multiple and, per
    node, parameters hitting ``eta_i`` with ``d`` above, below and at the
    threshold (the last two only when the threshold is positive).
    """
    out = [
        SchurParameter.constant(0.6 * np.exp(2j * np.pi * rng.uniform()), name="constant"),
        random_rational_parameter(rng, 2, name="blaschke"),
    ]
    for i in range(th.n):
        tau = th.threshold(i)
        out.append(node_parameter(th, i, max(tau, 0.0) + 0.7, name=f"above threshold at {i}"))
        if tau > 0.05:
            out.append(node_parameter(th, i, 0.5 * tau, name=f"below threshold at {i}"))
            out.append(node_parameter(th, i, tau, name=f"at threshold at {i}"))
    return out
