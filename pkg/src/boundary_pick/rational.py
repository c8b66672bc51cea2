"""Polynomials, rational functions and finite Blaschke products over C.

Coefficients are stored in ascending degree order. Rational functions keep a
monic denominator so that coefficient comparisons are meaningful; cancellation
of common factors is explicit (``reduce``) and root based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import tolerances
from .errors import BoundaryPole, DegenerateDenominator, NotInnerRatio, ZeroPolynomial

__all__ = [
    "Polynomial",
    "RationalFunction",
    "BlaschkeProduct",
    "poly_roots",
    "reduce",
    "count_poles_in_disk",
    "mobius_apply",
    "mobius_eval",
    "blaschke_factorize",
    "circle_points",
]


def circle_points(m: int, offset: float = 0.0) -> np.ndarray:
    """``m`` equally spaced points on the unit circle."""
    return np.exp(1j * (2.0 * np.pi * np.arange(m) / m + offset))


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Complex polynomial with ascending coefficients ``coef[k] * z**k``."""

    coef: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coef, dtype=complex)).copy()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        c.setflags(write=False)
        object.__setattr__(self, "coef", c)

    @classmethod
    def constant(cls, c: complex) -> "Polynomial":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "Polynomial":
        c = np.array([lead], dtype=complex)
        for r in roots:
            c = npoly.polymul(c, [-r, 1.0])
        return cls(c)

    @property
    def degree(self) -> int:
        return len(self.coef) - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coef)

    @property
    def lead(self) -> complex:
        return complex(self.coef[-1])

    def __call__(self, z):
        return npoly.polyval(z, self.coef)

    def deriv(self, m: int = 1) -> "Polynomial":
        if m > self.degree:
            return Polynomial([0.0])
        return Polynomial(npoly.polyder(self.coef, m))

    def trimmed(self, rel_tol: float | None = None) -> "Polynomial":
        """Drop leading coefficients that are negligible relative to the largest."""
        rel_tol = tolerances.get().coef_trim_tol if rel_tol is None else rel_tol
        c = self.coef
        scale = np.max(np.abs(c))
        if scale == 0:
            return self
        k = len(c)
        while k > 1 and abs(c[k - 1]) <= rel_tol * scale:
            k -= 1
        return Polynomial(c[:k])

    def __add__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polyadd(self.coef, other.coef))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polysub(self.coef, other.coef))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polymul(self.coef, other.coef))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self.coef)

    def __truediv__(self, scalar):
        return Polynomial(self.coef / complex(scalar))

    def __repr__(self):
        return f"Polynomial({np.array2string(self.coef, precision=6)})"


def _as_poly(p) -> Polynomial:
    return p if isinstance(p, Polynomial) else Polynomial([p])


def _newton(p: Polynomial, dp: Polynomial, z: complex, steps: int = 8) -> complex:
    for _ in range(steps):
        d = dp(z)
        if d == 0:
            break
        step = p(z) / d
        if not np.isfinite(step):
            break
        z_new = z - step
        if abs(z_new - z) <= 1e-16 * max(1.0, abs(z)):
            z = z_new
            break
        # accept only if the residual does not grow
        if abs(p(z_new)) > abs(p(z)):
            break
        z = z_new
    return complex(z)


def poly_roots(p: Polynomial) -> list[complex]:
    """All roots of ``p`` with multiplicity.

    Companion-matrix eigenvalues are Newton polished. Eigenvalues within
    ``root_cluster_tol`` (relative) of each other are candidates for one
    multiple root: the cluster mean is refined as a simple root of the
    ``(m-1)``-th derivative, and the merge is kept only if ``(z - c)^m``
    divides the polynomial to rounding. This recovers a root of multiplicity
    ``m`` to full precision instead of ``eps**(1/m)``.
    """
    tol = tolerances.get()
    if p.is_zero:
        raise ZeroPolynomial("cannot find the roots of the zero polynomial")
    c = p.trimmed().coef
    k0 = int(np.argmax(c != 0))
    roots = [0j] * k0
    c = c[k0:]
    deg = len(c) - 1
    if deg == 0:
        return roots
    q = Polynomial(c)
    if deg == 1:
        return roots + [complex(-c[0] / c[1])]
    monic = c / c[-1]
    comp = np.zeros((deg, deg), dtype=complex)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -monic[:-1]
    raw = np.linalg.eigvals(comp)
    dq = q.deriv()
    raw = [_newton(q, dq, z) for z in raw]

    clusters: list[list[complex]] = []
    for z in sorted(raw, key=lambda x: (x.real, x.imag)):
        for cl in clusters:
            centre = np.mean(cl)
            if abs(z - centre) <= tol.root_cluster_tol * max(1.0, abs(centre)):
                cl.append(z)
                break
        else:
            clusters.append([z])
    for cl in clusters:
        m = len(cl)
        if m == 1:
            roots.append(complex(cl[0]))
            continue
        d_lo = q.deriv(m - 1)
        centre = _newton(d_lo, d_lo.deriv(), complex(np.mean(cl)))
        if _is_multiple_root(q, centre, m):
            roots.extend([centre] * m)
        else:
            roots.extend(complex(z) for z in cl)
    return roots


def _is_multiple_root(q: Polynomial, c: complex, m: int, rel: float = 1e-12) -> bool:
    """True when ``(z - c)^m`` divides ``q`` up to relative remainders ``rel``."""
    coef = q.coef.copy()
    scale = float(np.sum(np.abs(coef))) * max(1.0, abs(c)) ** (len(coef) - 1)
    for _ in range(m):
        # synthetic division by (z - c); the remainder is the value at c
        out = np.zeros(len(coef) - 1, dtype=complex)
        acc = 0j
        for k in range(len(coef) - 1, 0, -1):
            acc = acc * c + coef[k]
            out[k - 1] = acc
        if abs(acc * c + coef[0]) > rel * scale:
            return False
        coef = out
    return True


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """Quotient ``num / den`` with the denominator normalized to be monic."""

    num: Polynomial
    den: Polynomial = field(default_factory=lambda: Polynomial([1.0]))

    def __post_init__(self):
        num = _as_poly(self.num)
        den = _as_poly(self.den)
        if den.is_zero:
            raise DegenerateDenominator("denominator is identically zero")
        den = den.trimmed()
        num = num.trimmed() if not num.is_zero else Polynomial([0.0])
        lead = den.lead
        object.__setattr__(self, "num", num / lead)
        object.__setattr__(self, "den", den / lead)

    @classmethod
    def constant(cls, c: complex) -> "RationalFunction":
        return cls(Polynomial([c]), Polynomial([1.0]))

    @classmethod
    def from_coeffs(cls, num, den=(1.0,)) -> "RationalFunction":
        return cls(Polynomial(num), Polynomial(den))

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def deriv(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.deriv() * d - n * d.deriv(), d * d)

    @property
    def is_constant(self) -> bool:
        return self.num.degree == 0 and self.den.degree == 0

    @property
    def degree(self) -> int:
        """McMillan degree, meaningful for reduced functions."""
        return max(self.num.degree if not self.num.is_zero else 0, self.den.degree)

    @cached_property
    def poles_in_disk(self) -> int:
        return count_poles_in_disk(self)

    def __repr__(self):
        return f"RationalFunction(num={self.num.coef!r}, den={self.den.coef!r})"


def reduce(r: RationalFunction) -> RationalFunction:
    """Cancel numerator/denominator roots that agree within ``root_match_tol``.

    Pairs are matched greedily by smallest distance. Input without a common
    root is returned unchanged.
    """
    tol = tolerances.get()
    if r.num.is_zero:
        return RationalFunction.constant(0.0)
    if r.den.degree == 0 or r.num.degree == 0:
        return r
    zs = poly_roots(r.num)
    ps = poly_roots(r.den)
    pairs = sorted(
        (abs(a - b), i, j) for i, a in enumerate(zs) for j, b in enumerate(ps)
    )
    used_z: set[int] = set()
    used_p: set[int] = set()
    for dist, i, j in pairs:
        if i in used_z or j in used_p:
            continue
        scale = max(1.0, abs(zs[i]), abs(ps[j]))
        if dist > tol.root_match_tol * scale:
            break
        used_z.add(i)
        used_p.add(j)
    if not used_z:
        return r
    keep_z = [z for i, z in enumerate(zs) if i not in used_z]
    keep_p = [p for j, p in enumerate(ps) if j not in used_p]
    num = Polynomial.from_roots(keep_z, lead=r.num.trimmed().lead)
    den = Polynomial.from_roots(keep_p, lead=r.den.lead)
    return RationalFunction(num, den)


def count_poles_in_disk(r: RationalFunction) -> int:
    """Number of denominator roots with modulus below one (with multiplicity)."""
    tol = tolerances.get()
    if r.den.degree == 0:
        return 0
    count = 0
    for p in poly_roots(r.den):
        if abs(abs(p) - 1.0) < tol.disk_boundary_tol:
            raise BoundaryPole(f"pole at {p:.6g} is within the boundary band")
        if abs(p) < 1.0:
            count += 1
    return count


def _entry(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x)
    return RationalFunction.constant(complex(x))


def _same(p: Polynomial, q: Polynomial) -> bool:
    return p.coef.shape == q.coef.shape and np.array_equal(p.coef, q.coef)


def mobius_apply(theta, e) -> RationalFunction:
    """Linear fractional transform ``(t11 e + t12) / (t21 e + t22)``.

    ``theta`` is a 2x2 nested sequence of rational functions (or polynomials or
    scalars). Entries sharing a denominator are combined without squaring it,
    so the common pole factor of a coefficient matrix cancels exactly.
    """
    e = _entry(e)
    ents = [[_entry(theta[i][j]) for j in range(2)] for i in range(2)]
    dens: list[Polynomial] = []
    for row in ents:
        for x in row:
            if not any(_same(x.den, d) for d in dens):
                dens.append(x.den)

    def lifted(x: RationalFunction) -> Polynomial:
        out = x.num
        skipped = False
        for d in dens:
            if not skipped and _same(d, x.den):
                skipped = True
                continue
            out = out * d
        return out

    n = [[lifted(x) for x in row] for row in ents]
    a, b = e.num, e.den
    top = n[0][0] * a + n[0][1] * b
    t1, t2 = n[1][0] * a, n[1][1] * b
    bottom = t1 + t2
    scale = max(np.max(np.abs(t1.coef)), np.max(np.abs(t2.coef)))
    if bottom.is_zero or np.max(np.abs(bottom.coef)) <= 1e-13 * scale:
        raise DegenerateDenominator("t21 e + t22 vanishes identically")
    return reduce(RationalFunction(top, bottom))


def mobius_eval(m: np.ndarray, e):
    """Pointwise linear fractional transform for a numeric 2x2 matrix."""
    return (m[0, 0] * e + m[0, 1]) / (m[1, 0] * e + m[1, 1])


@dataclass(frozen=True)
class BlaschkeProduct:
    """``factor * prod (z - a) / (1 - conj(a) z)`` over zeros ``a`` in the disk."""

    zeros: tuple = ()
    unimodular_factor: complex = 1.0 + 0j

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zeros)
        if any(abs(a) >= 1.0 for a in zs):
            raise ValueError("Blaschke zeros must lie in the open unit disk")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "unimodular_factor", complex(self.unimodular_factor))

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.unimodular_factor, dtype=complex)
        for a in self.zeros:
            out = out * (z - a) / (1.0 - np.conj(a) * z)
        return out if out.shape else complex(out)

    def as_rational(self) -> RationalFunction:
        num = Polynomial.from_roots(self.zeros, lead=self.unimodular_factor)
        den = Polynomial([1.0])
        for a in self.zeros:
            den = den * Polynomial([1.0, -np.conj(a)])
        return RationalFunction(num, den)


def blaschke_factorize(r: RationalFunction) -> tuple[BlaschkeProduct, BlaschkeProduct]:
    """Write a reduced, circle-unimodular ``r`` as ``B1 / B2``.

    ``B1`` carries the unimodular constant; ``B2`` is normalized with factor 1.
    Raises ``NotInnerRatio`` when ``|r| != 1`` somewhere on 64 circle samples.
    """
    tol = tolerances.get()
    ts = circle_points(64, offset=0.0123)
    vals = r(ts)
    if np.max(np.abs(np.abs(vals) - 1.0)) > tol.tol_unimod:
        raise NotInnerRatio("function is not unimodular on the unit circle")
    zeros = [] if r.num.degree == 0 else poly_roots(r.num)
    poles = [] if r.den.degree == 0 else poly_roots(r.den)
    for x in zeros + poles:
        if abs(abs(x) - 1.0) < tol.disk_boundary_tol:
            raise NotInnerRatio(f"zero or pole {x:.6g} lies on the unit circle")
    b1 = BlaschkeProduct([a for a in zeros if abs(a) < 1.0])
    b2 = BlaschkeProduct([a for a in poles if abs(a) < 1.0])
    ratio = vals * b2(ts) / b1(ts)
    lam = np.mean(ratio)
    lam = lam / abs(lam)
    if np.max(np.abs(ratio - lam)) > 1e3 * tol.tol_unimod:
        raise NotInnerRatio("zero/pole reflection pairing failed")
    return BlaschkeProduct(b1.zeros, lam), b2
