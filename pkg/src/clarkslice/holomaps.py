"""Holomorphic symbols: rational self-maps of the disc, polynomial maps of a
domain into the disc, and post-compositions of the two.

The symbol class is closed under slicing: restricting a polynomial map to a
boundary fiber {w * zeta0 : |w| <= 1} gives a one-variable polynomial, and
post-composition with a rational self-map keeps the slice rational.  This is
what makes exact atom extraction by root finding possible downstream.

The standing hypothesis "the symbol maps the domain into the closed unit
disc" is enforced at construction time by a dense boundary-grid sup check,
with slack ``TAU_SUP`` so that inner maps (boundary modulus exactly 1) are
not rejected for rounding reasons.  Strictly contractive maps are allowed;
their Clark measures are purely absolutely continuous.

All map objects are immutable and evaluation is pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import domains
from .domains import DomainDescriptor, QuadratureGrid
from .errors import (
    DerivativeUnsupported,
    DomainMismatch,
    NotASelfMap,
)

#: Slack on the self-map bound sup |phi| <= 1.
TAU_SUP = 1e-8

#: Boundary modulus threshold below which a map counts as inner.
INNER_TOL = 1e-8

#: Seed for the fixed internal validation grid on the ball (deterministic probes).
_PROBE_SEED = 711


def _trim(coeffs) -> tuple:
    c = list(complex(x) for x in coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    if not c:
        c = [0j]
    return tuple(c)


from functools import lru_cache


@lru_cache(maxsize=32)
def _unit_grid(m: int) -> np.ndarray:
    w = np.exp(2j * np.pi * np.arange(m) / m)
    w.setflags(write=False)
    return w


@dataclass(frozen=True, eq=True)
class RationalSelfMap1D:
    """Rational holomorphic self-map of the unit disc, N(w)/D(w).

    Coefficients are ascending.  Construction checks that the denominator
    has no zeros in the closed unit disc and that the boundary sup does not
    exceed 1 + TAU_SUP; unimodular constants are rejected since they do not
    map the open disc into itself.
    """

    num: tuple
    den: tuple = (1 + 0j,)
    validate: bool = field(default=True, repr=False, compare=False)
    boundary_sup: float = field(default=0.0, compare=False)
    boundary_min: float = field(default=0.0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "num", _trim(self.num))
        object.__setattr__(self, "den", _trim(self.den))
        object.__setattr__(self, "_unit_cache", {})
        if all(c == 0 for c in self.den):
            raise NotASelfMap("denominator is identically zero")
        m = max(256, 32 * (self.degree + 1))
        w = _unit_grid(m)
        vals = np.abs(self._eval(w))
        sup = float(vals.max())
        lo = float(vals.min())
        object.__setattr__(self, "boundary_sup", sup)
        object.__setattr__(self, "boundary_min", lo)
        if not self.validate:
            return
        if len(self.den) > 1:
            roots = npoly.polyroots(np.asarray(self.den))
            if roots.size and np.min(np.abs(roots)) <= 1.0 + 1e-12:
                raise NotASelfMap(
                    "denominator has a zero in the closed unit disc", sup=sup
                )
        if sup > 1.0 + TAU_SUP:
            raise NotASelfMap(
                f"boundary sup {sup:.6g} exceeds 1 + {TAU_SUP:g}", sup=sup
            )
        if len(self.num) == 1 and len(self.den) == 1:
            c = self.num[0] / self.den[0]
            if abs(c) >= 1.0 - 1e-12:
                raise NotASelfMap("unimodular constant is not a self-map of the open disc")

    @property
    def degree(self) -> int:
        return max(len(self.num), len(self.den)) - 1

    @property
    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    @property
    def is_inner(self) -> bool:
        """True when |p| = 1 on the whole circle up to INNER_TOL."""
        return (
            abs(self.boundary_sup - 1.0) <= INNER_TOL
            and abs(self.boundary_min - 1.0) <= INNER_TOL
        )

    def _eval(self, w):
        n = npoly.polyval(w, np.asarray(self.num))
        if self.is_polynomial:
            return n / self.den[0]
        return n / npoly.polyval(w, np.asarray(self.den))

    def __call__(self, w):
        return self._eval(np.asarray(w, dtype=complex))

    def unit_samples(self, grid: int) -> np.ndarray:
        """Values on the equispaced unit-circle grid, memoized per size.

        The Clark machinery samples the same map at many spectral
        parameters; the boundary values do not depend on that parameter, so
        caching them here removes the dominant cost of repeated sampling."""
        vals = self._unit_cache.get(grid)
        if vals is None:
            vals = self._eval(_unit_grid(grid))
            vals.setflags(write=False)
            self._unit_cache[grid] = vals
        return vals

    def derivative(self, w):
        """Exact derivative of N/D, evaluated: (N'D - ND')/D^2."""
        w = np.asarray(w, dtype=complex)
        nc = np.asarray(self.num)
        n = npoly.polyval(w, nc)
        npr = npoly.polyval(w, npoly.polyder(nc))
        if self.is_polynomial:
            return npr / self.den[0]
        dc = np.asarray(self.den)
        d = npoly.polyval(w, dc)
        dpr = npoly.polyval(w, npoly.polyder(dc))
        return (npr * d - n * dpr) / (d * d)

    def at_zero(self) -> complex:
        return complex(self.num[0] / self.den[0])


def compose_rational(outer: RationalSelfMap1D, inner: RationalSelfMap1D) -> RationalSelfMap1D:
    """outer(inner(w)) as a rational map; result is validated."""
    un, ud = np.asarray(outer.num), np.asarray(outer.den)
    n, d = np.asarray(inner.num), np.asarray(inner.den)
    deg = max(len(un), len(ud)) - 1
    un = np.pad(un, (0, deg + 1 - len(un)))
    ud = np.pad(ud, (0, deg + 1 - len(ud)))
    # outer = sum_k u_k x^k / sum_k v_k x^k with x = n/d; clear d^deg.
    num_acc = np.zeros(1, dtype=complex)
    den_acc = np.zeros(1, dtype=complex)
    n_pow = np.ones(1, dtype=complex)
    d_pows = [np.ones(1, dtype=complex)]
    for _ in range(deg):
        d_pows.append(npoly.polymul(d_pows[-1], d))
    for k in range(deg + 1):
        term = npoly.polymul(n_pow, d_pows[deg - k])
        num_acc = npoly.polyadd(num_acc, un[k] * term)
        den_acc = npoly.polyadd(den_acc, ud[k] * term)
        if k < deg:
            n_pow = npoly.polymul(n_pow, n)
    return RationalSelfMap1D(tuple(num_acc), tuple(den_acc))


def mobius(a: complex, rotation: complex = 1.0) -> RationalSelfMap1D:
    """Disc automorphism w -> rotation * (w - a) / (1 - conj(a) w), |a| < 1."""
    a = complex(a)
    if abs(a) >= 1:
        raise NotASelfMap("Mobius parameter must lie in the open disc")
    rot = complex(rotation)
    rot /= abs(rot)
    return RationalSelfMap1D((-rot * a, rot), (1.0, -np.conj(a)))


def blaschke(zeros, rotation: complex = 1.0) -> RationalSelfMap1D:
    """Finite Blaschke product with the given zeros in the open disc."""
    num = np.array([complex(rotation) / abs(complex(rotation))])
    den = np.array([1 + 0j])
    for a in zeros:
        a = complex(a)
        if abs(a) >= 1:
            raise NotASelfMap("Blaschke zeros must lie in the open disc")
        num = npoly.polymul(num, np.array([-a, 1.0]))
        den = npoly.polymul(den, np.array([1.0, -np.conj(a)]))
    return RationalSelfMap1D(tuple(num), tuple(den))


@dataclass(frozen=True)
class PolyMapND:
    """Multivariate polynomial map given by monomial coefficients.

    ``terms`` maps multi-indices (tuples of length n) to complex
    coefficients.  Stored in sorted order so that equal maps compare equal.
    """

    n: int
    terms: tuple

    def __init__(self, n: int, terms):
        object.__setattr__(self, "n", int(n))
        items = []
        for k, c in dict(terms).items():
            k = tuple(int(x) for x in k)
            if len(k) != self.n or any(x < 0 for x in k):
                raise DomainMismatch(f"multi-index {k} invalid for dimension {self.n}")
            c = complex(c)
            if c != 0:
                items.append((k, c))
        object.__setattr__(self, "terms", tuple(sorted(items)))

    @property
    def total_degree(self) -> int:
        return max((sum(k) for k, _ in self.terms), default=0)

    def __call__(self, z):
        """Evaluate at one point (n,) or a batch (m, n)."""
        z = np.asarray(z, dtype=complex)
        single = z.ndim == 1
        pts = z[None, :] if single else z
        if pts.shape[1] != self.n:
            raise DomainMismatch(
                f"points of dimension {pts.shape[1]} passed to a map on C^{self.n}"
            )
        out = np.zeros(pts.shape[0], dtype=complex)
        for k, c in self.terms:
            mono = np.ones(pts.shape[0], dtype=complex)
            for i, e in enumerate(k):
                if e:
                    mono = mono * pts[:, i] ** e
            out += c * mono
        return out[0] if single else out


@dataclass(frozen=True)
class SymbolMap:
    """Symbol of a Clark measure: a polynomial base map of the domain into
    the closed disc, optionally post-composed with a rational self-map.

    Construction validates the composite self-map bound on a dense boundary
    probe grid and records the achieved boundary sup/min, from which
    innerness is decided.
    """

    domain: DomainDescriptor
    base: PolyMapND
    post: Optional[RationalSelfMap1D] = None
    boundary_sup: float = field(default=0.0, compare=False)
    boundary_min: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.base.n != self.domain.n:
            raise DomainMismatch(
                f"base map dimension {self.base.n} vs domain dimension {self.domain.n}"
            )
        grid = _probe_grid(self.domain, self.base.total_degree)
        vals = np.abs(self(grid.points))
        sup = float(vals.max())
        lo = float(vals.min())
        object.__setattr__(self, "boundary_sup", sup)
        object.__setattr__(self, "boundary_min", lo)
        if sup > 1.0 + TAU_SUP:
            worst = grid.points[int(np.argmax(vals))]
            raise NotASelfMap(
                f"boundary sup {sup:.6g} exceeds 1 + {TAU_SUP:g}",
                sup=sup,
                node=tuple(worst.tolist()),
            )

    @property
    def n(self) -> int:
        return self.domain.n

    @property
    def is_inner(self) -> bool:
        return (
            abs(self.boundary_sup - 1.0) <= INNER_TOL
            and abs(self.boundary_min - 1.0) <= INNER_TOL
        )

    def __call__(self, z):
        vals = self.base(z)
        if self.post is not None:
            vals = self.post(vals)
        return vals

    def at_zero(self) -> complex:
        zero = np.zeros(self.n, dtype=complex)
        return complex(self(zero))

    def compose_post(self, psi: RationalSelfMap1D) -> "SymbolMap":
        """psi composed after this symbol, as a new validated symbol."""
        new_post = psi if self.post is None else compose_rational(psi, self.post)
        return SymbolMap(self.domain, self.base, new_post)


def _probe_grid(domain: DomainDescriptor, degree: int) -> QuadratureGrid:
    """Dense boundary grid used for self-map validation, fixed and deterministic."""
    if domain.kind == "disc":
        return domains.boundary_grid(domain, 1, max(512, 32 * (degree + 1)))
    per_axis = max(24, 6 * (degree + 1))
    if domain.kind == "polydisc":
        return domains.boundary_grid(domain, per_axis, per_axis)
    if domain.n == 2:
        return domains.boundary_grid(domain, per_axis, per_axis, method="deterministic")
    return domains.boundary_grid(domain, 4096, 16, seed=_PROBE_SEED)


def evaluate(map_obj, z, derivative_order: int = 0):
    """Evaluate a symbol or a rational self-map, optionally with a derivative.

    Derivatives are supported for one-dimensional maps only (rational maps,
    or symbols on the disc, where the chain rule stays one-variable).
    """
    if derivative_order not in (0, 1):
        raise DerivativeUnsupported("only derivative orders 0 and 1 are supported")
    if isinstance(map_obj, RationalSelfMap1D):
        return map_obj.derivative(z) if derivative_order else map_obj(z)
    if isinstance(map_obj, SymbolMap):
        if derivative_order == 0:
            return map_obj(z)
        if map_obj.n != 1:
            raise DerivativeUnsupported(
                "derivatives of multivariate symbols are not defined slice-free"
            )
        p = slice_restrict(map_obj, np.array([1.0 + 0j]))
        return p.derivative(z)
    raise TypeError(f"cannot evaluate object of type {type(map_obj)!r}")


def slice_restrict(symbol: SymbolMap, zeta) -> RationalSelfMap1D:
    """Restriction of the symbol to the fiber disc through a boundary point.

    Returns p with p(w) = symbol(w * zeta) for |w| <= 1.  The coefficient of
    w^k collects the base terms of total degree k; post-composition is
    applied on top.  Slices of a validated symbol are themselves valid, so
    re-validation is skipped.
    """
    zeta = symbol.domain.validate_boundary(zeta)
    deg = symbol.base.total_degree
    coeffs = np.zeros(deg + 1, dtype=complex)
    for k, c in symbol.base.terms:
        mono = c
        for i, e in enumerate(k):
            if e:
                mono = mono * zeta[i] ** e
        coeffs[sum(k)] += mono
    p = RationalSelfMap1D(tuple(coeffs), validate=False)
    if symbol.post is None:
        return p
    un, ud = np.asarray(symbol.post.num), np.asarray(symbol.post.den)
    num = _poly_compose(un, coeffs)
    den = _poly_compose(ud, coeffs)
    return RationalSelfMap1D(tuple(num), tuple(den), validate=False)


def _poly_compose(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Coefficients of outer(inner(w)), Horner in coefficient space."""
    acc = np.array([outer[-1]], dtype=complex)
    for c in outer[-2::-1]:
        acc = npoly.polymul(acc, inner)
        acc = npoly.polyadd(acc, np.array([c]))
    return acc


def validate_self_map(map_obj, grid: QuadratureGrid) -> float:
    """Max |phi| over the grid nodes; raises when the self-map bound fails.

    The boundary sup controls the interior sup by the maximum principle on
    these circular convex domains, so a dense boundary grid is the right
    probe.
    """
    if isinstance(map_obj, RationalSelfMap1D):
        vals = np.abs(map_obj(grid.points[:, 0]))
    else:
        if grid.domain.n != map_obj.n:
            raise DomainMismatch("grid does not target the map's boundary")
        vals = np.abs(map_obj(grid.points))
    sup = float(vals.max())
    if sup > 1.0 + TAU_SUP:
        worst = grid.points[int(np.argmax(vals))]
        raise NotASelfMap(
            f"boundary sup {sup:.6g} exceeds 1 + {TAU_SUP:g}",
            sup=sup,
            node=tuple(np.atleast_1d(worst).tolist()),
        )
    return sup


def monomial(kplus, kminus):
    """Vectorized boundary test function zeta^kplus * conj(zeta)^kminus."""
    kplus = tuple(int(x) for x in kplus)
    kminus = tuple(int(x) for x in kminus)

    def f(points):
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        out = None
        for i, e in enumerate(kplus):
            if e:
                fac = pts[:, i] if e == 1 else pts[:, i] ** e
                out = fac if out is None else out * fac
        for i, e in enumerate(kminus):
            if e:
                fac = np.conj(pts[:, i])
                if e != 1:
                    fac = fac**e
                out = fac if out is None else out * fac
        if out is None:
            out = np.ones(pts.shape[0], dtype=complex)
        return out

    return f
