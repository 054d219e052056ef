"""Clark measures on polydisc and ball boundaries as fields of circle
measures over the torus quotient.

A Clark measure in several variables has no density against any
grid-friendly reference measure, but it disintegrates into classical Clark
measures of the one-variable slice restrictions, one per quotient point.
The ``SliceField`` type therefore *is* the measure: a quotient quadrature
grid together with one ``BoundaryMeasure1D`` per node.  Integration,
Poisson/Cauchy evaluation, averaging over the spectral parameter,
composition, singular norms, and the distributional boundary limit are all
computed fiber by fiber and then averaged with the quotient weights.

Slice measures are computed lazily and memoized per node index (a fill-once
cache, safe for concurrent fills since each entry is computed from immutable
inputs and assignment is idempotent).  For very large Monte Carlo grids the
cache is disabled and slices are streamed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .clark1d import BoundaryMeasure1D, circle_points, clark_measure_1d, transform_1d
from .domains import QuadratureGrid, boundary_from_quotient
from .errors import InvalidTestIndex, NotInner, TooCloseToBoundary
from .holomaps import RationalSelfMap1D, SymbolMap, monomial, slice_restrict

#: Interior margin for field transforms, in the domain's gauge norm.
FIELD_MARGIN = 1e-6

#: Above this many density samples (nodes x slice resolution), slice
#: measures are streamed instead of cached.
CACHE_SAMPLE_LIMIT = 1 << 25


def slice_maps(symbol: SymbolMap, qgrid: QuadratureGrid) -> Tuple[RationalSelfMap1D, ...]:
    """One-variable restrictions of the symbol along every quotient node.

    Slicing depends on the symbol and the grid only, not on alpha, so the
    result can be shared by all fields over the same grid.
    """
    return tuple(slice_restrict(symbol, zeta) for zeta in qgrid.points)


@dataclass(eq=False)
class SliceField:
    """The Clark measure of ``symbol`` at ``alpha`` in disintegrated form."""

    symbol: SymbolMap
    alpha: complex
    qgrid: QuadratureGrid
    slice_res: int
    sliced: Tuple[RationalSelfMap1D, ...]
    cache_slices: bool = True
    _measures: dict = field(default_factory=dict, repr=False)

    @property
    def node_count(self) -> int:
        return self.qgrid.node_count

    def node_representative(self, i: int) -> np.ndarray:
        return self.qgrid.points[i]

    def slice_map(self, i: int) -> RationalSelfMap1D:
        return self.sliced[i]

    def slice_measure(self, i: int) -> BoundaryMeasure1D:
        mu = self._measures.get(i)
        if mu is None:
            mu = clark_measure_1d(self.sliced[i], self.alpha, self.slice_res)
            if self.cache_slices:
                self._measures[i] = mu
        return mu

    # -- integration -------------------------------------------------------

    def integrate(self, f: Callable) -> complex:
        """Integral of a boundary function against the field.

        ``f`` receives an (m, n) array of boundary points and must return an
        (m,) array.  Per node, atoms contribute exact point evaluations and
        the density contributes a periodic trapezoid sum; nodes are then
        averaged with the quotient weights.  Linear in f; f = 1 gives the
        total mass.
        """
        total = 0j
        for i in range(self.node_count):
            w = self.qgrid.weights[i]
            if w == 0.0:
                continue
            total += w * self._integrate_slice(i, f)
        return total

    def _integrate_slice(self, i: int, f: Callable) -> complex:
        mu = self.slice_measure(i)
        zeta0 = self.qgrid.points[i]
        val = 0j
        if mu.atom_positions:
            pts = np.asarray(mu.atom_positions, dtype=complex)[:, None] * zeta0[None, :]
            val += complex(
                np.sum(np.asarray(mu.atom_masses) * np.asarray(f(pts), dtype=complex))
            )
        dv = mu.density_values
        if mu.grid and dv.any():
            pts = circle_points(mu)[:, None] * zeta0[None, :]
            val += complex(dv @ np.asarray(f(pts), dtype=complex)) / mu.grid
        return val

    # -- scalar summaries ----------------------------------------------------

    def total_mass(self) -> float:
        return float(
            sum(
                self.qgrid.weights[i] * self.slice_measure(i).total_mass
                for i in range(self.node_count)
            )
        )

    def singular_mass(self) -> float:
        """Quotient-averaged atomic mass: the norm of the singular part."""
        return float(
            sum(
                self.qgrid.weights[i] * self.slice_measure(i).atomic_mass
                for i in range(self.node_count)
            )
        )

    def per_node_masses(self) -> Tuple[np.ndarray, np.ndarray]:
        """(total, atomic) mass per node; useful for stochastic error bars."""
        tot = np.empty(self.node_count)
        atom = np.empty(self.node_count)
        for i in range(self.node_count):
            mu = self.slice_measure(i)
            tot[i] = mu.total_mass
            atom[i] = mu.atomic_mass
        return tot, atom


def clark_field(
    symbol: SymbolMap,
    alpha: complex,
    qgrid: QuadratureGrid,
    slice_res: int = 512,
    sliced: Optional[Tuple[RationalSelfMap1D, ...]] = None,
    cache_slices: Optional[bool] = None,
) -> SliceField:
    """Assemble the slice field of a symbol at unimodular alpha."""
    if qgrid.domain != symbol.domain:
        from .errors import DomainMismatch

        raise DomainMismatch("quotient grid does not target the symbol's domain")
    alpha = complex(alpha)
    alpha /= abs(alpha)
    if sliced is None:
        sliced = slice_maps(symbol, qgrid)
    if cache_slices is None:
        cache_slices = qgrid.node_count * slice_res <= CACHE_SAMPLE_LIMIT
    return SliceField(symbol, alpha, qgrid, slice_res, sliced, cache_slices)


def integrate_field(fld: SliceField, f: Callable) -> complex:
    return fld.integrate(f)


def field_transform(fld: SliceField, z, mode: str) -> complex:
    """Poisson or Cauchy transform of the field at a strictly interior point."""
    z = np.asarray(z, dtype=complex)
    domain = fld.symbol.domain
    if domain.interior_norm(z) > 1.0 - FIELD_MARGIN:
        raise TooCloseToBoundary("field transforms require strictly interior points")
    if mode == "poisson":
        val = fld.integrate(lambda pts: kernels.poisson_kernel(domain, z, pts) + 0j)
        return complex(val.real)
    if mode == "cauchy":
        return fld.integrate(lambda pts: kernels.cauchy_kernel(domain, z, pts))
    raise ValueError(f"unknown field transform mode {mode!r}")


def slice_point_transform(fld: SliceField, node_index: int, w: complex, mode: str) -> complex:
    """Transform of a single node's slice measure at slice coordinate w.

    For z = w * zeta0 with zeta0 the node's representative this is the
    fiber-level route to the same value the full-field transform computes.
    """
    return transform_1d(fld.slice_measure(node_index), w, mode)


def _alpha_grid(count: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(count) / count)


def aleksandrov_average(
    symbol: SymbolMap,
    f: Callable,
    alpha_count: int,
    qgrid: QuadratureGrid,
    slice_res: int = 512,
    return_samples: bool = False,
):
    """Average of the field integrals of f over a uniform alpha grid against
    the plain boundary integral of f.

    Returns (lhs, rhs, residual); with ``return_samples`` also the per-node
    paired contributions, from which stochastic error bars can be formed on
    Monte Carlo grids.
    """
    sliced = slice_maps(symbol, qgrid)
    alphas = _alpha_grid(alpha_count)
    per_node_lhs = np.zeros(qgrid.node_count, dtype=complex)
    for a in alphas:
        fld = clark_field(symbol, a, qgrid, slice_res, sliced=sliced, cache_slices=False)
        for i in range(qgrid.node_count):
            per_node_lhs[i] += fld._integrate_slice(i, f) / alpha_count

    # fiber averages of f against the plain boundary measure, in node blocks
    # to keep the composite grid out of memory on large Monte Carlo grids
    per_node_rhs = np.empty(qgrid.node_count, dtype=complex)
    circle = np.exp(2j * np.pi * np.arange(slice_res) / slice_res)
    block = max(1, (1 << 21) // slice_res)
    for lo in range(0, qgrid.node_count, block):
        hi = min(lo + block, qgrid.node_count)
        pts = (
            circle[None, :, None] * qgrid.points[lo:hi, None, :]
        ).reshape(-1, qgrid.domain.n)
        vals = np.asarray(f(pts), dtype=complex)
        per_node_rhs[lo:hi] = vals.reshape(hi - lo, slice_res).mean(axis=1)

    lhs = complex(np.sum(qgrid.weights * per_node_lhs))
    rhs = complex(np.sum(qgrid.weights * per_node_rhs))
    residual = abs(lhs - rhs)
    if return_samples:
        return lhs, rhs, residual, per_node_lhs, per_node_rhs
    return lhs, rhs, residual


def compose_clark(
    symbol: SymbolMap,
    psi: RationalSelfMap1D,
    alpha: complex,
    f: Callable,
    qgrid: QuadratureGrid,
    slice_res: int = 512,
    alpha_density_grid: int = 512,
):
    """Both sides of the composition law for Clark measures.

    lhs integrates f against the field of psi o symbol at alpha.  rhs mixes
    the fields of the symbol over the spectral parameter with the
    one-variable Clark measure of psi at alpha: atoms exactly, the density
    part by a trapezoid rule on ``alpha_density_grid`` points.  When psi is
    inner (finite Blaschke) its measure is purely atomic and the density
    quadrature is skipped entirely.
    """
    alpha = complex(alpha)
    alpha /= abs(alpha)
    composed = symbol.compose_post(psi)
    lhs = clark_field(composed, alpha, qgrid, slice_res).integrate(f)

    mu_psi = clark_measure_1d(psi, alpha, alpha_density_grid)
    sliced = slice_maps(symbol, qgrid)

    def inner_integral(a_prime: complex) -> complex:
        fld = clark_field(
            symbol, a_prime, qgrid, slice_res, sliced=sliced, cache_slices=False
        )
        return fld.integrate(f)

    rhs = 0j
    for tau, mass in mu_psi.atoms:
        rhs += mass * inner_integral(tau)
    if not mu_psi.is_purely_atomic:
        dens = mu_psi.density_values
        for theta, d in zip(mu_psi.thetas, dens):
            if d:
                rhs += d * inner_integral(np.exp(1j * theta)) / mu_psi.grid
    return lhs, rhs, abs(lhs - rhs)


def singular_norm_profile(
    symbol: SymbolMap,
    alpha_count: int,
    qgrid: QuadratureGrid,
    slice_res: int = 512,
):
    """Norm of the singular part per alpha on a uniform grid, and its sup.

    The singular norm is the quotient average of the per-slice atomic
    masses, by the slice-wise Lebesgue decomposition of the field.
    """
    sliced = slice_maps(symbol, qgrid)
    profile = []
    for a in _alpha_grid(alpha_count):
        fld = clark_field(symbol, a, qgrid, slice_res, sliced=sliced, cache_slices=False)
        profile.append((complex(a), fld.singular_mass()))
    sup = max((v for _, v in profile), default=0.0)
    return profile, sup


def _annihilator_ok(kplus, kminus) -> bool:
    """zeta^kplus conj(zeta)^kminus integrates to zero against every
    holomorphic and antiholomorphic polynomial iff the exponent difference
    has both a positive and a negative component."""
    diff = np.asarray(kplus, dtype=int) - np.asarray(kminus, dtype=int)
    return bool(np.any(diff > 0) and np.any(diff < 0))


def pluriharmonic_moment_check(fld: SliceField, kplus, kminus) -> float:
    """|integral of zeta^kplus conj(zeta)^kminus against the field|.

    The test monomial must annihilate holomorphic and antiholomorphic
    polynomials; a vanishing moment then certifies that the assembled
    measure is pluriharmonic.
    """
    kplus = tuple(int(x) for x in kplus)
    kminus = tuple(int(x) for x in kminus)
    n = fld.symbol.n
    if len(kplus) != n or len(kminus) != n:
        raise InvalidTestIndex(f"multi-indices must have length {n}")
    if not (any(kplus) and any(kminus)):
        raise InvalidTestIndex("both exponent vectors must be nonzero")
    if not _annihilator_ok(kplus, kminus):
        raise InvalidTestIndex(
            f"monomial {kplus}/{kminus} is not orthogonal to the holomorphic "
            "and antiholomorphic polynomials"
        )
    return abs(fld.integrate(monomial(kplus, kminus)))


def _boundary_cauchy_abs(pos: np.ndarray, masses: np.ndarray):
    """|boundary Cauchy transform| of an atomic circle measure."""

    def absC(theta: float) -> float:
        w = np.exp(1j * theta)
        return float(np.abs(np.sum(masses / (1.0 - w * np.conj(pos)))))

    return absC


def _level_set_fraction(mu: BoundaryMeasure1D, y: float) -> float:
    """Normalized arc length of {|C mu| > y} for a purely atomic measure.

    The level set is a union of small arcs around the atoms; each endpoint
    is located by bracketing and bisection between the atom (where |C|
    blows up) and the midpoint towards the nearest neighbouring atom.  Arcs
    that reach the midpoint saturate there (merged arcs).
    """
    if not mu.atom_positions:
        return 0.0
    pos = np.asarray(mu.atom_positions, dtype=complex)
    masses = np.asarray(mu.atom_masses, dtype=float)
    angles = np.angle(pos)
    absC = _boundary_cauchy_abs(pos, masses)
    k = len(pos)
    total = 0.0
    for j in range(k):
        if k == 1:
            t_hi = np.pi
        else:
            gaps = np.abs(np.mod(angles - angles[j] + np.pi, 2 * np.pi) - np.pi)
            t_hi = float(np.min(gaps[np.arange(k) != j]) / 2.0)
        for sign in (1.0, -1.0):
            g = lambda t: absC(angles[j] + sign * t) - y
            t_lo = min(masses[j] / (3.0 * y), 0.5 * t_hi)
            tries = 0
            while g(t_lo) <= 0.0 and tries < 60:
                t_lo *= 0.25
                tries += 1
            if g(t_lo) <= 0.0:
                continue  # atom mass too small to register at this level
            if g(t_hi) >= 0.0:
                total += t_hi
            else:
                total += brentq(g, t_lo, t_hi, xtol=1e-14)
    return total / (2 * np.pi)


def poltoratski_limit(fld: SliceField, y: float) -> Tuple[float, float]:
    """Distributional boundary estimate of the singular mass.

    estimate = pi * y * (boundary measure of {|C_1| > y}), computed slice by
    slice with adaptive refinement near the atoms; target is the singular
    norm of the field.  As y grows the estimate converges to the target.
    """
    if y < 100.0:
        raise ValueError("level y must be at least 100")
    if not fld.symbol.is_inner:
        raise NotInner("the distributional limit check requires an inner symbol")
    est = 0.0
    for i in range(fld.node_count):
        mu = fld.slice_measure(i)
        est += fld.qgrid.weights[i] * _level_set_fraction(mu, y)
    return float(np.pi * y * est), fld.singular_mass()
