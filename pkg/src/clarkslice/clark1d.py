"""Classical Clark measures on the circle for rational self-maps of the disc.

For a rational self-map p and a unimodular alpha, the measure mu_alpha is
the unique positive measure on the circle whose Poisson integral equals
Re((alpha + p)/(alpha - p)).  For rational symbols it splits into

* atoms at the boundary solutions of p(tau) = alpha, each carrying mass
  1/|p'(tau)| (the reciprocal angular derivative), and
* an absolutely continuous part with density
  (1 - |p|^2) / |alpha - p|^2 against normalized arc length.

Atoms are extracted as companion-matrix eigenvalues of N - alpha*D followed
by one Newton polish; only roots that land on the circle after polishing are
kept.  For inner maps the density vanishes identically and is stored as
exact zeros.  At a boundary contact point the closed-form density is a 0/0
limit; grid nodes that collide with an atom angle therefore receive the
symmetric average of the density half a step to either side, which keeps
the trapezoid sum unbiased (a one-sided node shift would cost O(1/grid^2)
accuracy, visibly above the module's 1e-8 contracts).

All integrals against the density use the trapezoid rule on the periodic
grid, which is spectrally accurate for the real-analytic densities produced
by rational symbols.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    AtomDerivativeVanishes,
    EvaluationTooCloseToBoundary,
    NoBoundaryContact,
    NotASelfMap,
    NotSingular,
    RootFindingFailed,
    UnsupportedResolution,
    ZeroMeasure,
)
from .holomaps import RationalSelfMap1D, _unit_grid

#: Pre-polish window for classifying companion roots as on-circle.
TAU_ROOT = 1e-6

#: Post-polish requirement on | |z| - 1 | for an accepted atom.
ATOM_ONCIRCLE_TOL = 1e-8

#: Minimum |p'| at an atom; smaller values signal inputs outside the
#: rational-symbol guarantees (a multiple root of N - alpha*D).
ATOM_DERIV_MIN = 1e-10

#: Interior margin for transform evaluation.
BOUNDARY_MARGIN = 1e-9

_TWO_PI = 2.0 * np.pi


from functools import lru_cache


@lru_cache(maxsize=32)
def _theta_grid(grid: int) -> np.ndarray:
    th = _TWO_PI * np.arange(grid) / grid
    th.setflags(write=False)
    return th


def _wrap_angle(theta):
    return np.mod(theta, _TWO_PI)


def _angle_dist(a, b):
    d = np.abs(_wrap_angle(a) - _wrap_angle(b))
    return np.minimum(d, _TWO_PI - d)


@dataclass(frozen=True, eq=False)
class BoundaryMeasure1D:
    """Positive measure on the circle: atoms plus a sampled density.

    ``thetas`` holds the sample angles (equispaced up to atom-collision
    nudges) and ``density_values`` the nonnegative density samples against
    normalized arc length.  ``density_fn`` is the closed-form evaluator
    when one exists.  Total mass is the atom mass plus the periodic
    trapezoid value of the density, i.e. the mean of the samples.
    """

    atom_positions: tuple
    atom_masses: tuple
    thetas: np.ndarray  # equispaced sample angles 2 pi k / grid
    density_values: np.ndarray
    grid: int
    density_fn: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        pos = tuple(complex(t) for t in self.atom_positions)
        masses = tuple(float(m) for m in self.atom_masses)
        if any(abs(abs(t) - 1.0) > 1e-9 for t in pos):
            raise ValueError("atom positions must be unimodular")
        if any(m <= 0 for m in masses):
            raise ValueError("atom masses must be positive")
        th = np.asarray(self.thetas, dtype=float)
        dv = np.asarray(self.density_values, dtype=float)
        if th.shape != dv.shape or th.shape != (self.grid,):
            raise ValueError("theta and density arrays must have the grid size")
        dv = np.where(dv < 0, 0.0, dv)
        th.setflags(write=False)
        dv.setflags(write=False)
        object.__setattr__(self, "atom_positions", pos)
        object.__setattr__(self, "atom_masses", masses)
        object.__setattr__(self, "thetas", th)
        object.__setattr__(self, "density_values", dv)

    @property
    def atoms(self):
        return tuple(zip(self.atom_positions, self.atom_masses))

    @property
    def atomic_mass(self) -> float:
        return float(sum(self.atom_masses))

    @property
    def density_mass(self) -> float:
        return float(self.density_values.mean()) if self.grid else 0.0

    @property
    def total_mass(self) -> float:
        return self.atomic_mass + self.density_mass

    @property
    def is_purely_atomic(self) -> bool:
        return self.density_mass <= 1e-12

    def moment(self, k: int) -> complex:
        """Trigonometric moment: integral of tau^k against the measure."""
        pos = np.asarray(self.atom_positions, dtype=complex)
        masses = np.asarray(self.atom_masses, dtype=float)
        m = complex(np.sum(masses * pos**k)) if pos.size else 0j
        if self.grid:
            m += complex(np.mean(self.density_values * np.exp(1j * k * self.thetas)))
        return m

    def atom_mass_at(self, tau: complex, tol: float = 1e-6) -> float:
        """Mass of the atom at tau (0.0 when no atom lives there)."""
        for t, m in self.atoms:
            if abs(t - tau) <= tol:
                return m
        return 0.0


def haar_measure(grid: int = 256) -> BoundaryMeasure1D:
    """Normalized arc length on the circle."""
    th = _TWO_PI * np.arange(grid) / grid
    return BoundaryMeasure1D(
        (), (), th, np.ones(grid), grid, density_fn=lambda t: np.ones_like(t)
    )


def atomic_measure(atoms, grid: int = 256) -> BoundaryMeasure1D:
    """Purely atomic measure from (position, mass) pairs."""
    pos, masses = [], []
    for t, m in atoms:
        t = complex(t)
        pos.append(t / abs(t))
        masses.append(float(m))
    return BoundaryMeasure1D(
        tuple(pos), tuple(masses), _theta_grid(grid), np.zeros(grid), grid
    )


def point_mass(tau: complex, mass: float = 1.0, grid: int = 256) -> BoundaryMeasure1D:
    return atomic_measure([(tau, mass)], grid)


def _repair_collisions(dv, density_fn, grid: int, atom_angles) -> np.ndarray:
    """Replace samples at nodes colliding with an atom angle (where the
    closed form is a 0/0 limit) by the symmetric average of the values half
    a grid step to either side.  Second-order accurate and keeps the node
    set equispaced; a one-sided node shift would bias the trapezoid sum."""
    th = _theta_grid(grid)
    angles = np.asarray(atom_angles, dtype=float)
    hit = ~np.isfinite(dv)
    if angles.size:
        d = _angle_dist(th[:, None], angles[None, :]).min(axis=1)
        hit |= d < 1e-8
    idx = np.nonzero(hit)[0]
    if idx.size:
        half = np.pi / grid
        dv = dv.copy()
        dv[idx] = 0.5 * (density_fn(th[idx] + half) + density_fn(th[idx] - half))
    if not np.all(np.isfinite(dv)):
        raise RootFindingFailed(
            "density is singular off the detected atom set; the symbol is "
            "outside the rational guarantees"
        )
    return dv


def _is_power_of_two(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


def _measure_trusted(pos, masses, th, dv, grid, density_fn) -> BoundaryMeasure1D:
    """Construct a measure from already-validated parts, skipping the
    constructor checks; used on the per-slice hot path."""
    mu = object.__new__(BoundaryMeasure1D)
    object.__setattr__(mu, "atom_positions", tuple(pos))
    object.__setattr__(mu, "atom_masses", tuple(masses))
    object.__setattr__(mu, "thetas", th)
    object.__setattr__(mu, "density_values", dv)
    object.__setattr__(mu, "grid", grid)
    object.__setattr__(mu, "density_fn", density_fn)
    return mu


def circle_points(mu: BoundaryMeasure1D) -> np.ndarray:
    """e^{i theta} over the measure's sample angles, sharing the cached
    array when the angles are the standard equispaced grid."""
    th = mu.thetas
    if mu.grid and th[0] == 0.0 and (mu.grid < 2 or th[1] == _TWO_PI / mu.grid):
        return _unit_grid(mu.grid)
    return np.exp(1j * th)


def clark_measure_1d(
    p: RationalSelfMap1D, alpha: complex, grid: int = 4096
) -> BoundaryMeasure1D:
    """Clark measure of a rational self-map at unimodular alpha.

    Atoms come from the on-circle roots of N - alpha*D with masses
    1/|p'(tau)|; the density is the closed form sampled on the (nudged)
    grid, stored as exact zeros for inner maps.
    """
    if not _is_power_of_two(grid) or grid < 64:
        raise UnsupportedResolution(f"grid must be a power of two >= 64, got {grid}")
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-9:
        raise ValueError(f"alpha must be unimodular, got |alpha| = {abs(alpha)!r}")
    alpha /= abs(alpha)

    if p.boundary_sup < 1.0 - 1e-8:
        taus, masses = (), ()  # strictly contractive: no boundary contact
    else:
        taus, masses = _boundary_atoms(p, alpha)

    th = _theta_grid(grid)
    if p.is_inner:
        density_fn = None
        dv = np.zeros(grid)
    else:
        def density_fn(theta, _p=p, _a=alpha):
            w = np.exp(1j * np.asarray(theta, dtype=float))
            v = _p(w)
            num = 1.0 - np.abs(v) ** 2
            den = np.abs(_a - v) ** 2
            with np.errstate(invalid="ignore", divide="ignore"):
                return np.where(num < 0, 0.0, num) / den

        # boundary values of p do not depend on alpha and are memoized
        v = p.unit_samples(grid)
        num = 1.0 - np.abs(v) ** 2
        den = np.abs(alpha - v) ** 2
        with np.errstate(invalid="ignore", divide="ignore"):
            dv = np.where(num < 0, 0.0, num) / den
        if taus or not np.all(np.isfinite(dv)):
            dv = _repair_collisions(
                dv, density_fn, grid, np.angle(np.asarray(taus, dtype=complex))
            )

    return _measure_trusted(taus, masses, th, dv, grid, density_fn)


def _boundary_atoms(p: RationalSelfMap1D, alpha: complex):
    """On-circle solutions of p(tau) = alpha and their Clark masses."""
    num = np.asarray(p.num, dtype=complex)
    den = np.asarray(p.den, dtype=complex)
    c = npoly.polysub(num, alpha * den)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        raise NotASelfMap("symbol is the unimodular constant alpha")
    c_trim = np.trim_zeros(c, "b")
    if len(c_trim) <= 1:
        return (), ()
    try:
        roots = npoly.polyroots(c_trim)
    except np.linalg.LinAlgError as exc:
        raise RootFindingFailed(f"companion eigensolve failed: {exc}") from exc
    cp = npoly.polyder(c_trim)

    taus, masses = [], []
    for z in roots:
        if abs(abs(z) - 1.0) > TAU_ROOT:
            continue
        fp = npoly.polyval(z, cp)
        if fp != 0:
            z = z - npoly.polyval(z, c_trim) / fp
        if abs(abs(z) - 1.0) > ATOM_ONCIRCLE_TOL:
            continue  # genuine off-circle root that strayed into the window
        tau = z / abs(z)
        if any(_angle_dist(np.angle(tau), np.angle(t)) < 1e-9 for t in taus):
            continue
        dp = abs(complex(p.derivative(tau)))
        if dp < ATOM_DERIV_MIN:
            raise AtomDerivativeVanishes(
                f"|p'| = {dp:.3e} at detected atom {tau}; symbol outside the "
                "rational guarantees"
            )
        taus.append(tau)
        masses.append(1.0 / dp)
    order = np.argsort(_wrap_angle(np.angle(np.asarray(taus, dtype=complex)))) if taus else []
    taus = [taus[i] for i in order]
    masses = [masses[i] for i in order]
    return tuple(taus), tuple(masses)


def _kernel(mode: str, w: complex, tau):
    if mode == "poisson":
        return (1.0 - abs(w) ** 2) / np.abs(tau - w) ** 2
    if mode == "cauchy":
        return 1.0 / (1.0 - w * np.conj(tau))
    if mode == "herglotz":
        return (tau + w) / (tau - w)
    raise ValueError(f"unknown transform mode {mode!r}")


def transform_1d(mu: BoundaryMeasure1D, w: complex, mode: str) -> complex:
    """Poisson, Cauchy, or Herglotz transform of the measure at an interior
    point.  Atoms enter through exact kernel sums, the density through the
    periodic trapezoid rule; Re(herglotz) = poisson holds node by node."""
    w = complex(w)
    if abs(w) > 1.0 - BOUNDARY_MARGIN:
        raise EvaluationTooCloseToBoundary(
            f"|w| = {abs(w):.12f} exceeds the interior margin"
        )
    total = 0j
    if mu.atom_positions:
        pos = np.asarray(mu.atom_positions, dtype=complex)
        masses = np.asarray(mu.atom_masses, dtype=float)
        total += complex(np.sum(masses * _kernel(mode, w, pos)))
    if mu.grid:
        tau = circle_points(mu)
        total += complex(np.mean(mu.density_values * _kernel(mode, w, tau)))
    if mode == "poisson":
        return complex(total.real)
    return total


def reconstruct_symbol_1d(mu: BoundaryMeasure1D, alpha: complex) -> Callable:
    """The unique holomorphic self-map psi with psi(0) in R*alpha whose Clark
    measure at alpha is mu: psi = h^{-1}(H mu) with h(w) = (alpha+w)/(alpha-w)."""
    alpha = complex(alpha)
    alpha /= abs(alpha)
    if mu.total_mass <= 0:
        raise ZeroMeasure("reconstruction needs a measure of positive mass")

    def psi(w):
        u = transform_1d(mu, w, "herglotz")
        return alpha * (u - 1.0) / (u + 1.0)

    return psi


def singular_inner_from_measure(mu: BoundaryMeasure1D) -> Callable:
    """exp(-H mu) for a purely atomic measure: a nowhere-vanishing inner
    function, positive at 0 with value exp(-total mass)."""
    if mu.total_mass <= 0:
        raise ZeroMeasure("measure has no mass")
    if not mu.is_purely_atomic:
        raise NotSingular(
            f"density carries mass {mu.density_mass:.3e}; expected purely atomic"
        )

    def inner(w):
        return np.exp(-transform_1d(mu, w, "herglotz"))

    return inner


def _richardson_limit(values, hs):
    """Neville extrapolation of values(h) to h = 0."""
    v = [complex(x) for x in values]
    h = [float(x) for x in hs]
    k = len(v)
    for level in range(1, k):
        nxt = []
        for i in range(k - level):
            nxt.append(
                (h[i] * v[i + 1] - h[i + level] * v[i]) / (h[i] - h[i + level])
            )
        v = nxt
    return v[0]


@dataclass(frozen=True)
class AngularDerivativeResult:
    tau: complex
    alpha: complex
    mass: float
    derivative_limit: complex

    @property
    def modulus_product(self) -> float:
        """|p'(tau)| * mass, which equals 1 for a genuine boundary atom."""
        return abs(self.derivative_limit) * self.mass

    @property
    def phase_residual(self) -> float:
        """|limit * mass * tau - alpha| in the disc gauge."""
        return abs(self.derivative_limit * self.mass * self.tau - self.alpha)


def angular_derivative_check(
    p: RationalSelfMap1D,
    tau: complex,
    alpha: Optional[complex] = None,
    grid: int = 4096,
) -> AngularDerivativeResult:
    """Atom mass at a boundary contact point against the radial derivative
    limit.

    The mass is read off the Clark measure; the limit of p'(r tau) as
    r -> 1- is computed by Richardson extrapolation at r = 1 - 1e-3, 1e-4,
    1e-5.  For a boundary atom, |limit| * mass = 1 and
    limit * mass * tau = alpha.
    """
    tau = complex(tau)
    tau /= abs(tau)
    value = complex(p(tau))
    if abs(abs(value) - 1.0) > 1e-8:
        raise NoBoundaryContact(
            f"|p(tau)| = {abs(value):.8f}; tau is not a boundary contact point"
        )
    if alpha is None:
        alpha = value / abs(value)
    alpha = complex(alpha)
    alpha /= abs(alpha)

    mu = clark_measure_1d(p, alpha, grid)
    mass = mu.atom_mass_at(tau)
    if mass == 0.0:
        raise NoBoundaryContact(f"no atom of the Clark measure found at {tau}")

    hs = [1e-3, 1e-4, 1e-5]
    vals = [p.derivative((1.0 - h) * tau) for h in hs]
    limit = _richardson_limit(vals, hs)
    return AngularDerivativeResult(tau, alpha, mass, limit)
