"""Domains, Shilov boundaries, torus-quotient gauge, and quadrature grids.

Three domains are supported: the unit disc in C, the unit polydisc D^n, and
the Euclidean unit ball of C^n.  Their Shilov boundaries are the circle, the
torus T^n, and the unit sphere.  The circle group acts on each boundary by
zeta -> alpha*zeta; the quotient of the boundary by this action is
parametrized here by a canonical gauge: the first coordinate of largest
modulus is rotated to be real and positive.

Quadrature grids come in three flavours:

* ``quotient_grid`` approximates the pushforward of the invariant boundary
  probability measure to the quotient (deterministic on the polydisc, Gauss
  x uniform product or seeded Monte Carlo on the ball),
* ``boundary_grid`` composes a quotient grid with equally spaced circle
  nodes on every fiber, realizing the boundary measure as an average of
  fiber measures,
* ``slice_circle_grid`` is a single fiber's circle rule.

Every grid carries an ``error_model`` in its metadata so that downstream
checks can derive tolerances mechanically.  All objects are immutable after
construction and all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainMismatch, GaugeUndefined, MissingSeed, UnsupportedResolution

#: Slack for membership tests on the Shilov boundary.
TAU_UNIT = 1e-9

_KINDS = ("disc", "polydisc", "ball")


@dataclass(frozen=True)
class DomainDescriptor:
    """One of the three supported domains, with its complex dimension.

    Dimension 1 collapses all three kinds to the disc, which is how the
    constructor normalizes it.
    """

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("dimension must be a positive integer")
        if self.n == 1 and self.kind != "disc":
            object.__setattr__(self, "kind", "disc")
        if self.kind == "disc" and self.n != 1:
            raise ValueError("disc has dimension 1")

    # The gauge norm whose unit ball is the domain: max-modulus for the
    # polydisc, Euclidean for the ball and the disc.
    def interior_norm(self, z) -> float:
        z = np.asarray(z, dtype=complex)
        if z.shape != (self.n,):
            raise DomainMismatch(
                f"point of shape {z.shape} does not match {self.kind}({self.n})"
            )
        if self.kind == "polydisc":
            return float(np.max(np.abs(z)))
        return float(np.linalg.norm(z))

    def is_interior(self, z, margin: float = 0.0) -> bool:
        return self.interior_norm(z) <= 1.0 - margin

    def boundary_defect(self, zeta) -> float:
        """Distance-like defect from the Shilov boundary (0 on the boundary)."""
        zeta = np.asarray(zeta, dtype=complex)
        if zeta.shape != (self.n,):
            raise DomainMismatch(
                f"point of shape {zeta.shape} does not match {self.kind}({self.n})"
            )
        if self.kind == "polydisc":
            return float(np.max(np.abs(np.abs(zeta) - 1.0)))
        return float(abs(np.linalg.norm(zeta) - 1.0))

    def validate_boundary(self, zeta, tol: float = TAU_UNIT) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=complex)
        defect = self.boundary_defect(zeta)
        if defect > tol:
            raise GaugeUndefined(
                f"point is off the Shilov boundary of {self.kind}({self.n}) "
                f"by {defect:.3e}"
            )
        return zeta


def disc() -> DomainDescriptor:
    return DomainDescriptor("disc", 1)


def polydisc(n: int) -> DomainDescriptor:
    return DomainDescriptor("polydisc", n)


def ball(n: int) -> DomainDescriptor:
    return DomainDescriptor("ball", n)


@dataclass(frozen=True)
class QuotientPoint:
    """Circle orbit on the Shilov boundary, held via its gauged representative."""

    representative: tuple


def project(domain: DomainDescriptor, zeta) -> QuotientPoint:
    """Canonical projection of a boundary point onto the torus quotient.

    The gauge rotates the whole vector so that the first coordinate of
    largest modulus becomes real and positive.  Projecting the returned
    representative again is the identity, and two points on the same circle
    orbit project to the same representative.
    """
    zeta = np.asarray(zeta, dtype=complex)
    if not np.all(np.isfinite(zeta.view(float))):
        raise GaugeUndefined("boundary point has non-finite coordinates")
    if np.max(np.abs(zeta), initial=0.0) == 0.0:
        raise GaugeUndefined("cannot gauge the zero vector")
    zeta = domain.validate_boundary(zeta)
    j = int(np.argmax(np.abs(zeta)))
    r = abs(zeta[j])
    rep = zeta * (np.conj(zeta[j]) / r)
    rep[j] = r  # kill the one-ulp imaginary residue, makes projection idempotent
    return QuotientPoint(tuple(rep.tolist()))


def _gauge_rows(points: np.ndarray) -> np.ndarray:
    """Vectorized gauge for an (m, n) array of boundary points."""
    j = np.argmax(np.abs(points), axis=1)
    rows = np.arange(points.shape[0])
    pivot = points[rows, j]
    r = np.abs(pivot)
    out = points * (np.conj(pivot) / r)[:, None]
    out[rows, j] = r
    return out


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes and weights approximating one of the canonical measures.

    ``target`` is one of ``beta`` (boundary measure), ``beta_hat`` (quotient
    measure) or ``slice_circle`` (a single fiber).  ``meta`` records the
    resolution parameters, the seed for stochastic grids, and the error
    model (``deterministic`` with spectral/Gauss exactness, or
    ``monte_carlo`` with 1/sqrt(N) standard errors).
    """

    domain: DomainDescriptor
    points: np.ndarray
    weights: np.ndarray
    target: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=complex))
        w = np.asarray(self.weights, dtype=float)
        if pts.shape[0] != w.shape[0]:
            raise ValueError("points and weights length mismatch")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {w.sum()!r}, expected 1")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def node_count(self) -> int:
        return self.points.shape[0]

    @property
    def is_stochastic(self) -> bool:
        return self.meta.get("error_model") == "monte_carlo"


def quotient_grid(
    domain: DomainDescriptor,
    resolution: int,
    seed: Optional[int] = None,
    method: Optional[str] = None,
) -> QuadratureGrid:
    """Quadrature for the quotient measure (pushforward of the boundary measure).

    Disc: the quotient is a single point.  Polydisc: deterministic product
    grid on the gauged torus (first coordinate fixed to 1), ``resolution``
    nodes per remaining axis.  Ball: seeded Monte Carlo with ``resolution``
    nodes (default), or for n = 2 a deterministic Gauss-Legendre x uniform
    product rule with ``resolution`` nodes per axis (``method='deterministic'``).
    """
    if resolution <= 0:
        raise UnsupportedResolution(f"resolution must be positive, got {resolution}")

    if domain.kind == "disc":
        pts = np.array([[1.0 + 0.0j]])
        return QuadratureGrid(
            domain, pts, np.array([1.0]), "beta_hat",
            meta={"resolution": 1, "error_model": "deterministic"},
        )

    if domain.kind == "polydisc":
        m = resolution
        axes = [np.exp(2j * np.pi * np.arange(m) / m) for _ in range(domain.n - 1)]
        mesh = np.meshgrid(*axes, indexing="ij") if axes else []
        cols = [np.ones(m ** (domain.n - 1), dtype=complex)]
        cols += [g.ravel() for g in mesh]
        pts = np.stack(cols, axis=1)
        w = np.full(pts.shape[0], 1.0 / pts.shape[0])
        return QuadratureGrid(
            domain, pts, w, "beta_hat",
            meta={"resolution": m, "error_model": "deterministic"},
        )

    # ball
    if method is None:
        method = "monte_carlo"
    if method == "deterministic":
        if domain.n != 2:
            raise UnsupportedResolution(
                "deterministic ball quotient grids are only provided for n = 2"
            )
        # Quotient coordinates (t, chi) with representative
        # (sqrt(1 - t), sqrt(t) e^{i chi}); the quotient measure is uniform
        # in (t, chi).  Gauss-Legendre in t, uniform in chi.
        x, gw = np.polynomial.legendre.leggauss(resolution)
        t = 0.5 * (x + 1.0)
        tw = 0.5 * gw
        chi = 2 * np.pi * np.arange(resolution) / resolution
        T, CHI = np.meshgrid(t, chi, indexing="ij")
        pts = np.stack(
            [np.sqrt(1.0 - T.ravel()) + 0j,
             np.sqrt(T.ravel()) * np.exp(1j * CHI.ravel())],
            axis=1,
        )
        w = np.repeat(tw, resolution) / resolution
        return QuadratureGrid(
            domain, pts, w, "beta_hat",
            meta={"resolution": resolution, "error_model": "deterministic"},
        )
    if method != "monte_carlo":
        raise UnsupportedResolution(f"unknown quotient grid method {method!r}")
    if seed is None:
        raise MissingSeed("Monte Carlo ball grids require a seed")
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((resolution, domain.n)) + 1j * rng.standard_normal(
        (resolution, domain.n)
    )
    raw /= np.linalg.norm(raw, axis=1)[:, None]
    pts = _gauge_rows(raw)
    w = np.full(resolution, 1.0 / resolution)
    return QuadratureGrid(
        domain, pts, w, "beta_hat",
        meta={"resolution": resolution, "seed": seed, "error_model": "monte_carlo"},
    )


def slice_circle_grid(
    domain: DomainDescriptor, xi: QuotientPoint, m: int
) -> QuadratureGrid:
    """Uniform circle rule on the fiber through ``xi``: nodes alpha * zeta0."""
    if m < 1:
        raise UnsupportedResolution("slice circle needs at least one node")
    zeta0 = np.asarray(xi.representative, dtype=complex)
    alphas = np.exp(2j * np.pi * np.arange(m) / m)
    pts = alphas[:, None] * zeta0[None, :]
    w = np.full(m, 1.0 / m)
    return QuadratureGrid(
        domain, pts, w, "slice_circle",
        meta={"slice_count": m, "error_model": "deterministic"},
    )


def boundary_from_quotient(qgrid: QuadratureGrid, m: int) -> QuadratureGrid:
    """Composite boundary grid reusing the nodes of an existing quotient grid."""
    if m < 1:
        raise UnsupportedResolution("per-slice circle count must be >= 1")
    alphas = np.exp(2j * np.pi * np.arange(m) / m)
    pts = (alphas[None, :, None] * qgrid.points[:, None, :]).reshape(-1, qgrid.domain.n)
    w = np.repeat(qgrid.weights / m, m)
    meta = dict(qgrid.meta)
    meta["slice_count"] = m
    return QuadratureGrid(qgrid.domain, pts, w, "beta", meta=meta)


def boundary_grid(
    domain: DomainDescriptor,
    resolution: int,
    m: int,
    seed: Optional[int] = None,
    method: Optional[str] = None,
) -> QuadratureGrid:
    """Boundary quadrature assembled as quotient nodes x per-fiber circles."""
    return boundary_from_quotient(
        quotient_grid(domain, resolution, seed=seed, method=method), m
    )
