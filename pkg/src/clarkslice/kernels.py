"""Cauchy-Szego and Poisson-Szego kernels for the three domains, the
de Branges-Rovnyak-type positive kernel attached to a symbol, and the
pointwise kernel identities that tie the measures to the Hardy space.

Closed forms: on the disc C(w, w') = 1/(1 - w conj(w')); on the polydisc
the product of disc kernels (reproducing kernel of the product Hardy
space); on the ball C(z, z') = (1 - <z, z'>)^{-n}.  The Poisson kernel is
always |C(z, zeta)|^2 / C(z, z), which on the ball reproduces
(1 - |z|^2)^n / |1 - <z, zeta>|^{2n}.

All functions are stateless and vectorized over a trailing batch of second
arguments, which is what the slice-field integrator feeds them.
"""

from __future__ import annotations

import warnings
from typing import Sequence

import numpy as np

from .domains import DomainDescriptor
from .errors import DomainMismatch, DuplicatePointsWarning, PoleProximity
from .holomaps import SymbolMap

#: Guard radius around the kernel singularity 1 - <z|w> = 0.
POLE_TOL = 1e-12


def _pairing(domain: DomainDescriptor, z: np.ndarray, w: np.ndarray):
    """Per-coordinate products z_i conj(w_i) for the polydisc, the Hermitian
    inner product for ball and disc.  ``w`` may be (n,) or a batch (m, n)."""
    if domain.kind == "polydisc":
        return z * np.conj(w)
    return np.sum(z * np.conj(w), axis=-1)


def cauchy_kernel(domain: DomainDescriptor, z, w):
    """C(z, w), vectorized over a batch of second arguments."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if z.shape != (domain.n,):
        raise DomainMismatch(f"first argument must be a point of C^{domain.n}")
    single = w.ndim == 1
    wb = w[None, :] if single else w
    if wb.shape[-1] != domain.n:
        raise DomainMismatch(f"second argument must have dimension {domain.n}")
    if domain.kind == "polydisc":
        factors = 1.0 - z[None, :] * np.conj(wb)
        if np.min(np.abs(factors)) < POLE_TOL:
            raise PoleProximity("1 - z_i conj(w_i) vanishes to working precision")
        out = 1.0 / np.prod(factors, axis=-1)
    else:
        g = 1.0 - np.sum(z[None, :] * np.conj(wb), axis=-1)
        if np.min(np.abs(g)) < POLE_TOL:
            raise PoleProximity("1 - <z|w> vanishes to working precision")
        out = g ** (-domain.n)
    return complex(out[0]) if single else out


def poisson_kernel(domain: DomainDescriptor, z, zeta):
    """P(z, zeta) = |C(z, zeta)|^2 / C(z, z) for interior z, boundary zeta."""
    z = np.asarray(z, dtype=complex)
    czz = cauchy_kernel(domain, z, z)
    vals = cauchy_kernel(domain, z, zeta)
    out = np.abs(vals) ** 2 / complex(czz).real
    return float(out) if np.ndim(out) == 0 else out


def szego_kernel(domain: DomainDescriptor, z, w, kind: str):
    """Dispatch: ``cauchy`` for two interior points, ``poisson`` for an
    interior point against a boundary point."""
    if kind == "cauchy":
        return cauchy_kernel(domain, z, w)
    if kind == "poisson":
        return poisson_kernel(domain, z, w)
    raise ValueError(f"unknown kernel kind {kind!r}")


def herglotz_kernel(domain: DomainDescriptor, z, zeta):
    """2 C(z, zeta) - 1, the kernel of the Herglotz transform."""
    return 2.0 * cauchy_kernel(domain, z, zeta) - 1.0


def cphi_kernel(symbol: SymbolMap, z, w):
    """(1 - phi(z) conj(phi(w))) * C(z, w): the positive kernel of the
    sub-Hardy space attached to the symbol."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    pz = complex(symbol(z))
    pw = symbol(w)
    return (1.0 - pz * np.conj(pw)) * cauchy_kernel(symbol.domain, z, w)


def cphi_gram(symbol: SymbolMap, points: Sequence, hermitize: bool = True):
    """Gram matrix of the symbol kernel on a point set, with its smallest
    eigenvalue.  The matrix is conjugate-symmetric by construction; the
    eigensolve runs on the Hermitian part so that rounding asymmetry cannot
    produce spurious complex eigenvalues.  Near-duplicate points are legal
    (the Gram degenerates) but flagged with a warning."""
    pts = [np.asarray(p, dtype=complex) for p in points]
    if len(pts) < 2:
        raise ValueError("need at least two points for a Gram matrix")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if np.max(np.abs(pts[i] - pts[j])) < 1e-12:
                warnings.warn(
                    f"points {i} and {j} coincide; Gram matrix is degenerate",
                    DuplicatePointsWarning,
                    stacklevel=2,
                )
    m = len(pts)
    vals = np.array([complex(symbol(p)) for p in pts])
    gram = np.empty((m, m), dtype=complex)
    for i in range(m):
        ck = cauchy_kernel(symbol.domain, pts[i], np.stack(pts))
        gram[i, :] = (1.0 - vals[i] * np.conj(vals)) * ck
    if hermitize:
        gram = 0.5 * (gram + gram.conj().T)
    eigs = np.linalg.eigvalsh(gram)
    return gram, float(eigs.min())


def pairing_integrand(domain: DomainDescriptor, z, zp):
    """zeta -> C(z, zeta) conj(C(zp, zeta)), vectorized for field integration."""
    z = np.asarray(z, dtype=complex)
    zp = np.asarray(zp, dtype=complex)

    def f(points):
        return cauchy_kernel(domain, z, points) * np.conj(
            cauchy_kernel(domain, zp, points)
        )

    return f


def pairing_closed_form(symbol: SymbolMap, alpha: complex, z, zp) -> complex:
    """Closed form of <C(z,.) | C(zp,.)>_{L^2(mu_alpha)}:

        (1 - phi(z) conj(phi(zp)))
            / ((1 - conj(alpha) phi(z)) (1 - alpha conj(phi(zp)))) * C(z, zp).
    """
    alpha = complex(alpha)
    alpha /= abs(alpha)
    z = np.asarray(z, dtype=complex)
    zp = np.asarray(zp, dtype=complex)
    pz, pzp = complex(symbol(z)), complex(symbol(zp))
    return (
        (1.0 - pz * np.conj(pzp))
        / ((1.0 - np.conj(alpha) * pz) * (1.0 - alpha * np.conj(pzp)))
        * cauchy_kernel(symbol.domain, z, zp)
    )


def kernel_pairing_check(symbol: SymbolMap, alpha: complex, z, zp, field) -> float:
    """Residual of the reproducing-kernel pairing against the Clark measure."""
    lhs = field.integrate(pairing_integrand(symbol.domain, z, zp))
    return abs(lhs - pairing_closed_form(symbol, alpha, z, zp))


def model_image_closed_form(symbol: SymbolMap, alpha: complex, z, w) -> complex:
    """Closed form of the model-operator image:

        C_phi(w, z) / (1 - alpha conj(phi(z))).
    """
    alpha = complex(alpha)
    alpha /= abs(alpha)
    return cphi_kernel(symbol, w, z) / (
        1.0 - alpha * np.conj(complex(symbol(np.asarray(z, dtype=complex))))
    )


def model_kernel_image(symbol: SymbolMap, alpha: complex, z, w, field) -> float:
    """Residual of the model-operator image identity at a point pair:

        (1 - conj(alpha) phi(w)) * <C(w,.) | C(z,.)>_{L^2(mu_alpha)}
            = C_phi(w, z) / (1 - alpha conj(phi(z))).
    """
    alpha = complex(alpha)
    alpha /= abs(alpha)
    w = np.asarray(w, dtype=complex)
    lhs = (1.0 - np.conj(alpha) * complex(symbol(w))) * field.integrate(
        pairing_integrand(symbol.domain, w, z)
    )
    return abs(lhs - model_image_closed_form(symbol, alpha, z, w))
