"""Exception and warning types shared across the package."""


class ClarkSliceError(Exception):
    """Base class for all errors raised by this library."""


# -- domains ---------------------------------------------------------------

class GaugeUndefined(ClarkSliceError):
    """Boundary point is zero or off the Shilov boundary; no gauge exists."""


class UnsupportedResolution(ClarkSliceError):
    """Grid resolution is zero, negative, or otherwise out of contract."""


class MissingSeed(ClarkSliceError):
    """A stochastic grid was requested without a seed."""


# -- holomaps --------------------------------------------------------------

class DomainMismatch(ClarkSliceError):
    """Point dimension does not match the map's domain."""


class DerivativeUnsupported(ClarkSliceError):
    """Derivative requested for a map that only supports plain evaluation."""


class NotASelfMap(ClarkSliceError):
    """Boundary sup of the symbol exceeds 1 beyond the allowed slack."""

    def __init__(self, message, sup=None, node=None):
        super().__init__(message)
        self.sup = sup
        self.node = node


# -- clark1d ---------------------------------------------------------------

class RootFindingFailed(ClarkSliceError):
    """Companion-matrix eigensolve did not converge or input degenerate."""


class AtomDerivativeVanishes(ClarkSliceError):
    """|p'| is numerically zero at a detected boundary atom."""


class EvaluationTooCloseToBoundary(ClarkSliceError):
    """Transform evaluation point violates the interior margin."""


#: Alias used by the multi-dimensional transforms.
TooCloseToBoundary = EvaluationTooCloseToBoundary


class ZeroMeasure(ClarkSliceError):
    """Operation requires a measure with strictly positive total mass."""


class NotSingular(ClarkSliceError):
    """Measure has a nonzero absolutely continuous part."""


class NoBoundaryContact(ClarkSliceError):
    """|p(tau)| < 1: tau is not a boundary contact point of the symbol."""


# -- slicefield ------------------------------------------------------------

class InvalidTestIndex(ClarkSliceError):
    """Monomial exponents do not lie in the pluriharmonic annihilator."""


class NotInner(ClarkSliceError):
    """Operation requires an inner symbol."""


# -- kernels ---------------------------------------------------------------

class PoleProximity(ClarkSliceError):
    """Kernel evaluation too close to the singular set 1 - <z|w> = 0."""


class DuplicatePointsWarning(UserWarning):
    """Point set passed to a Gram computation contains near-duplicates."""
