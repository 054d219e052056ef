"""Clark measures of holomorphic self-maps on the disc, polydisc, and ball,
computed through their slice disintegration, with a residual-reporting
verification suite for the identities they satisfy."""

from . import clark1d, cli, domains, errors, holomaps, kernels, slicefield, verify
from .clark1d import (
    BoundaryMeasure1D,
    angular_derivative_check,
    atomic_measure,
    clark_measure_1d,
    haar_measure,
    point_mass,
    reconstruct_symbol_1d,
    singular_inner_from_measure,
    transform_1d,
)
from .domains import (
    DomainDescriptor,
    QuadratureGrid,
    QuotientPoint,
    ball,
    boundary_grid,
    disc,
    polydisc,
    project,
    quotient_grid,
    slice_circle_grid,
)
from .holomaps import (
    PolyMapND,
    RationalSelfMap1D,
    SymbolMap,
    blaschke,
    evaluate,
    mobius,
    monomial,
    slice_restrict,
    validate_self_map,
)
from .kernels import cphi_gram, kernel_pairing_check, model_kernel_image, szego_kernel
from .slicefield import (
    SliceField,
    aleksandrov_average,
    clark_field,
    compose_clark,
    field_transform,
    integrate_field,
    pluriharmonic_moment_check,
    poltoratski_limit,
    singular_norm_profile,
)
from .verify import CheckReport, SuiteConfig, run_suite

__version__ = "0.1.0"
