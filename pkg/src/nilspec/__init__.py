"""Spherical analysis on the free two-step nilpotent group with the
orthogonal group acting: canonical forms, Haar quadrature, the two families
of bounded spherical functions, their transforms, and the experiment suite
built on them."""

from .haar import QuadratureSpec, default_spec, haar_integrate, haar_sample
from .heisenberg import (
    EigRecord,
    HeisenbergPoint,
    HSphericalLabel,
    coeff_bound,
    eig_record,
    h_mul,
    type1_series_value,
    type1_value,
    type2_value,
)
from .nilgroup import (
    GroupElem,
    LambdaParams,
    SkewZ,
    act,
    bracket,
    canonical_form,
    group_mul,
    identity_elem,
    spectral_params,
    z_inner,
)
from .spectrum import (
    CompactGrid,
    QuotientMap,
    SphericalLabel,
    grid_eval,
    make_ball_grid,
    project_to_heisenberg,
    spherical_residual,
    type1_spherical,
    type2_spherical,
)
from .topology import (
    ConvergenceReport,
    LabelSequence,
    completeness_check,
    convergence_experiment,
    density_experiment,
    eig_distance,
    sup_distance,
)
from .transform import (
    PlancherelSpec,
    TestFunction,
    euclid_fourier,
    fourier_property_suite,
    plancherel_density,
    plancherel_verify,
    spherical_transform,
    transform_identities,
)

__version__ = "0.1.0"

__all__ = [
    "QuadratureSpec",
    "default_spec",
    "haar_integrate",
    "haar_sample",
    "EigRecord",
    "HeisenbergPoint",
    "HSphericalLabel",
    "coeff_bound",
    "eig_record",
    "h_mul",
    "type1_series_value",
    "type1_value",
    "type2_value",
    "GroupElem",
    "LambdaParams",
    "SkewZ",
    "act",
    "bracket",
    "canonical_form",
    "group_mul",
    "identity_elem",
    "spectral_params",
    "z_inner",
    "CompactGrid",
    "QuotientMap",
    "SphericalLabel",
    "grid_eval",
    "make_ball_grid",
    "project_to_heisenberg",
    "spherical_residual",
    "type1_spherical",
    "type2_spherical",
    "ConvergenceReport",
    "LabelSequence",
    "completeness_check",
    "convergence_experiment",
    "density_experiment",
    "eig_distance",
    "sup_distance",
    "PlancherelSpec",
    "TestFunction",
    "euclid_fourier",
    "fourier_property_suite",
    "plancherel_density",
    "plancherel_verify",
    "spherical_transform",
    "transform_identities",
]
