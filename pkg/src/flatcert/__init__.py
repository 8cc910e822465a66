"""flatcert: numerical certification toolkit for flat functions on pathological zero sets.

Core pipelines:
  - flatness certification from secant directions of a zero-set family
    (Hawaiian earring, small-sphere families, generic point clouds),
  - Lojasiewicz exponent estimation on dyadic annuli against analytic controls,
  - jet-nondegeneracy reports for families of smooth arcs.
"""

__version__ = "0.1.0"

SCHEMA = "flatcert/1"

from .geometry import (
    CircleSpec,
    DirectionSet,
    EarringFamily,
    EmptySampleError,
    SphereFamilySpec,
    XAxisFamily,
    circle_point,
    covering_radius,
    dist_to_earring,
    earring_distances,
    ray_intersections,
    secant_directions,
    sphere_point,
)
from .polynomials import (
    FormBasis,
    HomogeneousForm,
    TaylorPolynomial,
    compose_truncated,
    eval_form,
    leading_term,
    monomial_basis,
    vanishing_space,
)
from .jets import ArcJet, NondegeneracyReport, circle_arc_jet, jet_nondegeneracy, numeric_jet
from .witness import (
    ScalarField,
    SmoothStep,
    control_fields,
    earring_witness,
    fd_derivative,
    field_by_name,
    min_abs_on_annulus,
    zero_set_distance,
)
from .lojasiewicz import (
    ExponentFitReport,
    FlatnessBoundReport,
    FlatnessCertificate,
    certify_flatness_via_directions,
    check_flatness_bound,
    fit_exponent,
)

__all__ = [
    "SCHEMA",
    "__version__",
    "ArcJet",
    "CircleSpec",
    "DirectionSet",
    "EarringFamily",
    "EmptySampleError",
    "ExponentFitReport",
    "FlatnessBoundReport",
    "FlatnessCertificate",
    "FormBasis",
    "HomogeneousForm",
    "NondegeneracyReport",
    "ScalarField",
    "SmoothStep",
    "SphereFamilySpec",
    "TaylorPolynomial",
    "XAxisFamily",
    "certify_flatness_via_directions",
    "check_flatness_bound",
    "circle_arc_jet",
    "circle_point",
    "compose_truncated",
    "control_fields",
    "covering_radius",
    "dist_to_earring",
    "earring_distances",
    "earring_witness",
    "eval_form",
    "fd_derivative",
    "field_by_name",
    "fit_exponent",
    "jet_nondegeneracy",
    "leading_term",
    "min_abs_on_annulus",
    "monomial_basis",
    "numeric_jet",
    "ray_intersections",
    "secant_directions",
    "sphere_point",
    "vanishing_space",
    "zero_set_distance",
]
