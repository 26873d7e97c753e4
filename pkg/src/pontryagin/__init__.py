"""Exact computations for lifting group extensions to braided 2-group extensions.

The toolkit evaluates the Pontryagin-square obstruction class in H^4(G, H)
from skeletal data and counts the lifts as a torsor over H^3(G, H).
"""

__version__ = "0.1.0"

from .action_data import (
    BraidedActionData,
    BraidedAutObject,
    action_data_space,
    action_isomorphic,
    compose_aut,
    gauge_transform,
    search_action_data,
    search_aut_objects,
    validate_action_data,
    validate_aut_object,
)
from .braided import (
    AbelianThreeCocycle,
    ab3_equivalent,
    quadratic_trace,
    standard_cyclic,
    validate_ab3,
)
from .cochains import Cochain, differential, is_cocycle, shift_by_coboundary
from .cohomology import (
    CohomologyGroup,
    class_order,
    classes_equal,
    cohomology_group,
    enumerate_cocycles,
    is_coboundary,
)
from .errors import (
    AxiomViolation,
    ConstructionError,
    InternalError,
    InvalidOrderError,
    PontryaginError,
    PreconditionError,
    ScaleError,
    ShapeError,
)
from .groups import FiniteGroup, direct_product, from_table, make_cyclic
from .linalg import IntegerMatrix, smith_normal_form
from .modules import FinAbModule, GAction, ModuleAutomorphism, cyclic_module, enumerate_actions
from .obstruction import (
    ClassificationReport,
    THETA_SIGN,
    ExtensionDatum,
    build_extension,
    classical_pontryagin,
    classify,
    extension_diagnostic,
    pontryagin_square,
    pontryagin_squares,
)

__all__ = [
    "__version__",
    "BraidedActionData",
    "BraidedAutObject",
    "action_data_space",
    "action_isomorphic",
    "compose_aut",
    "gauge_transform",
    "search_action_data",
    "search_aut_objects",
    "validate_action_data",
    "validate_aut_object",
    "AbelianThreeCocycle",
    "ab3_equivalent",
    "quadratic_trace",
    "standard_cyclic",
    "validate_ab3",
    "Cochain",
    "differential",
    "is_cocycle",
    "shift_by_coboundary",
    "CohomologyGroup",
    "class_order",
    "classes_equal",
    "cohomology_group",
    "enumerate_cocycles",
    "is_coboundary",
    "AxiomViolation",
    "ConstructionError",
    "InternalError",
    "InvalidOrderError",
    "PontryaginError",
    "PreconditionError",
    "ScaleError",
    "ShapeError",
    "FiniteGroup",
    "direct_product",
    "from_table",
    "make_cyclic",
    "IntegerMatrix",
    "smith_normal_form",
    "FinAbModule",
    "GAction",
    "ModuleAutomorphism",
    "cyclic_module",
    "enumerate_actions",
    "ClassificationReport",
    "THETA_SIGN",
    "ExtensionDatum",
    "build_extension",
    "classical_pontryagin",
    "classify",
    "extension_diagnostic",
    "pontryagin_square",
    "pontryagin_squares",
]
