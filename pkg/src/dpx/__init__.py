"""Exact computation with double Poisson extensions, double Ore extensions
over Q(t), their semiclassical limits at t = 1 and deformations at t = lambda."""

__version__ = "0.1.0"

from .dpe import (
    CriterionFails,
    DEData,
    ExtensionRing,
    InvalidDEDataError,
    IteratedForm,
    PoissonPolyExtData,
    build_extension,
    check_dedata,
    check_poisson_poly_ext,
    detect_iterated,
    from_iterated,
    normalize_dedata,
    shift_variable,
)
from .document import Document, format_document, load_document, parse_document
from .errors import (
    CongruenceError,
    DpxError,
    NotDivisibleError,
    ParseError,
    PoleError,
    ReductionError,
    RingMismatchError,
)
from .expr import parse_poly, parse_scalar
from .ncalg import (
    NCElement,
    NCPresentation,
    commutator_limit_bracket,
    confluence_check,
    element,
    nc_multiply,
    normal_form,
)
from .pbracket import PoissonStructure, bracket, hamiltonian, jacobi_check
from .poly import QQ, QQT, Derivation, Poly, PolyRing
from .scalar import (
    RatFunc,
    lagrange_interpolate,
    rf_arith,
    rf_derivative,
    rf_div_t_minus_1,
    rf_eval,
)
from .scl import (
    LimitResult,
    ParamFamily,
    build_family_from_target,
    crosscheck_limit,
    deform,
    limit_coefficients,
    limit_dedata,
    semiclassical_limit,
    validate_family,
)
