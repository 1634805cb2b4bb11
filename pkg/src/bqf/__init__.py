"""Exact arithmetic on integral binary quadratic forms.

Reduction (Gauss and Zagier), continued fractions of quadratic irrationals,
Pell equations, the Hirzebruch class-number formula, Dirichlet composition and
class groups, Bhargava cubes, carks with a representation solver, the Jimm
involution, and Penner's half-plane correspondence.
"""

from .numutil import DomainError, SearchExhausted, factorint, squarefree_part
from .forms import (
    Form,
    IDENTITY,
    L,
    S,
    UnimodularMatrix,
    act,
    classify,
    content,
    discriminant,
    evaluate_word,
    is_g_reduced,
    is_primitive,
    is_reduced_definite,
    is_semi_reduced,
    is_z_reduced,
)
from .reduction import (
    ContinuedFraction,
    FormClass,
    PellSolution,
    QuadraticIrrational,
    canonical_representative,
    cf_minus,
    cf_plus,
    cf_value,
    convergents,
    equivalent,
    gauss_reduce_indefinite,
    hirzebruch_class_number,
    pell,
    reduce_definite,
    root_of,
    zagier_reduce,
)
from .composition import (
    ClassGroup,
    class_group,
    compose,
    concordant_pair,
    identity_form,
    inverse,
    is_ambiguous,
    is_concordant,
    is_unitable,
)
from .cubes import Cube, DegenerateCubeError, act3, cube_forms, cube_from_pair, triple_product_check
from .carks import (
    BunchCode,
    Cark,
    aut_generator,
    cark_of,
    export_dot,
    inverse_code,
    is_ambiguous_symmetric,
    represent,
)
from .jimm import ExceptionalInputError, jimm_cf, jimm_class, jimm_value
from .geometry import (
    GaussianRationalPoint,
    Locus,
    common_locus,
    form_of_point,
    point_of_form,
    product_point_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
