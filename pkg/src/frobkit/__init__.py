"""frobkit: Frobenius roots, star and sharp closures, and test ideals over F_p."""

from .errors import (
    ContextMismatch,
    ExponentOverflow,
    FrobkitError,
    IterationCapExceeded,
    ParseError,
    PreconditionError,
)
from .frobenius import (
    FrobeniusMultiplier,
    IdealChain,
    bracket_power,
    frobenius_root,
    hsl_chain,
    is_es_ideal,
    nu,
    pth_root_decompose,
    sharp_closure,
    sharp_closure_chain,
    star_closure,
    verify_sharp_chain,
)
from .groebner import (
    Ideal,
    QuotientPresentation,
    eliminate,
    groebner_basis,
    ideal_colon,
    ideal_equal,
    ideal_intersect,
    ideal_product,
    ideal_sum,
    normal_form,
    quotient_dimension,
)
from .ring import MonomialOrder, Polynomial, RingContext, format_poly, parse_poly, poly_mul, poly_pow
from .tight import (
    ESModuleDescriptor,
    TestIdealResult,
    ci_zero_star,
    graded_ann_chain,
    graded_ann_component,
    n_phi_ideal,
    quasi_gorenstein_test_ideal,
    quotient_graded_ann,
    tc_annihilator,
    wpti,
    wpti_limit,
)

__version__ = "0.1.0"
