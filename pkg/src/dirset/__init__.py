"""Direction sets of function graphs over small finite fields.

Build a field, wrap a function as a value table plus reduced polynomial,
compute the slopes of its graph, and run the permutation / classification
criteria — one function at a time or as exhaustive campaigns.
"""

from .errors import (
    BudgetExceeded,
    CompositeCharacteristic,
    ConstantFunction,
    DegreeOutOfRange,
    DirsetError,
    DivisionByZero,
    InternalDisagreement,
    InvalidSpec,
    LengthMismatch,
    NonDivisor,
    PreconditionViolated,
    SizeLimit,
    ZeroInR,
)
from .field_core import ElementSet, FieldContext, build_field, mult_subgroup
from .poly_fn import (
    FqFunction,
    MonomialForm,
    detect_monomial_form,
    evaluate,
    format_poly,
    interpolate,
    is_additive,
    is_affine,
    parse_poly,
    parse_table,
    reduced_degree,
)
from .direction_engine import (
    DirectionSet,
    HSetChecks,
    HSetReport,
    LineIncidence,
    Theorem1Report,
    build_h_set,
    direction_set,
    direction_set_within,
    inverse_set,
    line_intersection_count,
    product_set,
    ratio_stabilizer,
    shift_set,
    theorem1_check,
)
from .criteria_verify import (
    CampaignSpec,
    Cor2Result,
    SziklaiResult,
    Verdict,
    VerificationReport,
    cor1_criterion,
    cor2_criterion,
    is_permutation_oracle,
    main2_criterion,
    result1_check,
    result2_check,
    run_campaign,
    run_search,
    sziklai_classify,
)

__version__ = "0.1.0"
