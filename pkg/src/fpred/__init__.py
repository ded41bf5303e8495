"""Predicative System F: kernel syntax, type checking with kind cumulativity,
a hereditary-substitution normalizer with a multiset-of-kinds termination
measure, an independent reduction oracle, and a metatheory property harness.
"""

from .contexts import (
    EMPTY,
    ETVar,
    EVar,
    Empty,
    Env,
    get_kind,
    get_var,
    remove_var,
    wf_env,
    wf_typ,
)
from .hereditary import (
    CheckError,
    HsubstInput,
    InternalInvariantViolation,
    PostNotNormal,
    PostNotReachable,
    PostOrdtypViolated,
    PostTypeMismatch,
    PreViolated,
    hsubst,
    hsubst_checked,
    hsubst_instrumented,
    is_abs,
    normalize,
    normalize_checked,
    normalize_instrumented,
    postcondition_holds,
    precondition_holds,
)
from .measure import (
    HerMeasure,
    KindBag,
    TypeMeasure,
    depth,
    her_less,
    kinds_of,
    mul_sum,
    multiset_lt,
    ordtyp,
    term_size,
    type_order,
)
from .reduction import (
    FuelExhausted,
    ReductionTrace,
    build_trace,
    is_neutral,
    is_normal,
    normalize_fuel,
    step,
    step_with_path,
)
from .surface import (
    ParseError,
    SourceSpan,
    SurfaceDecl,
    parse_program,
    parse_term,
    parse_type,
    print_term,
    print_type,
)
from .syntax import (
    Abs,
    All,
    App,
    Arrow,
    Kind,
    TAbs,
    TApp,
    TVar,
    Term,
    Typ,
    Var,
    shift,
    shift_typ,
    subst,
    subst_typ,
    tshift,
    tsubst,
)
from .testkit import enumerate_terms, enumerate_well_typed, gen_well_typed
from .typecheck import (
    ErrorKind,
    TypingError,
    check_kinding,
    infer_kind,
    infer_type,
    kinding_search_oracle,
    try_infer_type,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
