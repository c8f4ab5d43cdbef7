"""Existence of primitive elements a (or pairs a, b) of a finite field for
which the combinations u*a + v*a^-1 (or u*a + v*b and v*a^-1 + u*b^-1) are
also primitive, for every choice of non-zero coefficients u, v.

The package has three layers:

* `ntcore` / `field` -- exact integer number theory (factorization,
  multiplicative profiles, prime-power enumeration) and F_q arithmetic with
  discrete logarithms;
* `screening` -- character-sum lower bounds and sieve refinements that prove
  all-(u,v) existence for almost every q, plus the worst-case survey that
  reduces "almost every" to an explicit finite candidate list;
* `verify` -- exhaustive per-field checkers and exact counting oracles for
  the candidates the bounds cannot settle.

The `uvprim` command line (see `cli`) batches all of it into JSON/CSV
reports.
"""

__version__ = "0.1.0"

from .errors import (
    BoundNotApplicableError,
    InvalidDivisorError,
    LogTableTooLargeError,
    NotAPrimePowerError,
)
from .ntcore import (
    ArithmeticProfile,
    DeltaValue,
    PrimePowerId,
    delta,
    enumerate_prime_powers,
    factorize,
    is_prime,
    is_prime_power,
    profile,
)
from .field import (
    FieldSpec,
    build_field,
    discrete_log,
    is_e_free,
    is_primitive,
    log_table,
    primitive_elements,
)
from .screening import (
    NEEDS_CHECK,
    ELEMENT_PROVED,
    PAIR_PROVED,
    BoundReport,
    ScreeningVerdict,
    SieveConfig,
    SurveyRow,
    auto_threshold,
    best_config,
    screen,
    survey,
    sweep,
)
from .verify import (
    MembershipResult,
    PairCountQuery,
    SingleCountQuery,
    check_element_membership_cover,
    check_element_membership_logs,
    check_pair_membership,
    count_pairs_free,
    count_single_free,
    special_case_witnesses,
)

__all__ = [
    "ArithmeticProfile",
    "BoundNotApplicableError",
    "BoundReport",
    "DeltaValue",
    "ELEMENT_PROVED",
    "FieldSpec",
    "InvalidDivisorError",
    "LogTableTooLargeError",
    "MembershipResult",
    "NEEDS_CHECK",
    "NotAPrimePowerError",
    "PAIR_PROVED",
    "PairCountQuery",
    "PrimePowerId",
    "ScreeningVerdict",
    "SieveConfig",
    "SingleCountQuery",
    "SurveyRow",
    "auto_threshold",
    "best_config",
    "build_field",
    "check_element_membership_cover",
    "check_element_membership_logs",
    "check_pair_membership",
    "count_pairs_free",
    "count_single_free",
    "delta",
    "discrete_log",
    "enumerate_prime_powers",
    "factorize",
    "is_e_free",
    "is_prime",
    "is_prime_power",
    "is_primitive",
    "log_table",
    "primitive_elements",
    "profile",
    "screen",
    "special_case_witnesses",
    "survey",
    "sweep",
    "__version__",
]
