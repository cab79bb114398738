"""Independent brute-force counts over small finite fields."""
from .counts import (
    BudgetExceeded,
    OracleError,
    OracleResult,
    centralizer_order_gl,
    commutant_dim,
    count_classes_gl,
    count_classes_mn,
    count_unipotent,
    gamma,
    gamma_prime,
    gl_order_enum,
    run,
)
from .field import FieldError, FieldSpec, field_ops, gf

__all__ = [
    "BudgetExceeded",
    "FieldError",
    "FieldSpec",
    "OracleError",
    "OracleResult",
    "centralizer_order_gl",
    "commutant_dim",
    "count_classes_gl",
    "count_classes_mn",
    "count_unipotent",
    "field_ops",
    "gamma",
    "gamma_prime",
    "gf",
    "gl_order_enum",
    "run",
]
