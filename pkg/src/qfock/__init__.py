"""q-deformed Fock space toolkit.

Exact symbolic algebra of the q-commutation relations, truncated matrix
representations with Gram-aware adjoints and norms, and an experiment
harness for the ergodic-average bounds, behind an HTTP service and CLI.
"""

from .errors import (
    BoundViolationError,
    ConditioningError,
    DomainError,
    ExprSyntaxError,
    QFockError,
    SizeError,
    WindowOverflowError,
)
from .fockcore import (
    TruncatedFock,
    build_basis,
    gram_blocks,
    inner_q_bruteforce,
    inner_q_recursive,
    min_gram_eigenvalue,
)
from .qcombinat import Permutation, QPolynomial, all_permutations, inversions, q_factorial
from .qops import (
    GramFactor,
    LevelOperator,
    NormReport,
    m_operator,
    matrix_annihilator,
    matrix_creator,
    matrix_of_expr,
    number_operator,
    op_norm_q,
    q_adjoint,
)
from .wickalg import (
    WickExpr,
    WickMonomial,
    annihilator,
    creator,
    field_op,
    multiply,
    normal_order,
    shift,
    time_reverse,
    vacuum_expectation,
)

__all__ = [
    "BoundViolationError",
    "ConditioningError",
    "DomainError",
    "ExprSyntaxError",
    "QFockError",
    "SizeError",
    "WindowOverflowError",
    "TruncatedFock",
    "build_basis",
    "gram_blocks",
    "inner_q_bruteforce",
    "inner_q_recursive",
    "min_gram_eigenvalue",
    "Permutation",
    "QPolynomial",
    "all_permutations",
    "inversions",
    "q_factorial",
    "GramFactor",
    "LevelOperator",
    "NormReport",
    "m_operator",
    "matrix_annihilator",
    "matrix_creator",
    "matrix_of_expr",
    "number_operator",
    "op_norm_q",
    "q_adjoint",
    "WickExpr",
    "WickMonomial",
    "annihilator",
    "creator",
    "field_op",
    "multiply",
    "normal_order",
    "shift",
    "time_reverse",
    "vacuum_expectation",
]

__version__ = "0.1.0"
