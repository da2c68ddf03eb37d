"""
Algebra Error Taxonomy
======================
Every domain failure raised by the library carries a machine-readable code so
the command layer can report it without parsing messages.

Location: algebra/exceptions.py
"""

from typing import Any, Dict


class AlgebraError(Exception):
    """Base class for all domain errors of the algebra app."""

    code = "algebra_error"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": str(self), **self.context}


class InvalidArgument(AlgebraError):
    code = "invalid_argument"


class UsageError(AlgebraError):
    """Malformed command-line input (exit code 2)."""

    code = "usage"


# Scalars and matrices

class NegativeValuation(AlgebraError):
    code = "negative_valuation"


class ZeroMatrix(AlgebraError):
    code = "zero_matrix"


class SingularMatrix(AlgebraError):
    code = "singular_matrix"


class BackendMismatch(AlgebraError):
    code = "backend_mismatch"


# Rings

class NotPrime(AlgebraError):
    code = "not_prime"


class SingularMooreMatrix(AlgebraError):
    code = "singular_moore_matrix"


class NotIntegralBasis(AlgebraError):
    code = "not_integral_basis"


class RingMismatch(AlgebraError):
    code = "ring_mismatch"


class DepthMismatch(AlgebraError):
    code = "depth_mismatch"


class DepthExceeded(AlgebraError):
    code = "depth_exceeded"


# Skew polynomials

class NotMonic(AlgebraError):
    code = "not_monic"


class DependentReduction(AlgebraError):
    code = "dependent_reduction"


class SingularTruncatedMoore(AlgebraError):
    code = "singular_truncated_moore"


class NonUnitCoefficient(AlgebraError):
    code = "non_unit_coefficient"


# Codes

class BudgetExceeded(AlgebraError):
    code = "budget_exceeded"

    def __init__(self, count: int, budget: int):
        super().__init__(
            f"enumeration of {count} codewords exceeds the budget of {budget}",
            count=count,
            budget=budget,
        )


class MonotonicityViolation(AlgebraError):
    code = "monotonicity_violation"


# Mustafin

class TooManyFactors(AlgebraError):
    code = "too_many_factors"


class RectangularityViolation(AlgebraError):
    code = "rectangularity_violation"


class SingularB(AlgebraError):
    code = "singular_b"


class CriterionViolation(AlgebraError):
    code = "criterion_violation"
