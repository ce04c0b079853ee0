"""Exception hierarchy.

Every error carries a machine-readable ``code`` and the process exit status
the command-line front end uses when the error escapes a command.
"""


class NCSiegelError(Exception):
    code = "error"
    exit_status = 2


class ParseError(NCSiegelError, ValueError):
    code = "parse_error"
    exit_status = 3

    def __init__(self, message, path=None, offset=None):
        self.message = message
        self.path = path
        self.offset = offset
        where = []
        if path is not None:
            where.append(f"at {path}")
        if offset is not None:
            where.append(f"byte {offset}")
        super().__init__(message + (f" ({', '.join(where)})" if where else ""))


class ShapeMismatch(NCSiegelError, ValueError):
    code = "shape_mismatch"


class ConstantTermNonzero(NCSiegelError, ValueError):
    code = "constant_term_nonzero"


class DivisionByIndistinguishableZero(NCSiegelError, ZeroDivisionError):
    code = "division_by_indistinguishable_zero"
    exit_status = 4


class PrecisionExhausted(NCSiegelError, ArithmeticError):
    code = "precision_exhausted"
    exit_status = 4


class Undecidable(NCSiegelError, ArithmeticError):
    """An equality test could not be settled at the working precision."""

    code = "undecidable"
    exit_status = 4


class BackendUnsupported(NCSiegelError, TypeError):
    code = "backend_unsupported"


class NotNormalized(NCSiegelError, ValueError):
    code = "not_normalized"


class NormTooLarge(NCSiegelError, ValueError):
    code = "norm_too_large"


class RadiusViolation(NCSiegelError, ValueError):
    code = "radius_violation"


class NotDiagonal(NCSiegelError, ValueError):
    code = "not_diagonal"


class NotSemisimple(NCSiegelError, ValueError):
    code = "not_semisimple"


class ResonantObstruction(NCSiegelError, ValueError):
    code = "resonant_obstruction"


class SiegelConditionViolated(NCSiegelError, ValueError):
    code = "siegel_condition_violated"


class ContractionFailure(NCSiegelError, AssertionError):
    code = "contraction_failure"


class ScheduleViolation(NCSiegelError):
    code = "schedule_violation"
    exit_status = 5


class ScheduleDivergence(ScheduleViolation):
    code = "schedule_divergence"


class NoFeasibleB(ScheduleViolation):
    code = "no_feasible_B"


class EmptyGrid(NCSiegelError, ValueError):
    code = "empty_grid"


class InconsistentWeights(NCSiegelError, ValueError):
    code = "inconsistent_weights"


class NotInIdeal(NCSiegelError, ValueError):
    code = "not_in_ideal"


class EigenvalueOutsideDisk(NCSiegelError, ValueError):
    """Some eigenvalue has ``|lambda| > 1``."""

    code = "eigenvalue_outside_disk"
