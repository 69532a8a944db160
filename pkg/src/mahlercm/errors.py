"""Exception types shared across the package."""


class MahlerCMError(Exception):
    """Base class; carries a short machine-readable code for CLI output."""

    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class NotFound(MahlerCMError):
    code = "not_found"


class InsufficientPrecision(MahlerCMError):
    code = "insufficient_precision"


class NoConvergence(MahlerCMError):
    code = "no_convergence"


class PrecisionLoss(MahlerCMError):
    code = "precision_loss"


class DomainError(MahlerCMError):
    code = "domain_error"


class BadDiscriminant(MahlerCMError):
    code = "bad_discriminant"


class TruncationTooShort(MahlerCMError):
    code = "truncation_too_short"


class NonIntegralCoefficients(MahlerCMError):
    code = "non_integral_coefficients"


class StrategyPrecisionExceeded(MahlerCMError):
    code = "strategy_precision_exceeded"


class TailBoundExceeded(MahlerCMError):
    code = "tail_bound_exceeded"


class SingularSystem(MahlerCMError):
    code = "singular_system"


class ConjugacyViolation(MahlerCMError):
    code = "conjugacy_violation"


class KernelNotSubgroup(MahlerCMError):
    code = "kernel_not_subgroup"


class AGMBranchFailure(MahlerCMError):
    code = "agm_branch_failure"


class NotNearInteger(MahlerCMError):
    code = "not_near_integer"


class NetworkError(MahlerCMError):
    code = "network_error"


class ChecksumMismatch(MahlerCMError):
    code = "checksum_mismatch"
