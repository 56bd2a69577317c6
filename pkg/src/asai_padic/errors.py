"""Error kinds shared by every module.

Each exception carries a short machine-readable ``kind`` string so the CLI
can report failures uniformly.
"""


class ArtifactError(Exception):
    kind = "error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        return {"kind": self.kind, "message": str(self), **self.details}


class InvalidInput(ArtifactError, ValueError):
    kind = "invalid-input"


class UnsupportedOrder(ArtifactError):
    kind = "unsupported-order"


class PoleAtS(ArtifactError, ZeroDivisionError):
    kind = "pole-at-s"

    def __init__(self, message="", multiplicity=1, **details):
        super().__init__(message, multiplicity=multiplicity, **details)
        self.multiplicity = multiplicity


class UnsupportedCase(ArtifactError):
    kind = "unsupported-case"


class IndeterminateValue(ArtifactError):
    kind = "indeterminate-value"


class NotNearlyOrdinary(ArtifactError):
    kind = "not-nearly-ordinary"


class NonCritical(ArtifactError):
    kind = "non-critical"


class QuadratureFailure(ArtifactError):
    kind = "quadrature-failure"


class IncreaseM(ArtifactError):
    kind = "increase-M"


class NotAUnit(ArtifactError):
    kind = "not-a-unit"


class InsufficientLevel(ArtifactError):
    kind = "insufficient-level"


class PoleAtZero(ArtifactError):
    kind = "pole-at-zero"


class InternalConsistency(ArtifactError, AssertionError):
    kind = "internal-consistency"
