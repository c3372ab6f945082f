"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class DomainError(ValueError):
    """A mathematically meaningful failure (exit code 1 on the command line)."""


class PreconditionError(DomainError):
    pass


class IncoherentError(DomainError):
    """Local invariants whose product violates the reciprocity law."""


class SearchExhausted(DomainError):
    """A bounded constructive search ran out of candidates."""


class PrecisionError(DomainError):
    pass
