"""Exception hierarchy shared by every module."""


class MatroidError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSpec(MatroidError):
    pass


class TooLarge(MatroidError):
    pass


class NotAMatroid(MatroidError):
    """The derived rank table violates a rank axiom.

    ``witness`` holds the offending subsets as label lists.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class AxiomFailure(NotAMatroid):
    pass


class SubmodularityFailure(NotAMatroid):
    pass


class OverlappingSets(MatroidError):
    pass


class GroundMismatch(MatroidError):
    pass


class NotAFlat(MatroidError):
    pass


class NotAModularCut(MatroidError):
    pass


class CloneCheckFailure(MatroidError):
    pass


class PreconditionFailure(MatroidError):
    pass


class NotExact3Separation(PreconditionFailure):
    pass


class NotAStrand(PreconditionFailure):
    pass


class NotAdjacent(PreconditionFailure):
    pass


class NotExtendable(MatroidError):
    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class PlanInvalid(MatroidError):
    pass


class StepBlocked(MatroidError):
    def __init__(self, message, step=None, verdict=None):
        super().__init__(message)
        self.step = step
        self.verdict = verdict


class ParseError(MatroidError):
    pass


class SchemaError(ParseError):
    pass
