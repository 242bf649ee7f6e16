"""Exception hierarchy shared by every module."""


class BeauvilleError(Exception):
    """Base class for all errors raised by this package."""


class ConstructionError(BeauvilleError):
    """A group could not be constructed from the given data."""


class OrderCapExceeded(ConstructionError):
    pass


class InvalidPermutation(ConstructionError):
    pass


class NotNormal(ConstructionError):
    pass


class NotSubgroup(ConstructionError):
    pass


class NotAnAutomorphism(ConstructionError):
    pass


class ActionNotHomomorphic(ConstructionError):
    pass


class SemidirectNonexistent(ConstructionError):
    pass


class CosetLimitExceeded(ConstructionError):
    pass


class UnboundGenerator(ConstructionError):
    pass


class SpecError(BeauvilleError):
    """Raised by the spec parser; carries a 1-based position and token."""

    def __init__(self, message, line=None, column=None, token=None):
        self.line = line
        self.column = column
        self.token = token
        where = ""
        if line is not None:
            where = f" at line {line}, column {column}"
            if token is not None:
                where += f" near {token!r}"
        super().__init__(message + where)


class SpecSyntaxError(SpecError):
    pass


class UnknownGenerator(SpecError):
    pass


class ArityError(SpecError):
    pass


class DegenerateInput(BeauvilleError):
    """Input is well formed but the requested quantity is undefined for it."""


class NotTwoGenerated(DegenerateInput):
    pass


class DegenerateTrivialGroup(DegenerateInput):
    pass


class NotGenerating(BeauvilleError):
    pass


class EmptyFamily(BeauvilleError):
    pass


class PremiseFailed(BeauvilleError):
    def __init__(self, premise, detail=""):
        self.premise = premise
        super().__init__(f"premise failed: {premise}" + (f" ({detail})" if detail else ""))


class ImagesNotStructure(BeauvilleError):
    pass
