"""Exception types shared across the package."""


class SelfSimError(Exception):
    pass


class UnknownGenerator(SelfSimError, KeyError):
    pass


class NonterminatingRewrite(SelfSimError):
    pass


class WordProblemUnavailable(SelfSimError):
    pass


class GroupDefinitionError(SelfSimError, ValueError):
    pass


class NotAComplex(SelfSimError):
    pass


class NotChainCompatible(SelfSimError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotCompatible(SelfSimError):
    pass


class Undetermined(SelfSimError):
    """A computation that could not be certified; carries diagnostics."""

    def __init__(self, message, data=None):
        super().__init__(message)
        self.data = data if data is not None else {}


class NotComposable(SelfSimError):
    pass


class NotFullBisection(SelfSimError, ValueError):
    pass


class OverlappingSupport(SelfSimError, ValueError):
    pass


class IndexNonzero(SelfSimError):
    pass
