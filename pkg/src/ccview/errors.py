"""Exception hierarchy.

Every error carries its class name as a stable, machine-parsable prefix; the
CLI prints ``ClassName: message`` on a single line.
"""


class CCViewError(Exception):
    """Base class for all errors raised by the package."""


class SchemaError(CCViewError):
    """A schema, domain or tuple violates its structural invariants."""


class SchemaMismatch(CCViewError):
    pass


class NotApplicable(CCViewError):
    """An update was applied to a state it was not computed for."""


class StateSpaceTooLarge(CCViewError):
    pass


class InvalidView(CCViewError):
    pass


class NoConstructiveComplement(CCViewError):
    pass


class TranslationError(CCViewError):
    """Base class for failures while translating a view update."""


class InvalidViewUpdate(TranslationError):
    """The view update does not map the current view state to a view state."""


class NotTranslatable(TranslationError):
    """The view update has no translation at this base state.

    For constant-complement strategies this happens exactly when the target
    view state is incompatible with the current complement state.
    """


class NullNotSupported(TranslationError):
    pass


class InvalidStrategy(CCViewError):
    pass


class MissingKeyMetadata(CCViewError):
    pass


class NotATranslator(CCViewError):
    pass


class ParseError(CCViewError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, col {column}: {message}" if line else message)


class ResolutionError(CCViewError):
    pass
