"""Exception types shared across the library."""


class TokfstError(Exception):
    """Base class for all errors raised by this library."""


class AlphabetError(TokfstError):
    """A symbol or character is not present in the relevant alphabet."""


class ConfigError(TokfstError):
    """Machines or tokenizer pieces were combined inconsistently."""


class ValidationError(TokfstError):
    """A vocabulary, merge list or serialized file violates its format."""


class PatternSyntaxError(TokfstError):
    """Malformed pattern text. Carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class InputError(TokfstError):
    """An input string contains characters outside the vocabulary."""


class EnumerationError(TokfstError):
    """Bounded language enumeration exceeded its path budget."""

    def __init__(self, message: str, partial_count: int):
        super().__init__(message)
        self.partial_count = partial_count


class PromotionError(TokfstError):
    """A promotion pipeline produced a machine violating its contract."""


class ConstraintError(TokfstError):
    """Base class for guided-generation failures."""


class DeadConstraintError(ConstraintError):
    """The constraint automaton accepts nothing; decoding cannot start."""


class ConstraintViolationError(ConstraintError):
    """A token outside the current mask was fed to the constraint."""


class IncompleteGenerationError(ConstraintError):
    """Decoding hit its step budget in a non-terminable state."""

    def __init__(self, message: str, prefix: tuple[int, ...]):
        super().__init__(message)
        self.prefix = prefix
