"""Exception hierarchy shared across the toolkit."""


class ScriptforgeError(Exception):
    """Base class for all toolkit errors."""


class IoFailure(ScriptforgeError):
    """A file could not be read or decoded."""


class TokenizationFailure(ScriptforgeError):
    """No inventory entry matches at some position of a word."""

    def __init__(self, word: str, position: int):
        self.word = word
        self.position = position
        super().__init__(f"cannot tokenize {word!r} at position {position}")


class EmptyCorpus(ScriptforgeError):
    """Zero sentences survived loading."""


class WrongStorageOrder(ScriptforgeError):
    """Transform applied to a corpus already in the target order."""


class StreamTooShort(ScriptforgeError):
    """Grapheme stream shorter than the model order requires."""


class EmptyTable(ScriptforgeError):
    """A transition table with no entries cannot yield entropies."""


class InsufficientData(ScriptforgeError):
    """Not enough sentences/transitions for a resampling procedure."""


class NoGraphemes(ScriptforgeError):
    """Positional classification is empty."""


class NoTransitions(ScriptforgeError):
    """Corpus has no word-boundary transitions."""


class NoWords(ScriptforgeError):
    """Corpus has no words at the requested position."""


class PoolExhausted(ScriptforgeError):
    """Slot pool combinatorics cannot supply the requested vocabulary."""


class MissingSource(ScriptforgeError):
    """A learned table was requested without a source corpus."""


class EmptyPlaintext(ScriptforgeError):
    """Respacing requires at least one plaintext letter."""


class NoUnambiguousAlternative(ScriptforgeError):
    """Bounded redraws found no re-tokenization-safe glyph pair."""


class DeadEnd(ScriptforgeError):
    """A Markov context has no successors and no fallback applies."""


class ConfigError(ScriptforgeError):
    """A config file or parameter set failed validation."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
