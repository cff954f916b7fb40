"""Shared exception hierarchy."""


class OntoforgeError(Exception):
    """Base class for all data and usage errors raised by this package."""


class CorpusError(OntoforgeError):
    """Malformed or inconsistent corpus input."""


class LexiconError(OntoforgeError):
    """Malformed POS lexicon or stoplist file."""


class EmbeddingError(OntoforgeError):
    """Invalid training configuration, vocabulary, or model file."""


class OOVError(EmbeddingError):
    """A queried token is not in the model vocabulary."""

    def __init__(self, token: str):
        super().__init__(f"token not in vocabulary: {token!r}")
        self.token = token


class OntologyError(OntoforgeError):
    """Knowledge-base constraint violation or malformed KB file."""


class ValidationError(OntoforgeError):
    """Invalid judgment operation or malformed judgment file."""


class TemporalError(OntoforgeError):
    """Temporal analysis precondition failure."""
