"""Exception classes shared across the package."""


class StructProbeError(Exception):
    """Base class for all package errors."""


class ConlluParseError(StructProbeError):
    """Malformed CoNLL-U input (wrong column count etc.); carries the line number."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class TreeValidationError(StructProbeError):
    """Head assignment does not form a single rooted tree; carries the sentence id."""

    def __init__(self, message, sentence_id=None):
        if sentence_id is not None:
            message = f"sentence {sentence_id!r}: {message}"
        super().__init__(message)
        self.sentence_id = sentence_id


class EmbeddingFormatError(StructProbeError):
    """Bad magic, version, or header in an EMB1 stream."""


class EmbeddingCorruptionError(StructProbeError):
    """Truncated or length-inconsistent EMB1 record; carries the byte offset."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"byte offset {offset}: {message}"
        super().__init__(message)
        self.offset = offset


class EmbeddingDataError(StructProbeError):
    """Non-finite values in a stored embedding; carries the sentence id."""

    def __init__(self, message, sentence_id=None):
        if sentence_id is not None:
            message = f"sentence {sentence_id!r}: {message}"
        super().__init__(message)
        self.sentence_id = sentence_id


class AlignmentError(StructProbeError):
    """Tree/embedding pair with the same id but mismatched token counts."""


class DivergenceError(StructProbeError):
    """Non-finite loss encountered during probe training."""

    def __init__(self, epoch, learning_rate):
        super().__init__(
            f"non-finite loss at epoch {epoch} (learning rate {learning_rate})"
        )
        self.epoch = epoch
        self.learning_rate = learning_rate


class SweepError(StructProbeError):
    """Sweep configuration or manifest problem."""
