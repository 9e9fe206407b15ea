"""Exception types raised across the package.

Every error carries a human-readable message; none of them wrap lower-level
exceptions silently, so failure causes stay visible at the call site.
"""


class EmpathError(Exception):
    """Base class for all package-specific errors."""


# audio I/O

class MalformedContainer(EmpathError):
    """WAV bytes are not a well-formed RIFF/WAVE container."""


class UnsupportedEncoding(EmpathError):
    """WAV container is valid but not 16-bit PCM with 1 or 2 channels."""


class EmptyClip(EmpathError):
    """Operation requires at least one audio sample."""


# feature extraction

class SampleRateMismatch(EmpathError):
    """Clip sample rate differs from the feature configuration."""


class NonPowerOfTwoSize(EmpathError):
    """FFT input length must be a power of two."""


class TooFewBins(EmpathError):
    """FFT resolution cannot host the requested number of mel filters."""


class ShapeMismatch(EmpathError):
    """Array shapes are inconsistent with the operation's contract."""


class CacheFormatError(EmpathError):
    """Feature cache file is malformed or disagrees with the configuration."""


# neural network core

class OddSpatialDim(EmpathError):
    """2x2 max-pooling requires even spatial dimensions."""


class LabelOutOfRange(EmpathError):
    """Class label index is outside [0, num_classes)."""


class EmptySequence(EmpathError):
    """Recurrent layer received a zero-length input sequence."""


class IndexOutOfRange(EmpathError):
    """Embedding index exceeds the reserved out-of-vocabulary row."""


class CheckpointError(EmpathError):
    """Checkpoint file is malformed or of an unexpected model kind."""


# datasets and training

class EmptyDataset(EmpathError):
    """Training or evaluation requires a nonempty dataset."""


# suggestion corpus and embeddings

class ParseError(EmpathError):
    """Corpus line could not be parsed; message includes the line number."""


class DuplicateId(EmpathError):
    """Two corpus entries share the same id."""


class InvalidEmotion(EmpathError):
    """Corpus entry names an emotion outside {anger, fear, sadness}."""


class InvalidLanguage(EmpathError):
    """Corpus entry names a language outside {en, fa}."""


class InconsistentDimension(EmpathError):
    """Embedding file rows disagree on vector dimension."""


class DuplicateToken(EmpathError):
    """Embedding file defines the same token twice."""


class EmptyFile(EmpathError):
    """Embedding file contains no vectors."""


class EmptyTokenSequence(EmpathError):
    """Recommender input tokenized to nothing."""


class EmptyCorpus(EmpathError):
    """Recommender training requires at least one suggestion."""


class InsufficientCandidates(EmpathError):
    """No suggestions exist for the requested language."""


# text-to-speech

class TtsError(EmpathError):
    """Base class for synthesis backend failures."""


class BackendUnreachable(TtsError):
    """HTTP synthesis backend could not be contacted."""


class BackendError(TtsError):
    """HTTP synthesis backend answered with a non-2xx status."""


class Timeout(TtsError):
    """HTTP synthesis backend did not answer within the configured timeout."""


class MalformedResponse(TtsError):
    """HTTP synthesis backend returned bytes that do not decode as WAV."""


class TemplateError(EmpathError):
    """Notification template file is missing a language or a required key."""


# pipeline service

class PipelineError(EmpathError):
    """Analyze-call failure attributed to a pipeline stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


class DecodeError(PipelineError):
    """Uploaded audio could not be decoded."""

    def __init__(self, message: str):
        super().__init__("decode", message)


class ModelNotLoaded(EmpathError):
    """Service was asked to analyze before its models were loaded."""


class ConfigError(EmpathError):
    """Service configuration file is missing, malformed, or incomplete."""
