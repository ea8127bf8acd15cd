"""Exception hierarchy shared across the pipeline."""

from __future__ import annotations


class ATrainError(Exception):
    """Base class for all errors raised by this package."""


# media

class UnreadableMediaError(ATrainError):
    """Input file is corrupt or its container is not supported."""


class NoAudioStreamError(ATrainError):
    """Input file carries no audio stream."""


class ConverterNotFoundError(ATrainError):
    """No media converter executable could be resolved."""


class ConversionFailedError(ATrainError):
    """External converter exited nonzero.

    Carries the captured diagnostics so the failure can be inspected
    without re-running the converter.
    """

    def __init__(self, message: str, diagnostics: str = ""):
        super().__init__(message)
        self.diagnostics = diagnostics


# engines / models

class ModelNotInstalledError(ATrainError):
    """Requested model is not present in the local model directory."""

    def __init__(self, model_id: str, hint: str = ""):
        msg = f"model '{model_id}' is not installed"
        if hint:
            msg += f"; {hint}"
        super().__init__(msg)
        self.model_id = model_id


class EngineFailureError(ATrainError):
    """An ASR or diarization backend crashed; message carries diagnostics."""


class UnsupportedLanguageError(ATrainError):
    """Language code outside the supported set."""


class DeviceUnavailableError(ATrainError):
    """A gpu device was requested but no compatible accelerator is present."""


class ChecksumMismatchError(ATrainError):
    """Downloaded model data does not match its expected checksum."""


class DownloadFailedError(ATrainError):
    """Model download did not complete."""


# export

class NegativeTimeError(ATrainError):
    """Timestamps below zero cannot be formatted."""


# jobs

class InvalidConfigError(ATrainError):
    """Job configuration violates an invariant."""


class JobNotFoundError(ATrainError):
    """No job with the given id exists."""


class JobCancelledError(ATrainError):
    """Raised inside a running pipeline when its job was cancelled."""


class ZeroDurationError(ATrainError):
    """Relative processing time is undefined for zero-length recordings."""


class NetworkAttemptDeniedError(ATrainError, ConnectionError):
    """An outbound network operation was attempted during an offline run."""


class EmptyResultsError(ATrainError):
    """Benchmark report requested over an empty result set."""
