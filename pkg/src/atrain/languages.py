"""Supported transcription languages.

The underlying whisper-class models cover 57 languages; recordings must be
in one of them (or ``auto`` for detection). Translation targets English only.
"""

from __future__ import annotations

from .errors import UnsupportedLanguageError

AUTO = "auto"

# ISO 639-1 codes of the 57 languages the transcription models support.
SUPPORTED_LANGUAGES: frozenset[str] = frozenset({
    "af", "ar", "hy", "az", "be", "bs", "bg", "ca", "zh", "hr",
    "cs", "da", "nl", "en", "et", "fi", "fr", "gl", "de", "el",
    "he", "hi", "hu", "is", "id", "it", "ja", "kn", "kk", "ko",
    "lv", "lt", "mk", "ms", "mr", "mi", "ne", "no", "fa", "pl",
    "pt", "ro", "ru", "sr", "sk", "sl", "es", "sw", "sv", "tl",
    "ta", "th", "tr", "uk", "ur", "vi", "cy",
})


def validate_language(code: str) -> str:
    """Return the normalized language code, or raise UnsupportedLanguageError.

    ``auto`` passes through and requests in-engine language detection.
    """
    normalized = code.strip().lower()
    if normalized == AUTO:
        return AUTO
    if normalized not in SUPPORTED_LANGUAGES:
        raise UnsupportedLanguageError(
            f"language '{code}' is not one of the {len(SUPPORTED_LANGUAGES)} supported codes"
        )
    return normalized
